#include "sncl/onehop_codes.hpp"

#include <cmath>
#include <stdexcept>

#include "sncl/anti_latin.hpp"
#include "sncl/combinatorics.hpp"

namespace sncl {

namespace {

std::size_t ipow(unsigned base, unsigned exp) {
  return static_cast<std::size_t>(checked_pow(base, exp));
}

Symbol add(unsigned a, unsigned b, unsigned d) { return static_cast<Symbol>((a + b) % d); }
Symbol sub(unsigned a, unsigned b, unsigned d) { return static_cast<Symbol>((a + d - b) % d); }
Symbol mul(unsigned a, unsigned b, unsigned d) { return static_cast<Symbol>((a * b) % d); }

void require_alphabet(unsigned d) {
  if (d < 2 || d > 255) throw std::invalid_argument("alphabet size must be in [2, 255]");
}

// Decodes a base-d index into `width` digits, most significant first.
void digits_of(std::size_t index, unsigned d, std::span<Symbol> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<Symbol>(index % d);
    index /= d;
  }
}

std::size_t index_of_digits(std::span<const Symbol> digits, unsigned d) {
  std::size_t idx = 0;
  for (auto v : digits) idx = idx * d + v;
  return idx;
}

template <typename EncFn, typename RelayFn>
OneHopCode tabulate(std::string id, unsigned d, unsigned shots, unsigned scrambles,
                    bool relay_randomness, EncFn&& enc, RelayFn&& rel,
                    std::vector<Symbol> decoder) {
  const std::size_t width = 2 * shots;
  const std::size_t src = ipow(d, 1 + scrambles);
  std::vector<Symbol> encoder(src * width);
  std::vector<Symbol> in(1 + scrambles);
  for (std::size_t i = 0; i < src; ++i) {
    digits_of(i, d, in);
    enc(std::span<const Symbol>(in), std::span<Symbol>(&encoder[i * width], width));
  }
  const unsigned rr = relay_randomness ? 1 : 0;
  const std::size_t rel_in = ipow(d, static_cast<unsigned>(width) + rr);
  std::vector<Symbol> relay(rel_in * 2);
  std::vector<Symbol> rin(width + rr);
  for (std::size_t i = 0; i < rel_in; ++i) {
    digits_of(i, d, rin);
    rel(std::span<const Symbol>(rin), std::span<Symbol>(&relay[i * 2], 2));
  }
  return OneHopCode(std::move(id), d, shots, scrambles, relay_randomness, std::move(encoder),
                    std::move(relay), std::move(decoder));
}

std::vector<Symbol> difference_decoder(unsigned d) {
  std::vector<Symbol> dec(d * d);
  for (unsigned y3 = 0; y3 < d; ++y3)
    for (unsigned y4 = 0; y4 < d; ++y4) dec[y3 * d + y4] = sub(y4, y3, d);
  return dec;
}

// Reads an affine form from a table by finite differences, then checks it on
// the whole domain.
std::optional<AffineForm> affine_form_of(unsigned d, std::size_t inputs, std::size_t outputs,
                                         const std::vector<Symbol>& table) {
  AffineForm form;
  form.offset.assign(table.begin(), table.begin() + outputs);
  form.coeff.assign(outputs, std::vector<std::uint32_t>(inputs, 0));
  for (std::size_t i = 0; i < inputs; ++i) {
    const std::size_t unit = ipow(d, static_cast<unsigned>(inputs - 1 - i));
    for (std::size_t o = 0; o < outputs; ++o)
      form.coeff[o][i] = sub(table[unit * outputs + o], form.offset[o], d);
  }
  std::vector<Symbol> x(inputs);
  const std::size_t domain = ipow(d, static_cast<unsigned>(inputs));
  for (std::size_t idx = 0; idx < domain; ++idx) {
    digits_of(idx, d, x);
    for (std::size_t o = 0; o < outputs; ++o) {
      std::uint32_t v = form.offset[o];
      for (std::size_t i = 0; i < inputs; ++i) v += form.coeff[o][i] * x[i];
      if (v % d != table[idx * outputs + o]) return std::nullopt;
    }
  }
  return form;
}

}  // namespace

std::string to_string(Edge e) { return "e" + std::to_string(static_cast<int>(e)); }

OneHopCode::OneHopCode(std::string id, unsigned d, unsigned shots, unsigned scrambles,
                       bool relay_randomness, std::vector<Symbol> encoder,
                       std::vector<Symbol> relay, std::vector<Symbol> decoder)
    : id_(std::move(id)),
      d_(d),
      shots_(shots),
      scrambles_(scrambles),
      relay_randomness_(relay_randomness),
      source_inputs_(0),
      encoder_(std::move(encoder)),
      relay_(std::move(relay)),
      decoder_(std::move(decoder)) {
  require_alphabet(d);
  if (shots != 1 && shots != 2) throw std::invalid_argument("shots must be 1 or 2");
  source_inputs_ = ipow(d, 1 + scrambles);
  const std::size_t width = 2 * shots;
  const std::size_t relay_inputs = ipow(d, static_cast<unsigned>(width) + (relay_randomness ? 1 : 0));
  if (encoder_.size() != source_inputs_ * width)
    throw std::invalid_argument("encoder table has wrong size");
  if (relay_.size() != relay_inputs * 2) throw std::invalid_argument("relay table has wrong size");
  if (decoder_.size() != static_cast<std::size_t>(d) * d)
    throw std::invalid_argument("decoder table has wrong size");
  for (const auto* t : {&encoder_, &relay_, &decoder_})
    for (auto v : *t)
      if (v >= d) throw std::invalid_argument("table symbol outside Z_d");
}

std::span<const Symbol> OneHopCode::encode(std::size_t source_input) const {
  const std::size_t width = first_layer_width();
  return std::span<const Symbol>(encoder_).subspan(source_input * width, width);
}

std::span<const Symbol> OneHopCode::encode(Symbol message,
                                           std::span<const Symbol> scrambles) const {
  if (scrambles.size() != scrambles_) throw std::invalid_argument("wrong scramble count");
  std::size_t idx = message;
  for (auto l : scrambles) idx = idx * d_ + l;
  return encode(idx);
}

std::array<Symbol, 2> OneHopCode::relay(std::span<const Symbol> first_layer,
                                        Symbol relay_random) const {
  std::size_t idx = index_of_digits(first_layer, d_);
  if (relay_randomness_) idx = idx * d_ + relay_random;
  return {relay_[idx * 2], relay_[idx * 2 + 1]};
}

Symbol OneHopCode::message_of(std::size_t source_input) const {
  return static_cast<Symbol>(source_input / ipow(d_, scrambles_));
}

double OneHopCode::rate_bits() const { return std::log2(static_cast<double>(d_)) / shots_; }

OneHopCode OneHopCode::with_decoder(std::vector<Symbol> decoder, std::string id) const {
  return OneHopCode(std::move(id), d_, shots_, scrambles_, relay_randomness_, encoder_, relay_,
                    std::move(decoder));
}

bool OneHopCode::operator==(const OneHopCode& rhs) const {
  return d_ == rhs.d_ && shots_ == rhs.shots_ && scrambles_ == rhs.scrambles_ &&
         relay_randomness_ == rhs.relay_randomness_ && encoder_ == rhs.encoder_ &&
         relay_ == rhs.relay_ && decoder_ == rhs.decoder_;
}

std::optional<std::vector<Symbol>> derive_decoder(unsigned d, unsigned shots, unsigned scrambles,
                                                  bool relay_randomness,
                                                  const std::vector<Symbol>& encoder,
                                                  const std::vector<Symbol>& relay) {
  const std::size_t width = 2 * shots;
  const std::size_t src = ipow(d, 1 + scrambles);
  const std::size_t per_message = ipow(d, scrambles);
  const unsigned rr_values = relay_randomness ? d : 1;
  std::vector<int> seen(static_cast<std::size_t>(d) * d, -1);
  for (std::size_t i = 0; i < src; ++i) {
    const int m = static_cast<int>(i / per_message);
    const std::size_t base = index_of_digits(std::span(&encoder[i * width], width), d);
    for (unsigned r = 0; r < rr_values; ++r) {
      const std::size_t ridx = relay_randomness ? base * d + r : base;
      const std::size_t cell = relay[ridx * 2] * d + relay[ridx * 2 + 1];
      if (seen[cell] == -1)
        seen[cell] = m;
      else if (seen[cell] != m)
        return std::nullopt;
    }
  }
  std::vector<Symbol> dec(seen.size());
  for (std::size_t c = 0; c < seen.size(); ++c) dec[c] = static_cast<Symbol>(seen[c] < 0 ? 0 : seen[c]);
  return dec;
}

OneHopCode scalar_linear_code(unsigned d, bool relay_randomness) {
  require_alphabet(d);
  auto enc = [d](std::span<const Symbol> in, std::span<Symbol> out) {
    const unsigned m = in[0], l = in[1];
    out[0] = static_cast<Symbol>(l);
    out[1] = add(m, l, d);
  };
  auto rel = [d, relay_randomness](std::span<const Symbol> in, std::span<Symbol> out) {
    const unsigned lp = relay_randomness ? in[2] : 0;
    out[0] = static_cast<Symbol>(lp);
    out[1] = add(sub(in[1], in[0], d), lp, d);
  };
  return tabulate("scalar-linear" + std::string(relay_randomness ? "+relay-rand" : "") +
                      "/d=" + std::to_string(d),
                  d, 1, 1, relay_randomness, enc, rel, difference_decoder(d));
}

OneHopCode standard_nonlinear_code(unsigned d) {
  require_alphabet(d);
  auto enc = [d](std::span<const Symbol> in, std::span<Symbol> out) {
    out[0] = in[1];
    out[1] = add(in[0], in[1], d);
  };
  auto rel = [d](std::span<const Symbol> in, std::span<Symbol> out) {
    const Symbol diff = sub(in[1], in[0], d);
    out[0] = mul(in[0], diff, d);
    out[1] = mul(add(in[0], 1, d), diff, d);
  };
  return tabulate("standard-nonlinear/d=" + std::to_string(d), d, 1, 1, false, enc, rel,
                  difference_decoder(d));
}

OneHopCode anti_latin_code(const AntiLatinSquare& a, const AntiLatinSquare& b) {
  if (a.d() != b.d()) throw std::invalid_argument("anti_latin_code: size mismatch");
  if (!is_decodable_pair(a, b))
    throw std::invalid_argument("anti_latin_code: pair is not decodable");
  const unsigned d = a.d();
  auto enc = [d](std::span<const Symbol> in, std::span<Symbol> out) {
    out[0] = in[1];
    out[1] = add(in[0], in[1], d);
  };
  auto rel = [&a, &b](std::span<const Symbol> in, std::span<Symbol> out) {
    out[0] = a.at(in[0], in[1]);
    out[1] = b.at(in[0], in[1]);
  };
  auto proto = tabulate("anti-latin/d=" + std::to_string(d), d, 1, 1, false, enc, rel,
                        std::vector<Symbol>(d * d, 0));
  auto dec = derive_decoder(d, 1, 1, false, proto.encoder_table(), proto.relay_table());
  return proto.with_decoder(std::move(*dec), proto.id());
}

OneHopCode vector_linear_code(unsigned d) {
  require_alphabet(d);
  // Source input (M, L1, L2, L3); first-layer order [Y1, Y1', Y2, Y2'].
  auto enc = [d](std::span<const Symbol> in, std::span<Symbol> out) {
    const unsigned m = in[0], l1 = in[1], l2 = in[2], l3 = in[3];
    out[0] = static_cast<Symbol>(l1);
    out[1] = static_cast<Symbol>(l2);
    out[2] = add(m, l1, d);
    out[3] = add(l3, l2, d);
  };
  auto rel = [d](std::span<const Symbol> in, std::span<Symbol> out) {
    const unsigned y1 = in[0], y1p = in[1], y2 = in[2], y2p = in[3];
    out[0] = sub(y2p, y1p, d);
    out[1] = add(sub(y2, y1, d), sub(y2p, y1p, d), d);
  };
  return tabulate("vector-linear/d=" + std::to_string(d), d, 2, 3, false, enc, rel,
                  difference_decoder(d));
}

bool check_correctness(const OneHopCode& code) {
  for (std::size_t i = 0; i < code.source_inputs(); ++i) {
    const auto first = code.encode(i);
    for (unsigned r = 0; r < code.relay_random_values(); ++r) {
      const auto [y3, y4] = code.relay(first, static_cast<Symbol>(r));
      if (code.decode(y3, y4) != code.message_of(i)) return false;
    }
  }
  return true;
}

void enumerate_onehop_codes(unsigned d, const std::function<void(const OneHopCode&)>& visit) {
  if (d != 2) throw std::invalid_argument("enumerate_onehop_codes: only d = 2 is supported");
  std::vector<Symbol> encoder(8), relay(8);
  for (unsigned e = 0; e < 256; ++e) {
    for (unsigned i = 0; i < 4; ++i) {
      const unsigned out = (e >> (2 * i)) & 3u;
      encoder[2 * i] = static_cast<Symbol>(out >> 1);
      encoder[2 * i + 1] = static_cast<Symbol>(out & 1u);
    }
    for (unsigned r = 0; r < 256; ++r) {
      for (unsigned i = 0; i < 4; ++i) {
        const unsigned out = (r >> (2 * i)) & 3u;
        relay[2 * i] = static_cast<Symbol>(out >> 1);
        relay[2 * i + 1] = static_cast<Symbol>(out & 1u);
      }
      auto dec = derive_decoder(2, 1, 1, false, encoder, relay);
      if (!dec) continue;
      visit(OneHopCode("enum/d=2/enc=" + std::to_string(e) + "/relay=" + std::to_string(r), 2, 1,
                       1, false, encoder, relay, std::move(*dec)));
    }
  }
}

void enumerate_scalar_linear_codes(unsigned d, bool affine,
                                   const std::function<void(const OneHopCode&)>& visit) {
  require_alphabet(d);
  // Encoder rows (Y1, Y2) = A (M, L) + c; relay rows (Y3, Y4) = B (Y1, Y2) + c'.
  const std::size_t coeff_space = ipow(d, 4);
  const std::size_t const_space = affine ? ipow(d, 2) : 1;
  std::vector<Symbol> encoder(static_cast<std::size_t>(d) * d * 2);
  std::vector<Symbol> relay(static_cast<std::size_t>(d) * d * 2);
  std::array<Symbol, 4> a{}, b{};
  std::array<Symbol, 2> ca{}, cb{};
  for (std::size_t ai = 0; ai < coeff_space; ++ai) {
    digits_of(ai, d, a);
    for (std::size_t ci = 0; ci < const_space; ++ci) {
      if (affine) digits_of(ci, d, ca);
      for (unsigned m = 0; m < d; ++m)
        for (unsigned l = 0; l < d; ++l) {
          const std::size_t i = m * d + l;
          encoder[2 * i] = static_cast<Symbol>((a[0] * m + a[1] * l + ca[0]) % d);
          encoder[2 * i + 1] = static_cast<Symbol>((a[2] * m + a[3] * l + ca[1]) % d);
        }
      for (std::size_t bi = 0; bi < coeff_space; ++bi) {
        digits_of(bi, d, b);
        for (std::size_t cj = 0; cj < const_space; ++cj) {
          if (affine) digits_of(cj, d, cb);
          for (unsigned y1 = 0; y1 < d; ++y1)
            for (unsigned y2 = 0; y2 < d; ++y2) {
              const std::size_t i = y1 * d + y2;
              relay[2 * i] = static_cast<Symbol>((b[0] * y1 + b[1] * y2 + cb[0]) % d);
              relay[2 * i + 1] = static_cast<Symbol>((b[2] * y1 + b[3] * y2 + cb[1]) % d);
            }
          auto dec = derive_decoder(d, 1, 1, false, encoder, relay);
          if (!dec) continue;
          visit(OneHopCode(std::string(affine ? "affine" : "linear") + "/d=" + std::to_string(d) +
                               "/enc=" + std::to_string(ai * const_space + ci) +
                               "/relay=" + std::to_string(bi * const_space + cj),
                           d, 1, 1, false, encoder, relay, std::move(*dec)));
        }
      }
    }
  }
}

StandardEquivalence is_equivalent_to_standard(const OneHopCode& code) {
  if (code.d() != 2 || code.shots() != 1)
    throw std::invalid_argument("is_equivalent_to_standard: needs a single-shot d = 2 code");
  StandardEquivalence result;
  for (unsigned mask = 0; mask < 32; ++mask) {
    // Bijections of Z_2: identity or complement.
    auto f = [mask](unsigned which, unsigned v) { return v ^ ((mask >> which) & 1u); };
    std::array<std::array<std::uint64_t, 2>, 2> law{};
    bool ok = true;
    for (std::size_t i = 0; i < code.source_inputs() && ok; ++i) {
      const auto first = code.encode(i);
      const unsigned y1 = f(0, first[0]), y2 = f(1, first[1]);
      const unsigned m = f(4, code.message_of(i));
      const unsigned l = y1;
      if (y2 != ((m + l) & 1u)) ok = false;
      for (unsigned r = 0; r < code.relay_random_values() && ok; ++r) {
        const auto [r3, r4] = code.relay(first, static_cast<Symbol>(r));
        const unsigned y3 = f(2, r3), y4 = f(3, r4);
        const unsigned diff = (y2 + 2 - y1) & 1u;
        if (y3 != ((y1 * diff) & 1u) || y4 != (((y1 + 1) * diff) & 1u)) ok = false;
      }
      if (ok) ++law[m][l];
    }
    if (!ok) continue;
    result.equivalent = true;
    for (unsigned w = 0; w < 5; ++w)
      result.relabeling[w] = {static_cast<Symbol>(f(w, 0)), static_cast<Symbol>(f(w, 1))};
    result.message_scramble_law = law;
    return result;
  }
  return result;
}

std::optional<AffineForm> relay_affine_form(const OneHopCode& code) {
  const std::size_t inputs = code.first_layer_width() + (code.relay_randomness() ? 1 : 0);
  return affine_form_of(code.d(), inputs, 2, code.relay_table());
}

std::optional<AffineForm> encoder_affine_form(const OneHopCode& code) {
  return affine_form_of(code.d(), 1 + code.scramble_count(), code.first_layer_width(),
                        code.encoder_table());
}

nlohmann::json to_json(const OneHopCode& code) {
  auto as_ints = [](const std::vector<Symbol>& v) {
    return std::vector<unsigned>(v.begin(), v.end());
  };
  return {{"schema_version", 1},
          {"id", code.id()},
          {"d", code.d()},
          {"shots", code.shots()},
          {"scramble_count", code.scramble_count()},
          {"relay_randomness", code.relay_randomness()},
          {"encoder", as_ints(code.encoder_table())},
          {"relay", as_ints(code.relay_table())},
          {"decoder", as_ints(code.decoder_table())}};
}

OneHopCode code_from_json(const nlohmann::json& j) {
  auto as_symbols = [](const nlohmann::json& arr) {
    std::vector<Symbol> out;
    for (const auto& v : arr) {
      const auto x = v.get<unsigned>();
      if (x > 255) throw std::invalid_argument("symbol out of range");
      out.push_back(static_cast<Symbol>(x));
    }
    return out;
  };
  return OneHopCode(j.value("id", std::string("json")), j.at("d").get<unsigned>(),
                    j.at("shots").get<unsigned>(), j.at("scramble_count").get<unsigned>(),
                    j.at("relay_randomness").get<bool>(), as_symbols(j.at("encoder")),
                    as_symbols(j.at("relay")), as_symbols(j.at("decoder")));
}

}  // namespace sncl
