#include <gtest/gtest.h>

#include <array>
#include <set>

#include "sncl/anti_latin.hpp"
#include "sncl/info_theory.hpp"
#include "sncl/onehop_codes.hpp"

using namespace sncl;

namespace {

// Y1..Y4 of a single-shot code for message m, scramble l, relay randomness r.
std::array<unsigned, 4> run(const OneHopCode& c, unsigned m, unsigned l, unsigned r = 0) {
  const std::array<Symbol, 1> s{static_cast<Symbol>(l)};
  const auto first = c.encode(static_cast<Symbol>(m), s);
  const auto [y3, y4] = c.relay(first, static_cast<Symbol>(r));
  return {first[0], first[1], y3, y4};
}

OneHopCode identity_relay_code() {
  // Y1 = M, Y2 = L; relay forwards; decoder reads Y3.
  std::vector<Symbol> enc, rel, dec;
  for (unsigned m = 0; m < 2; ++m)
    for (unsigned l = 0; l < 2; ++l) enc.insert(enc.end(), {Symbol(m), Symbol(l)});
  for (unsigned y1 = 0; y1 < 2; ++y1)
    for (unsigned y2 = 0; y2 < 2; ++y2) rel.insert(rel.end(), {Symbol(y1), Symbol(y2)});
  for (unsigned y3 = 0; y3 < 2; ++y3)
    for (unsigned y4 = 0; y4 < 2; ++y4) dec.push_back(Symbol(y3));
  return OneHopCode("identity-relay", 2, 1, 1, false, enc, rel, dec);
}

// Correct d = 2 codes by direct counting: encoder (M, L) -> (Y1, Y2) and relay
// (Y1, Y2) -> (Y3, Y4) as 4-entry tables of 2-bit outputs.
std::uint64_t count_correct_binary_codes() {
  std::uint64_t count = 0;
  for (unsigned e = 0; e < 256; ++e)
    for (unsigned r = 0; r < 256; ++r) {
      int owner[4] = {-1, -1, -1, -1};
      bool ok = true;
      for (unsigned m = 0; m < 2 && ok; ++m)
        for (unsigned l = 0; l < 2 && ok; ++l) {
          const unsigned y12 = (e >> (2 * (2 * m + l))) & 3u;
          const unsigned y34 = (r >> (2 * y12)) & 3u;
          if (owner[y34] >= 0 && owner[y34] != static_cast<int>(m)) ok = false;
          owner[y34] = static_cast<int>(m);
        }
      count += ok;
    }
  return count;
}

}  // namespace

TEST(ScalarLinear, TableExample) {
  const auto c = scalar_linear_code(2);
  EXPECT_TRUE(c.relay_randomness());
  EXPECT_EQ(run(c, 1, 0, 1), (std::array<unsigned, 4>{0, 1, 1, 0}));
  EXPECT_EQ(c.decode(1, 0), 1);
}

TEST(ScalarLinear, DecodesEveryInputOverZ3) {
  const auto c = scalar_linear_code(3);
  for (unsigned m = 0; m < 3; ++m)
    for (unsigned l = 0; l < 3; ++l)
      for (unsigned r = 0; r < 3; ++r) {
        const auto y = run(c, m, l, r);
        EXPECT_EQ(c.decode(static_cast<Symbol>(y[2]), static_cast<Symbol>(y[3])), m);
      }
}

TEST(ScalarLinear, SecondAndFourthEdgesRevealNothing) {
  const auto c = scalar_linear_code(3);
  JointDistribution::Builder b({{"M", 3}, {"Y2", 3}, {"Y4", 3}});
  for (unsigned m = 0; m < 3; ++m)
    for (unsigned l = 0; l < 3; ++l)
      for (unsigned r = 0; r < 3; ++r) {
        const auto y = run(c, m, l, r);
        b.add({m, y[1], y[3]});
      }
  EXPECT_EQ(mutual_information(b.build(), {"M"}, {"Y2", "Y4"}), 0.0);
}

TEST(StandardCode, RelayOutputsOverZ2) {
  const auto c = standard_nonlinear_code(2);
  EXPECT_FALSE(c.relay_randomness());
  for (unsigned m = 0; m < 2; ++m)
    for (unsigned l = 0; l < 2; ++l) {
      const auto y = run(c, m, l);
      EXPECT_EQ(y[2], (l * m) % 2);
      EXPECT_EQ(y[3], (l * m + m) % 2);
    }
}

TEST(StandardCode, ZeroScrambleSendsMessageOnFourthEdge) {
  for (unsigned d = 2; d <= 7; ++d) {
    const auto c = standard_nonlinear_code(d);
    for (unsigned m = 0; m < d; ++m) {
      const auto y = run(c, m, 0);
      EXPECT_EQ(y[2], 0u);
      EXPECT_EQ(y[3], m);
    }
  }
}

TEST(StandardCode, DecodesEveryInputOverZ5) {
  const auto c = standard_nonlinear_code(5);
  for (unsigned m = 0; m < 5; ++m)
    for (unsigned l = 0; l < 5; ++l) {
      const auto y = run(c, m, l);
      EXPECT_EQ(c.decode(static_cast<Symbol>(y[2]), static_cast<Symbol>(y[3])), m);
    }
}

TEST(StandardCode, SwappedDecoderFails) {
  const auto c = standard_nonlinear_code(3);
  std::vector<Symbol> swapped(9);
  for (unsigned y3 = 0; y3 < 3; ++y3)
    for (unsigned y4 = 0; y4 < 3; ++y4) swapped[y3 * 3 + y4] = static_cast<Symbol>((y3 + 3 - y4) % 3);
  EXPECT_FALSE(check_correctness(c.with_decoder(swapped, "swapped")));
}

TEST(AntiLatinCode, SamplePairsGiveCorrectCodes) {
  for (const auto& [a, b] : {sample_pair_d3(), sample_pair_d4()}) {
    const auto c = anti_latin_code(a, b);
    EXPECT_TRUE(check_correctness(c));
    const unsigned d = a.d();
    for (unsigned l = 0; l < d; ++l)
      for (unsigned m = 0; m < d; ++m) {
        const unsigned col = (l + m) % d;
        EXPECT_EQ(c.decode(a.at(l, col), b.at(l, col)), m);
      }
  }
}

TEST(AntiLatinCode, ConstantPairRejected) {
  const AntiLatinSquare zero{{0, 0}, {0, 0}}, one{{1, 1}, {1, 1}};
  EXPECT_THROW(anti_latin_code(zero, one), std::invalid_argument);
  EXPECT_THROW(anti_latin_code(zero, zero), std::invalid_argument);
}

TEST(VectorLinear, DecodesEveryInputOverZ3) {
  const auto c = vector_linear_code(3);
  EXPECT_EQ(c.shots(), 2u);
  EXPECT_EQ(c.source_inputs(), 81u);
  for (std::size_t i = 0; i < c.source_inputs(); ++i) {
    const auto [y3, y4] = c.relay(c.encode(i));
    EXPECT_EQ(c.decode(y3, y4), c.message_of(i));
  }
}

TEST(VectorLinear, FirstEdgeBothShotsAndThirdEdgeRevealNothing) {
  const auto c = vector_linear_code(2);
  JointDistribution::Builder b({{"M", 2}, {"Y1", 2}, {"Y1'", 2}, {"Y3", 2}});
  for (std::size_t i = 0; i < c.source_inputs(); ++i) {
    const auto x = c.encode(i);  // [Y1, Y1', Y2, Y2']
    const auto [y3, y4] = c.relay(x);
    b.add({c.message_of(i), x[0], x[1], y3});
  }
  EXPECT_EQ(mutual_information(b.build(), {"M"}, {"Y1", "Y1'", "Y3"}), 0.0);
}

TEST(VectorLinear, HalfRate) {
  for (unsigned d = 2; d <= 5; ++d) EXPECT_DOUBLE_EQ(vector_linear_code(d).rate_bits(), 0.5 * std::log2(d));
}

TEST(Correctness, BuiltInCodesForAllSmallAlphabets) {
  for (unsigned d = 2; d <= 7; ++d) {
    EXPECT_TRUE(check_correctness(scalar_linear_code(d))) << d;
    EXPECT_TRUE(check_correctness(scalar_linear_code(d, false))) << d;
    EXPECT_TRUE(check_correctness(standard_nonlinear_code(d))) << d;
    EXPECT_TRUE(check_correctness(vector_linear_code(d))) << d;
  }
  EXPECT_TRUE(check_correctness(identity_relay_code()));
}

TEST(Enumeration, MatchesDirectCount) {
  std::uint64_t n = 0;
  bool has_standard = false;
  std::set<std::string> ids;
  const auto standard = standard_nonlinear_code(2);
  enumerate_onehop_codes(2, [&](const OneHopCode& c) {
    ++n;
    ASSERT_TRUE(check_correctness(c));
    ids.insert(c.id());
    if (c.encoder_table() == standard.encoder_table() && c.relay_table() == standard.relay_table())
      has_standard = true;
  });
  EXPECT_EQ(n, count_correct_binary_codes());
  EXPECT_EQ(ids.size(), n);
  EXPECT_TRUE(has_standard);
  EXPECT_GT(n, 0u);
  EXPECT_THROW(enumerate_onehop_codes(3, [](const OneHopCode&) {}), std::invalid_argument);
}

TEST(Enumeration, ScalarLinearCodesAreCorrectAndLinear) {
  for (unsigned d : {2u, 3u}) {
    for (bool affine : {false, true}) {
      std::uint64_t n = 0;
      enumerate_scalar_linear_codes(d, affine, [&](const OneHopCode& c) {
        ++n;
        ASSERT_TRUE(check_correctness(c));
        ASSERT_TRUE(relay_affine_form(c).has_value());
        const auto enc = encoder_affine_form(c);
        ASSERT_TRUE(enc.has_value());
        if (!affine) ASSERT_EQ(enc->offset, (std::vector<std::uint32_t>{0, 0}));
      });
      EXPECT_GT(n, 0u);
    }
  }
}

TEST(Equivalence, StandardCodeMatchesItself) {
  const auto e = is_equivalent_to_standard(standard_nonlinear_code(2));
  ASSERT_TRUE(e.equivalent);
  for (const auto& f : e.relabeling) EXPECT_EQ(f, (std::array<Symbol, 2>{0, 1}));
  EXPECT_EQ(e.message_scramble_law, (std::array<std::array<std::uint64_t, 2>, 2>{{{1, 1}, {1, 1}}}));
}

TEST(Equivalence, ComplementedSecondLayerIsStillStandard) {
  const auto s = standard_nonlinear_code(2);
  auto relay = s.relay_table();
  for (auto& v : relay) v ^= 1;
  std::vector<Symbol> dec(4);
  for (unsigned y3 = 0; y3 < 2; ++y3)
    for (unsigned y4 = 0; y4 < 2; ++y4) dec[y3 * 2 + y4] = static_cast<Symbol>(y3 ^ y4);
  const OneHopCode c("complemented", 2, 1, 1, false, s.encoder_table(), relay, dec);
  ASSERT_TRUE(check_correctness(c));
  const auto e = is_equivalent_to_standard(c);
  ASSERT_TRUE(e.equivalent);
  EXPECT_EQ(e.relabeling[2], (std::array<Symbol, 2>{1, 0}));
  EXPECT_EQ(e.relabeling[3], (std::array<Symbol, 2>{1, 0}));
}

TEST(Equivalence, ScalarLinearIsNotStandard) {
  EXPECT_FALSE(is_equivalent_to_standard(scalar_linear_code(2, false)).equivalent);
  EXPECT_THROW(is_equivalent_to_standard(standard_nonlinear_code(3)), std::invalid_argument);
}

TEST(AffineForms, LinearCodesHaveThemNonlinearDoNot) {
  const auto f = relay_affine_form(scalar_linear_code(3));
  ASSERT_TRUE(f.has_value());
  // Y3 = L', Y4 = -Y1 + Y2 + L'.
  EXPECT_EQ(f->coeff[0], (std::vector<std::uint32_t>{0, 0, 1}));
  EXPECT_EQ(f->coeff[1], (std::vector<std::uint32_t>{2, 1, 1}));
  EXPECT_TRUE(relay_affine_form(vector_linear_code(3)).has_value());
  EXPECT_FALSE(relay_affine_form(standard_nonlinear_code(2)).has_value());
}

TEST(Json, CodeRoundTrip) {
  for (const auto& c : {scalar_linear_code(3), standard_nonlinear_code(4), vector_linear_code(2)}) {
    EXPECT_EQ(code_from_json(to_json(c)), c);
  }
  auto bad = to_json(standard_nonlinear_code(2));
  bad["relay"] = std::vector<unsigned>{0, 1};
  EXPECT_THROW(code_from_json(bad), std::invalid_argument);
}
