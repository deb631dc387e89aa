#include "sncl/attack_engine.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "sncl/anti_latin.hpp"
#include "sncl/combinatorics.hpp"

namespace sncl {

namespace {

// Leakage values closer than this are treated as ties.
constexpr double kTieTolerance = 1e-12;

__extension__ using u128 = unsigned __int128;

std::vector<Symbol> identity_map(unsigned d) {
  std::vector<Symbol> id(d);
  for (unsigned v = 0; v < d; ++v) id[v] = static_cast<Symbol>(v);
  return id;
}

std::size_t observation_count(unsigned d, unsigned shots) {
  return static_cast<std::size_t>(checked_pow(d, shots));
}

AttackClass passive_counterpart(AttackClass k) {
  return is_adaptive(k) ? AttackClass::adaptive_passive : AttackClass::deterministic_passive;
}

// Calls fn(map) for every map Z_d -> Z_d in lexicographic order.
template <typename Fn>
void for_each_map(unsigned d, Fn&& fn) {
  std::vector<Symbol> map(d, 0);
  while (true) {
    fn(static_cast<const std::vector<Symbol>&>(map));
    std::size_t i = d;
    while (i > 0 && map[i - 1] == d - 1) map[--i] = 0;
    if (i == 0) return;
    ++map[i - 1];
  }
}

template <typename Fn>
void for_each_modification(unsigned d, AttackClass klass, Fn&& fn) {
  if (is_active(klass))
    for_each_map(d, fn);
  else
    fn(identity_map(d));
}

std::vector<Edge> constant_selector(std::size_t n, Edge e) { return std::vector<Edge>(n, e); }

// One run of the network under a strategy's first-edge choice and
// modification: message, first observation index, and the relay output.
struct Trace {
  Symbol message;
  std::uint32_t observation;
  Symbol y3, y4;
  Symbol decoded;
};

std::vector<Trace> run_first_layer(const OneHopCode& code, Edge first_edge,
                                   const std::vector<Symbol>& modification) {
  const unsigned d = code.d();
  const unsigned shots = code.shots();
  const std::size_t offset = first_edge == Edge::e1 ? 0 : shots;
  std::vector<Trace> out;
  out.reserve(code.source_inputs() * code.relay_random_values());
  std::vector<Symbol> delivered(code.first_layer_width());
  for (std::size_t i = 0; i < code.source_inputs(); ++i) {
    const auto sent = code.encode(i);
    std::copy(sent.begin(), sent.end(), delivered.begin());
    std::uint32_t obs = 0;
    for (unsigned s = 0; s < shots; ++s) {
      const Symbol z = sent[offset + s];
      obs = obs * d + z;
      delivered[offset + s] = modification[z];
    }
    for (unsigned r = 0; r < code.relay_random_values(); ++r) {
      const auto [y3, y4] = code.relay(delivered, static_cast<Symbol>(r));
      out.push_back({code.message_of(i), obs, y3, y4, code.decode(y3, y4)});
    }
  }
  return out;
}

void validate(const OneHopCode& code, const AttackStrategy& s) {
  const unsigned d = code.d();
  if (s.first_edge != Edge::e1 && s.first_edge != Edge::e2)
    throw std::invalid_argument("first tapped edge must be e1 or e2");
  if (s.modification.size() != d) throw std::invalid_argument("modification map must cover Z_d");
  for (auto v : s.modification)
    if (v >= d) throw std::invalid_argument("modification value outside Z_d");
  if (!is_active(s.klass) && s.modification != identity_map(d))
    throw std::invalid_argument("passive strategy with non-identity modification");
  if (s.selector.size() != observation_count(d, code.shots()))
    throw std::invalid_argument("selector does not match the code's shot structure");
  for (auto e : s.selector)
    if (e != Edge::e3 && e != Edge::e4) throw std::invalid_argument("second edge must be e3 or e4");
  if (!is_adaptive(s.klass) &&
      std::any_of(s.selector.begin(), s.selector.end(), [&](Edge e) { return e != s.selector[0]; }))
    throw std::invalid_argument("deterministic strategy with a non-constant selector");
}

// Per (second edge, observation) statistics for one (first edge, modification).
class SliceTable {
 public:
  SliceTable(const OneHopCode& code, const std::vector<Trace>& traces)
      : d_(code.d()), obs_(observation_count(code.d(), code.shots())),
        counts_(2 * obs_ * d_ * d_, 0), message_weight_(d_, 0) {
    for (const auto& t : traces) {
      ++counts_[index(0, t.observation, t.y3, t.message)];
      ++counts_[index(1, t.observation, t.y4, t.message)];
      ++message_weight_[t.message];
      ++total_;
    }
    recovering_.resize(2 * obs_);
    independent_.resize(2 * obs_);
    contribution_.resize(2 * obs_);
    for (unsigned e = 0; e < 2; ++e)
      for (std::size_t o = 0; o < obs_; ++o) evaluate(e, o);
  }

  std::size_t observations() const { return obs_; }
  bool recovering(unsigned e, std::size_t o) const { return recovering_[e * obs_ + o]; }
  bool independent(unsigned e, std::size_t o) const { return independent_[e * obs_ + o]; }
  double contribution(unsigned e, std::size_t o) const { return contribution_[e * obs_ + o]; }

 private:
  std::size_t index(unsigned e, std::size_t o, unsigned z2, unsigned m) const {
    return ((e * obs_ + o) * d_ + z2) * d_ + m;
  }

  void evaluate(unsigned e, std::size_t o) {
    bool rec = true, ind = true;
    long double info = 0;
    for (unsigned z2 = 0; z2 < d_; ++z2) {
      std::uint64_t cz = 0;
      unsigned support = 0;
      for (unsigned m = 0; m < d_; ++m) {
        const auto c = counts_[index(e, o, z2, m)];
        cz += c;
        support += c > 0;
      }
      if (cz == 0) continue;
      if (support > 1) rec = false;
      for (unsigned m = 0; m < d_; ++m) {
        const auto c = counts_[index(e, o, z2, m)];
        const u128 num = u128(c) * total_;
        const u128 den = u128(cz) * message_weight_[m];
        if (num != den) ind = false;
        if (c == 0 || num == den) continue;
        info += (static_cast<long double>(c) / total_) *
                std::log2(static_cast<long double>(num) / static_cast<long double>(den));
      }
    }
    recovering_[e * obs_ + o] = rec;
    independent_[e * obs_ + o] = ind;
    contribution_[e * obs_ + o] = static_cast<double>(info);
  }

  unsigned d_;
  std::size_t obs_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> message_weight_;
  std::uint64_t total_ = 0;
  std::vector<bool> recovering_, independent_;
  std::vector<double> contribution_;
};

struct Candidate {
  double leakage = 0.0;
  bool recovering = false;
  bool independent = true;
  std::vector<Edge> selector;
};

// Best selector for one slice table: a recovering selector when one exists,
// otherwise the leakage maximizer; ties go to e3 (the earlier selector).
Candidate best_selector(const SliceTable& t, bool adaptive) {
  const std::size_t n = t.observations();
  Candidate out;
  if (adaptive) {
    out.recovering = true;
    for (std::size_t o = 0; o < n; ++o)
      if (!t.recovering(0, o) && !t.recovering(1, o)) out.recovering = false;
    out.selector.resize(n);
    for (std::size_t o = 0; o < n; ++o) {
      out.independent = out.independent && t.independent(0, o) && t.independent(1, o);
      Edge pick;
      if (out.recovering)
        pick = t.recovering(0, o) ? Edge::e3 : Edge::e4;
      else
        pick = t.contribution(1, o) > t.contribution(0, o) + kTieTolerance ? Edge::e4 : Edge::e3;
      out.selector[o] = pick;
      out.leakage += t.contribution(pick == Edge::e3 ? 0 : 1, o);
    }
    return out;
  }
  std::array<Candidate, 2> fixed;
  for (unsigned e = 0; e < 2; ++e) {
    fixed[e].recovering = true;
    fixed[e].selector = constant_selector(n, e == 0 ? Edge::e3 : Edge::e4);
    for (std::size_t o = 0; o < n; ++o) {
      fixed[e].recovering = fixed[e].recovering && t.recovering(e, o);
      fixed[e].independent = fixed[e].independent && t.independent(e, o);
      fixed[e].leakage += t.contribution(e, o);
    }
  }
  const bool all_independent = fixed[0].independent && fixed[1].independent;
  Candidate pick;
  if (fixed[0].recovering)
    pick = fixed[0];
  else if (fixed[1].recovering)
    pick = fixed[1];
  else
    pick = fixed[1].leakage > fixed[0].leakage + kTieTolerance ? fixed[1] : fixed[0];
  pick.independent = all_independent;
  return pick;
}

// Shared bookkeeping for both classification routes.
class VerdictAccumulator {
 public:
  explicit VerdictAccumulator(std::uint64_t strategies) { verdict_.strategies = strategies; }

  // Returns true once an insecure witness has been recorded.
  bool offer(const AttackStrategy& s, double leakage, bool recovering, bool independent) {
    if (recovering) {
      verdict_.level = SecurityLevel::insecure;
      verdict_.max_leakage_bits = leakage;
      verdict_.witness = s;
      done_ = true;
      return true;
    }
    all_independent_ = all_independent_ && independent;
    if (!have_best_ || leakage > verdict_.max_leakage_bits + kTieTolerance) {
      verdict_.max_leakage_bits = leakage;
      verdict_.witness = s;
      have_best_ = true;
    }
    return false;
  }

  SecurityVerdict finish() {
    if (!done_) {
      verdict_.level = all_independent_ ? SecurityLevel::perfectly_secret
                                        : SecurityLevel::imperfectly_secret;
      if (all_independent_) verdict_.max_leakage_bits = 0.0;
    }
    return verdict_;
  }

 private:
  SecurityVerdict verdict_;
  bool done_ = false;
  bool have_best_ = false;
  bool all_independent_ = true;
};

std::string level_to_expected_name(SecurityLevel l) { return to_string(l); }

}  // namespace

std::string to_string(AttackClass k) {
  switch (k) {
    case AttackClass::deterministic_passive: return "deterministic-passive";
    case AttackClass::adaptive_passive: return "adaptive-passive";
    case AttackClass::deterministic_active: return "deterministic-active";
    case AttackClass::adaptive_active: return "adaptive-active";
  }
  return "?";
}

AttackClass attack_class_from_string(const std::string& s) {
  if (s == "deterministic-passive" || s == "passive") return AttackClass::deterministic_passive;
  if (s == "adaptive-passive" || s == "adaptive") return AttackClass::adaptive_passive;
  if (s == "deterministic-active" || s == "active") return AttackClass::deterministic_active;
  if (s == "adaptive-active") return AttackClass::adaptive_active;
  throw std::invalid_argument("unknown attack class '" + s + "'");
}

std::string to_string(SecurityLevel l) {
  switch (l) {
    case SecurityLevel::insecure: return "insecure";
    case SecurityLevel::imperfectly_secret: return "imperfectly-secret";
    case SecurityLevel::perfectly_secret: return "perfectly-secret";
  }
  return "?";
}

nlohmann::json to_json(const AttackStrategy& s) {
  nlohmann::json j{{"class", to_string(s.klass)},
                   {"first_edge", to_string(s.first_edge)},
                   {"modification", std::vector<unsigned>(s.modification.begin(), s.modification.end())}};
  if (!is_adaptive(s.klass) && !s.selector.empty()) {
    j["second_edge"] = to_string(s.selector[0]);
  } else {
    std::vector<std::string> sel;
    for (auto e : s.selector) sel.push_back(to_string(e));
    j["selector"] = sel;
  }
  return j;
}

std::uint64_t attack_count(unsigned d, unsigned shots, AttackClass klass) {
  const std::uint64_t mods = is_active(klass) ? checked_pow(d, d) : 1;
  const std::uint64_t obs = checked_pow(d, shots);
  if (is_adaptive(klass) && obs >= 63) throw BudgetExceeded("selector space too large");
  const std::uint64_t selectors = is_adaptive(klass) ? (std::uint64_t{1} << obs) : 2;
  return 2 * mods * selectors;
}

void for_each_attack(unsigned d, unsigned shots, AttackClass klass,
                     const std::function<void(const AttackStrategy&)>& visit) {
  const std::size_t obs = observation_count(d, shots);
  if (is_adaptive(klass) && obs >= 63) throw BudgetExceeded("selector space too large");
  AttackStrategy s;
  s.klass = klass;
  for (Edge first : OneHopTopology::first_layer) {
    s.first_edge = first;
    for_each_modification(d, klass, [&](const std::vector<Symbol>& mod) {
      s.modification = mod;
      if (!is_adaptive(klass)) {
        for (Edge e : OneHopTopology::second_layer) {
          s.selector = constant_selector(obs, e);
          visit(s);
        }
        return;
      }
      s.selector.assign(obs, Edge::e3);
      const std::uint64_t n = std::uint64_t{1} << obs;
      for (std::uint64_t bits = 0; bits < n; ++bits) {
        for (std::size_t o = 0; o < obs; ++o) s.selector[o] = (bits >> o) & 1u ? Edge::e4 : Edge::e3;
        visit(s);
      }
    });
  }
}

std::vector<AttackStrategy> enumerate_attacks(unsigned d, AttackClass klass, unsigned shots,
                                              std::uint64_t budget) {
  const auto n = attack_count(d, shots, klass);
  if (n > budget)
    throw BudgetExceeded(to_string(klass) + " over Z_" + std::to_string(d) + " has " +
                         std::to_string(n) + " strategies, budget is " + std::to_string(budget));
  std::vector<AttackStrategy> out;
  out.reserve(n);
  for_each_attack(d, shots, klass, [&](const AttackStrategy& s) { out.push_back(s); });
  return out;
}

NameSet eve_view(const OneHopCode& code) {
  if (code.shots() == 1) return {"Z1", "Z2"};
  NameSet names;
  for (unsigned s = 1; s <= code.shots(); ++s) names.push_back("Z1_" + std::to_string(s));
  names.push_back("Z2");
  return names;
}

JointDistribution simulate_attack(const OneHopCode& code, const AttackStrategy& strategy) {
  validate(code, strategy);
  const unsigned d = code.d();
  std::vector<Variable> vars{{"M", d}};
  for (const auto& name : eve_view(code)) vars.push_back({name, d});
  vars.push_back({"Mhat", d});
  JointDistribution::Builder b(vars);
  Tuple row(vars.size());
  for (const auto& t : run_first_layer(code, strategy.first_edge, strategy.modification)) {
    row[0] = t.message;
    std::uint32_t obs = t.observation;
    for (unsigned s = code.shots(); s-- > 0;) {
      row[1 + s] = obs % d;
      obs /= d;
    }
    const Edge e = strategy.second_edge_for(t.observation);
    row[1 + code.shots()] = e == Edge::e3 ? t.y3 : t.y4;
    row[2 + code.shots()] = t.decoded;
    b.add(row);
  }
  return b.build();
}

SecurityVerdict classify(const OneHopCode& code, AttackClass klass) {
  VerdictAccumulator acc(attack_count(code.d(), code.shots(), klass));
  AttackStrategy s;
  s.klass = klass;
  bool stop = false;
  for (Edge first : OneHopTopology::first_layer) {
    if (stop) break;
    s.first_edge = first;
    for_each_modification(code.d(), klass, [&](const std::vector<Symbol>& mod) {
      if (stop) return;
      const SliceTable table(code, run_first_layer(code, first, mod));
      const Candidate best = best_selector(table, is_adaptive(klass));
      s.modification = mod;
      s.selector = best.selector;
      stop = acc.offer(s, best.leakage, best.recovering, best.independent);
    });
  }
  return acc.finish();
}

SecurityVerdict classify_exhaustive(const OneHopCode& code, AttackClass klass) {
  VerdictAccumulator acc(attack_count(code.d(), code.shots(), klass));
  const NameSet message{"M"};
  const NameSet view = eve_view(code);
  bool stop = false;
  for_each_attack(code.d(), code.shots(), klass, [&](const AttackStrategy& s) {
    if (stop) return;
    const auto dist = simulate_attack(code, s);
    stop = acc.offer(s, mutual_information(dist, message, view), is_function_of(dist, message, view),
                     is_independent(dist, message, view));
  });
  return acc.finish();
}

nlohmann::json to_json(const OneHopCode& code, AttackClass klass, const SecurityVerdict& v) {
  return {{"schema_version", 1},
          {"code_id", code.id()},
          {"class", to_string(klass)},
          {"level", to_string(v.level)},
          {"max_leakage_bits", v.max_leakage_bits},
          {"strategies", v.strategies},
          {"witness", to_json(v.witness)}};
}

PerShotReport verify_per_shot_secrecy(const OneHopCode& code, bool active) {
  if (code.shots() != 2) throw std::invalid_argument("per-shot mode needs a two-shot code");
  const unsigned d = code.d();
  const std::size_t obs = static_cast<std::size_t>(d) * d;
  if (obs >= 31) throw BudgetExceeded("per-shot selector space too large");
  const AttackClass klass = active ? AttackClass::adaptive_active : AttackClass::adaptive_passive;
  PerShotReport report;
  std::vector<Symbol> delivered(code.first_layer_width());
  struct Run {
    Symbol m;
    std::uint32_t obs;
    Symbol y3, y4;
  };
  std::vector<Run> runs;
  std::vector<std::uint64_t> counts(obs * d * d);
  std::vector<std::uint64_t> message_weight(d);
  for (Edge first : OneHopTopology::first_layer) {
    for (unsigned shot2_bits = 0; shot2_bits < (1u << d); ++shot2_bits) {
      for_each_modification(d, klass, [&](const std::vector<Symbol>& mod) {
        runs.clear();
        std::fill(message_weight.begin(), message_weight.end(), 0);
        for (std::size_t i = 0; i < code.source_inputs(); ++i) {
          const auto sent = code.encode(i);
          std::copy(sent.begin(), sent.end(), delivered.begin());
          // Shot 1 on `first`; shot 2 on the edge picked from the shot-1 symbol.
          const std::size_t off1 = first == Edge::e1 ? 0 : 2;
          const Symbol z1a = sent[off1];
          delivered[off1] = mod[z1a];
          const std::size_t off2 = ((shot2_bits >> z1a) & 1u) ? 2 : 0;
          const Symbol z1b = sent[off2 + 1];
          delivered[off2 + 1] = mod[z1b];
          for (unsigned r = 0; r < code.relay_random_values(); ++r) {
            const auto [y3, y4] = code.relay(delivered, static_cast<Symbol>(r));
            runs.push_back({code.message_of(i), static_cast<std::uint32_t>(z1a * d + z1b), y3, y4});
            ++message_weight[code.message_of(i)];
          }
        }
        const std::uint64_t total = runs.size();
        for (std::uint64_t sel = 0; sel < (std::uint64_t{1} << obs); ++sel) {
          std::fill(counts.begin(), counts.end(), 0);
          for (const auto& r : runs) {
            const Symbol z2 = (sel >> r.obs) & 1u ? r.y4 : r.y3;
            ++counts[(r.obs * d + z2) * d + r.m];
          }
          ++report.strategies;
          long double info = 0;
          for (std::size_t z = 0; z < obs * d; ++z) {
            std::uint64_t cz = 0;
            for (unsigned m = 0; m < d; ++m) cz += counts[z * d + m];
            if (cz == 0) continue;
            for (unsigned m = 0; m < d; ++m) {
              const auto c = counts[z * d + m];
              const u128 num = u128(c) * total, den = u128(cz) * message_weight[m];
              if (num == den) continue;
              report.perfectly_secret = false;
              if (c == 0) continue;
              info += (static_cast<long double>(c) / total) *
                      std::log2(static_cast<long double>(num) / static_cast<long double>(den));
            }
          }
          report.max_leakage_bits = std::max(report.max_leakage_bits, static_cast<double>(info));
        }
      });
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

const std::vector<AttackClass>& table_columns() {
  static const std::vector<AttackClass> cols{AttackClass::deterministic_passive,
                                             AttackClass::deterministic_active,
                                             AttackClass::adaptive_active};
  return cols;
}

namespace {

TableRow single_code_row(const std::string& family, const OneHopCode& code,
                         const std::vector<SecurityLevel>& expected) {
  TableRow row{family, code.d(), 1, {}};
  const auto& cols = table_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const auto v = classify(code, cols[c]);
    row.cells.push_back({cols[c], v.level, expected[c], v.max_leakage_bits, code.id()});
  }
  return row;
}

TableRow scalar_linear_family_row(unsigned d) {
  TableRow row{"scalar-linear", d, 0, {}};
  const auto& cols = table_columns();
  for (auto k : cols) row.cells.push_back({k, SecurityLevel::insecure, SecurityLevel::insecure, 0.0, ""});
  enumerate_scalar_linear_codes(d, false, [&](const OneHopCode& code) {
    ++row.codes_examined;
    for (auto& cell : row.cells) {
      const auto v = classify(code, cell.klass);
      if (cell.witness_code.empty() || v.level > cell.level ||
          (v.level == cell.level && v.level != SecurityLevel::insecure &&
           v.max_leakage_bits + kTieTolerance < cell.max_leakage_bits)) {
        cell.level = v.level;
        cell.max_leakage_bits = v.max_leakage_bits;
        cell.witness_code = code.id();
      }
    }
  });
  return row;
}

}  // namespace

ClassificationTable classification_table(const std::vector<unsigned>& d_list, std::uint64_t seed) {
  using L = SecurityLevel;
  ClassificationTable table;
  for (unsigned d : d_list) table.rows.push_back(scalar_linear_family_row(d));
  if (std::find(d_list.begin(), d_list.end(), 2u) != d_list.end())
    table.rows.push_back(single_code_row("standard-nonlinear", standard_nonlinear_code(2),
                                         {L::imperfectly_secret, L::insecure, L::insecure}));
  for (unsigned d : d_list) {
    if (d <= 2) continue;
    std::optional<std::pair<AntiLatinSquare, AntiLatinSquare>> pair;
    if (d == 3)
      pair = sample_pair_d3();
    else if (d == 4)
      pair = sample_pair_d4();
    else
      pair = find_decodable_pair(d, seed).pair;
    if (!pair) throw std::runtime_error("no decodable anti-Latin pair found for d = " + std::to_string(d));
    table.rows.push_back(single_code_row("anti-latin", anti_latin_code(pair->first, pair->second),
                                         {L::imperfectly_secret, L::imperfectly_secret,
                                          L::imperfectly_secret}));
  }
  for (unsigned d : d_list)
    table.rows.push_back(single_code_row("vector-linear", vector_linear_code(d),
                                         {L::perfectly_secret, L::perfectly_secret,
                                          L::perfectly_secret}));
  return table;
}

bool ClassificationTable::matches_expected() const {
  for (const auto& r : rows)
    for (const auto& c : r.cells)
      if (!c.matches()) return false;
  return true;
}

std::string ClassificationTable::to_csv() const {
  std::ostringstream os;
  os << "family,d,codes_examined";
  for (auto k : table_columns()) os << ',' << to_string(k);
  os << ",matches\n";
  for (const auto& r : rows) {
    bool ok = true;
    os << r.family << ',' << r.d << ',' << r.codes_examined;
    for (const auto& c : r.cells) {
      os << ',' << to_string(c.level);
      ok = ok && c.matches();
    }
    os << ',' << (ok ? "yes" : "no") << '\n';
  }
  return os.str();
}

std::string ClassificationTable::to_text() const {
  const std::vector<std::string> headers{"code", "deterministic+passive", "active", "adaptive"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    std::vector<std::string> line{r.family + " over Z_" + std::to_string(r.d)};
    for (const auto& c : r.cells)
      line.push_back(to_string(c.level) + (c.matches() ? "" : " (expected " +
                                                                  level_to_expected_name(c.expected) + ")"));
    cells.push_back(line);
  }
  std::vector<std::size_t> width(headers.size());
  for (std::size_t i = 0; i < headers.size(); ++i) width[i] = headers[i].size();
  for (const auto& line : cells)
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  std::ostringstream os;
  auto rule = [&] {
    os << '+';
    for (auto w : width) os << std::string(w + 2, '-') << '+';
    os << '\n';
  };
  auto emit = [&](const std::vector<std::string>& line) {
    os << '|';
    for (std::size_t i = 0; i < line.size(); ++i)
      os << ' ' << std::left << std::setw(static_cast<int>(width[i])) << line[i] << " |";
    os << '\n';
  };
  rule();
  emit(headers);
  rule();
  for (const auto& line : cells) emit(line);
  rule();
  return os.str();
}

nlohmann::json ClassificationTable::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : r.cells)
      cells.push_back({{"class", to_string(c.klass)},
                       {"level", to_string(c.level)},
                       {"expected", to_string(c.expected)},
                       {"max_leakage_bits", c.max_leakage_bits},
                       {"witness_code", c.witness_code}});
    out.push_back({{"family", r.family}, {"d", r.d}, {"codes_examined", r.codes_examined},
                   {"cells", cells}});
  }
  return {{"schema_version", 1}, {"rows", out}, {"matches_expected", matches_expected()}};
}

NonexistenceReport exhaustive_nonexistence_check(AttackClass klass, CodeFamily family) {
  NonexistenceReport report;
  auto visit = [&](const OneHopCode& code) {
    ++report.codes_examined;
    const auto v = classify(code, klass);
    switch (v.level) {
      case SecurityLevel::insecure: ++report.insecure; break;
      case SecurityLevel::imperfectly_secret: ++report.imperfectly_secret; break;
      case SecurityLevel::perfectly_secret: ++report.perfectly_secret; break;
    }
    if (v.level != SecurityLevel::insecure) report.non_insecure.emplace_back(code.id(), v);
    report.witnesses.emplace_back(code.id(), v.witness);
  };
  if (family == CodeFamily::all)
    enumerate_onehop_codes(2, visit);
  else
    enumerate_scalar_linear_codes(2, true, visit);
  return report;
}

ReductionReport linear_active_reduction_check(const OneHopCode& code) {
  const auto relay_form = relay_affine_form(code);
  if (!relay_form || !encoder_affine_form(code))
    throw std::invalid_argument("linear_active_reduction_check: code is not affine");
  const unsigned d = code.d();
  const unsigned shots = code.shots();
  NameSet kept{"M"};
  for (const auto& n : eve_view(code)) kept.push_back(n);

  ReductionReport report;
  std::map<std::pair<Edge, std::vector<Edge>>, JointDistribution> passive_cache;
  for (AttackClass klass : {AttackClass::deterministic_active, AttackClass::adaptive_active}) {
    for_each_attack(d, shots, klass, [&](const AttackStrategy& s) {
      if (!report.holds) return;
      ++report.active_strategies;
      const auto key = std::make_pair(s.first_edge, s.selector);
      auto it = passive_cache.find(key);
      if (it == passive_cache.end()) {
        AttackStrategy p = s;
        p.klass = passive_counterpart(klass);
        p.modification = identity_map(d);
        it = passive_cache.emplace(key, marginal(simulate_attack(code, p), kept)).first;
      }
      // Eve's own rewrite shifts the relay output by coeff * (f(z) - z).
      const std::size_t base = s.first_edge == Edge::e1 ? 0 : shots;
      std::vector<Variable> vars = it->second.variables();
      JointDistribution::Builder shifted(vars);
      for (auto [row, w] : it->second.rows()) {
        std::size_t obs = 0;
        for (unsigned sh = 0; sh < shots; ++sh) obs = obs * d + row[1 + sh];
        const unsigned out = s.second_edge_for(obs) == Edge::e3 ? 0 : 1;
        std::uint64_t z2 = row[1 + shots];
        for (unsigned sh = 0; sh < shots; ++sh) {
          const unsigned z = row[1 + sh];
          const unsigned delta = (s.modification[z] + d - z) % d;
          z2 += static_cast<std::uint64_t>(relay_form->coeff[out][base + sh]) * delta;
        }
        row[1 + shots] = static_cast<std::uint32_t>(z2 % d);
        shifted.add(row, w);
      }
      const auto active = marginal(simulate_attack(code, s), kept);
      if (!(shifted.build() == active)) {
        report.holds = false;
        report.counterexample = s;
      }
    });
  }
  return report;
}

}  // namespace sncl
