#pragma once

// Wiretap strategies on the one-hop network and exact evaluation of what
// they reveal about the message.
//
// Eve taps one first-layer edge, optionally rewrites what that edge delivers
// to the relay, then taps one second-layer edge chosen either up front
// (deterministic) or from her first observation (adaptive). Her view is
// (true first-layer observation, second-layer observation).

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sncl/info_theory.hpp"
#include "sncl/onehop_codes.hpp"

namespace sncl {

enum class AttackClass { deterministic_passive, adaptive_passive, deterministic_active, adaptive_active };

constexpr bool is_adaptive(AttackClass k) {
  return k == AttackClass::adaptive_passive || k == AttackClass::adaptive_active;
}
constexpr bool is_active(AttackClass k) {
  return k == AttackClass::deterministic_active || k == AttackClass::adaptive_active;
}
std::string to_string(AttackClass k);
/// Accepts the canonical names plus the short aliases passive, active, adaptive.
AttackClass attack_class_from_string(const std::string& s);

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AttackStrategy {
  AttackClass klass = AttackClass::deterministic_passive;
  Edge first_edge = Edge::e1;
  // Rewrites each tapped first-layer symbol before it reaches the relay.
  std::vector<Symbol> modification;
  // Second edge per first observation (index = base-d value of the tapped
  // symbols across shots). Constant for deterministic strategies.
  std::vector<Edge> selector;

  Edge second_edge_for(std::size_t observation) const { return selector[observation]; }
  bool operator==(const AttackStrategy&) const = default;
};

nlohmann::json to_json(const AttackStrategy& s);

/// Number of strategies of a class for a code with the given alphabet and
/// shot count: first edges x modifications x selectors.
std::uint64_t attack_count(unsigned d, unsigned shots, AttackClass klass);

/// Visits every strategy of the class in canonical order: first edge (e1, e2),
/// then modification map in lexicographic order (identity only when
/// passive), then selector with observation i routed to e4 iff bit i is set.
void for_each_attack(unsigned d, unsigned shots, AttackClass klass,
                     const std::function<void(const AttackStrategy&)>& visit);

/// Materialized for_each_attack; throws BudgetExceeded past `budget`.
std::vector<AttackStrategy> enumerate_attacks(unsigned d, AttackClass klass, unsigned shots = 1,
                                              std::uint64_t budget = 1u << 20);

/// Exact joint law of M, Eve's view and the decoder output with M, the source
/// scrambles and relay randomness uniform. Variables: "M", "Z1" (or "Z1_1",
/// "Z1_2" for two shots), "Z2", "Mhat".
JointDistribution simulate_attack(const OneHopCode& code, const AttackStrategy& strategy);

/// Names of Eve's view variables in simulate_attack output.
NameSet eve_view(const OneHopCode& code);

enum class SecurityLevel { insecure, imperfectly_secret, perfectly_secret };
std::string to_string(SecurityLevel l);

struct SecurityVerdict {
  SecurityLevel level = SecurityLevel::insecure;
  double max_leakage_bits = 0.0;
  AttackStrategy witness;
  std::uint64_t strategies = 0;
};

/// Verdict over every strategy of the class. Adaptive selectors are optimized
/// per first observation, which covers all 2^(d^shots) selectors exactly.
/// Insecure witnesses are the first recovering strategy in canonical order;
/// otherwise the witness is the first strategy attaining the maximum leakage.
SecurityVerdict classify(const OneHopCode& code, AttackClass klass);

/// Reference route: simulates every strategy from for_each_attack and scores
/// it with the info_theory functions.
SecurityVerdict classify_exhaustive(const OneHopCode& code, AttackClass klass);

nlohmann::json to_json(const OneHopCode& code, AttackClass klass, const SecurityVerdict& v);

/// Two-shot extension: Eve may tap a different first-layer edge in each
/// shot (the second chosen from the first observation) and then picks the
/// second-layer edge from both. Exhaustive; returns true iff every such
/// strategy leaks exactly zero.
struct PerShotReport {
  bool perfectly_secret = true;
  std::uint64_t strategies = 0;
  double max_leakage_bits = 0.0;
};
PerShotReport verify_per_shot_secrecy(const OneHopCode& code, bool active);

// ---------------------------------------------------------------------------
// Reproduction of the one-hop summary grid.

struct TableCell {
  AttackClass klass;
  SecurityLevel level;
  SecurityLevel expected;
  double max_leakage_bits = 0.0;
  std::string witness_code;  // code attaining the level (family rows)
  bool matches() const { return level == expected; }
};

struct TableRow {
  std::string family;
  unsigned d = 0;
  std::uint64_t codes_examined = 1;
  std::vector<TableCell> cells;
};

struct ClassificationTable {
  std::vector<TableRow> rows;
  bool matches_expected() const;
  std::string to_csv() const;
  std::string to_text() const;
  nlohmann::json to_json() const;
};

/// Columns of the grid: deterministic-passive, deterministic-active, and
/// adaptive (evaluated as adaptive-active, the strongest class).
const std::vector<AttackClass>& table_columns();

/// Rows: scalar-linear family over Z_d without relay randomness (best verdict
/// over every correct linear code), the standard code over Z_2, anti-Latin
/// codes for d > 2, vector-linear codes.
ClassificationTable classification_table(const std::vector<unsigned>& d_list,
                                         std::uint64_t seed = 0x5eed5eedULL);

// ---------------------------------------------------------------------------

struct NonexistenceReport {
  std::uint64_t codes_examined = 0;
  std::uint64_t insecure = 0;
  std::uint64_t imperfectly_secret = 0;
  std::uint64_t perfectly_secret = 0;
  // Codes that are not insecure are listed with their verdict witness.
  std::vector<std::pair<std::string, SecurityVerdict>> non_insecure;
  // Every code's witness strategy, in enumeration order.
  std::vector<std::pair<std::string, AttackStrategy>> witnesses;
};

enum class CodeFamily { all, scalar_linear };

/// Classifies every correct d = 2 code (one scramble, no relay randomness).
NonexistenceReport exhaustive_nonexistence_check(AttackClass klass,
                                                 CodeFamily family = CodeFamily::all);

struct ReductionReport {
  bool holds = true;
  std::uint64_t active_strategies = 0;
  std::optional<AttackStrategy> counterexample;
};

/// For an affine code, checks that every active strategy's view (jointly with
/// M) equals the corresponding passive view shifted by the relay's known
/// response to Eve's substitution. Throws std::invalid_argument on non-affine
/// codes.
ReductionReport linear_active_reduction_check(const OneHopCode& code);

}  // namespace sncl
