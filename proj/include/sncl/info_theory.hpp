#pragma once

// Exact joint distributions over named finite variables and the entropy
// quantities computed from them.
//
// Probabilities are held as integer weights over a common total, so every
// probability is the exact rational weight / total. Entropies are evaluated
// in floating point from those exact values; structural questions
// (independence, functional dependence) are answered with integer
// arithmetic only.

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/rational.hpp>
#include <json.hpp>

namespace sncl {

using Rational = boost::rational<std::int64_t>;
using Tuple = std::vector<std::uint32_t>;
using NameSet = std::vector<std::string>;

class UnknownVariable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Variable {
  std::string name;
  std::uint32_t alphabet = 0;

  bool operator==(const Variable&) const = default;
};

class JointDistribution {
 public:
  /// Accumulates weighted outcomes. Repeated tuples add up.
  class Builder {
   public:
    explicit Builder(std::vector<Variable> variables);
    Builder& add(const Tuple& tuple, std::uint64_t weight = 1);
    JointDistribution build() const;

   private:
    std::vector<Variable> vars_;
    std::vector<std::uint64_t> radix_;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> raw_;
  };

  /// Rows must sum to exactly one.
  static JointDistribution from_probabilities(
      std::vector<Variable> variables,
      const std::vector<std::pair<Tuple, Rational>>& rows);

  const std::vector<Variable>& variables() const { return vars_; }
  std::size_t index_of(std::string_view name) const;
  std::vector<std::size_t> indices_of(const NameSet& names) const;

  std::uint64_t total_weight() const { return total_; }
  std::size_t support_size() const { return entries_.size(); }

  Rational probability(const Tuple& tuple) const;

  /// Support in canonical (lexicographic tuple) order with raw weights.
  std::vector<std::pair<Tuple, std::uint64_t>> rows() const;

  /// Same variable declarations and identical probabilities.
  bool operator==(const JointDistribution& rhs) const;

  // Internal encoding shared with the free functions below.
  std::uint64_t encode(const Tuple& tuple) const;
  Tuple decode(std::uint64_t key) const;
  const std::vector<std::pair<std::uint64_t, std::uint64_t>>& entries() const {
    return entries_;
  }

 private:
  JointDistribution() = default;

  std::vector<Variable> vars_;
  std::vector<std::uint64_t> radix_;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> entries_;  // sorted by key
  std::uint64_t total_ = 0;
};

JointDistribution marginal(const JointDistribution& dist, const NameSet& vars);

/// H(vars) in bits.
double entropy(const JointDistribution& dist, const NameSet& vars);

/// H(a | given) = H(a u given) - H(given), evaluated term by term.
double conditional_entropy(const JointDistribution& dist, const NameSet& a,
                           const NameSet& given);

/// I(a; b) in bits. Terms whose probabilities factor exactly contribute an
/// exact zero, so product distributions give 0.0.
double mutual_information(const JointDistribution& dist, const NameSet& a,
                          const NameSet& b);

/// Exact test of p(a, b) = p(a) p(b) on every cell.
bool is_independent(const JointDistribution& dist, const NameSet& a, const NameSet& b);

/// True iff target is determined by given on the support, i.e. H(target|given) = 0.
bool is_function_of(const JointDistribution& dist, const NameSet& target,
                    const NameSet& given);

struct HanCheck {
  bool holds = false;
  double lhs = 0.0;    // sum over members S of H(Y_S | X)
  double rhs = 0.0;    // h * H(Y_[k] | X)
  double slack = 0.0;  // lhs - rhs
};

/// Han-type inequality for a collection of subsets of {0..k-1} (groups
/// indexes the k vector variables) in which every element appears in exactly
/// h members.  Throws std::invalid_argument when the cover count is off.
HanCheck check_han_collection(const JointDistribution& dist,
                              const std::vector<NameSet>& groups, const NameSet& x,
                              const std::vector<std::vector<std::size_t>>& collection,
                              std::uint64_t h);

/// Han's inequality over all r-subsets, h = C(k-1, r-1).
HanCheck check_han_subsets(const JointDistribution& dist,
                           const std::vector<NameSet>& groups, const NameSet& x,
                           std::size_t r);

/// Random law over X and Y_1..Y_k with small integer weights, for
/// property sweeps of the Han-type checks. Alphabets are drawn from 1..2 for
/// X and 2..3 for each Y_i; groups[i] = {"Y<i+1>"}.
struct HanInstance {
  JointDistribution dist;
  std::vector<NameSet> groups;
  NameSet x;
};
HanInstance random_han_instance(std::mt19937_64& rng, std::size_t k);

nlohmann::json to_json(const JointDistribution& dist);
JointDistribution distribution_from_json(const nlohmann::json& j);

}  // namespace sncl
