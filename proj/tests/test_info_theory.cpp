#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "sncl/info_theory.hpp"

using namespace sncl;

namespace {

// Entropy straight from the row list, grouping by the projected tuple.
double oracle_entropy(const JointDistribution& dist, const NameSet& names) {
  const auto idx = dist.indices_of(names);
  std::map<Tuple, double> p;
  for (const auto& [t, w] : dist.rows()) {
    Tuple key;
    for (auto i : idx) key.push_back(t[i]);
    p[key] += static_cast<double>(w) / static_cast<double>(dist.total_weight());
  }
  double h = 0;
  for (const auto& [k, v] : p) h -= v * std::log2(v);
  return h;
}

JointDistribution uniform_pair() {
  return JointDistribution::Builder({{"A", 2}, {"B", 2}})
      .add({0, 0})
      .add({0, 1})
      .add({1, 0})
      .add({1, 1})
      .build();
}

JointDistribution random_distribution(std::mt19937_64& rng, std::size_t vars) {
  std::vector<Variable> v;
  for (std::size_t i = 0; i < vars; ++i) v.push_back({"V" + std::to_string(i), 2 + static_cast<std::uint32_t>(rng() % 2)});
  JointDistribution::Builder b(v);
  bool any = false;
  Tuple t(vars, 0);
  while (true) {
    if (rng() % 3) {
      b.add(t, 1 + rng() % 7);
      any = true;
    }
    std::size_t i = vars;
    while (i > 0 && t[i - 1] + 1 == v[i - 1].alphabet) t[--i] = 0;
    if (i == 0) break;
    ++t[i - 1];
  }
  if (!any) b.add(Tuple(vars, 0));
  return b.build();
}

}  // namespace

TEST(JointDistribution, BuilderMergesRepeatedTuples) {
  const auto d = JointDistribution::Builder({{"X", 3}}).add({1}).add({1}).add({2}, 2).build();
  EXPECT_EQ(d.support_size(), 2u);
  EXPECT_EQ(d.probability({1}), Rational(1, 2));
  EXPECT_EQ(d.probability({0}), Rational(0));
}

TEST(JointDistribution, RejectsBadInput) {
  EXPECT_THROW(JointDistribution::Builder({{"X", 2}}).add({2}), std::invalid_argument);
  EXPECT_THROW(JointDistribution::Builder({{"X", 2}}).add({0, 0}), std::invalid_argument);
  EXPECT_THROW(JointDistribution::from_probabilities({{"X", 2}}, {{{0}, Rational(1, 3)}}),
               std::invalid_argument);
  EXPECT_THROW(entropy(uniform_pair(), {"C"}), UnknownVariable);
}

TEST(JointDistribution, ZeroProbabilityRowsAreDropped) {
  const auto d = JointDistribution::from_probabilities(
      {{"X", 3}}, {{{0}, Rational(1, 2)}, {{1}, Rational(0)}, {{2}, Rational(1, 2)}});
  EXPECT_EQ(d.support_size(), 2u);
}

TEST(Marginal, Examples) {
  const auto m = marginal(uniform_pair(), {"A"});
  EXPECT_EQ(m.probability({0}), Rational(1, 2));
  EXPECT_EQ(m.probability({1}), Rational(1, 2));

  const auto point = JointDistribution::Builder({{"A", 3}, {"B", 3}}).add({2, 1}).build();
  EXPECT_EQ(marginal(point, {"B"}).probability({1}), Rational(1));

  const auto diag = JointDistribution::Builder({{"A", 2}, {"B", 2}}).add({0, 0}).add({1, 1}).build();
  const auto b = marginal(diag, {"B"});
  EXPECT_EQ(b.probability({0}), Rational(1, 2));
  EXPECT_EQ(b.probability({1}), Rational(1, 2));
}

TEST(Entropy, Examples) {
  EXPECT_DOUBLE_EQ(entropy(uniform_pair(), {"A"}), 1.0);
  EXPECT_DOUBLE_EQ(entropy(JointDistribution::Builder({{"A", 4}}).add({3}).build(), {"A"}), 0.0);
  const auto z3 = JointDistribution::Builder({{"A", 3}}).add({0}).add({1}).add({2}).build();
  EXPECT_NEAR(entropy(z3, {"A"}), std::log2(3.0), 1e-12);
}

TEST(MutualInformation, Examples) {
  EXPECT_EQ(mutual_information(uniform_pair(), {"A"}, {"B"}), 0.0);
  const auto copy = JointDistribution::Builder({{"A", 2}, {"B", 2}}).add({0, 0}).add({1, 1}).build();
  EXPECT_NEAR(mutual_information(copy, {"A"}, {"B"}), 1.0, 1e-12);
  EXPECT_THROW(mutual_information(copy, {"A"}, {"A", "B"}), std::invalid_argument);
}

TEST(FunctionOf, Examples) {
  const auto copy = JointDistribution::Builder({{"A", 2}, {"B", 2}}).add({0, 0}).add({1, 1}).build();
  EXPECT_TRUE(is_function_of(copy, {"A"}, {"B"}));
  EXPECT_FALSE(is_function_of(uniform_pair(), {"A"}, {"B"}));
}

TEST(InfoTheoryProperties, AgreeWithOracleOnRandomDistributions) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 400; ++trial) {
    const auto d = random_distribution(rng, 4);
    const NameSet a{"V0", "V2"}, b{"V1"}, ab{"V0", "V1", "V2"};
    const double ha = entropy(d, a), hb = entropy(d, b), hab = entropy(d, ab);
    ASSERT_NEAR(ha, oracle_entropy(d, a), 1e-12);
    ASSERT_NEAR(hab, oracle_entropy(d, ab), 1e-12);
    // Monotone: adding variables never lowers entropy.
    ASSERT_LE(ha, hab + 1e-12);
    ASSERT_LE(hb, hab + 1e-12);
    const double i = mutual_information(d, a, b);
    ASSERT_NEAR(i, ha + hb - hab, 1e-10);
    ASSERT_GE(i, -1e-12);
    ASSERT_DOUBLE_EQ(i, mutual_information(d, b, a));
    ASSERT_NEAR(conditional_entropy(d, a, b), hab - hb, 1e-10);
    if (is_function_of(d, b, a)) ASSERT_NEAR(mutual_information(d, b, a), entropy(d, b), 1e-12);
    if (is_independent(d, a, b)) ASSERT_EQ(i, 0.0);
  }
}

TEST(InfoTheoryProperties, ExplicitProductsHaveExactlyZeroInformation) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = random_distribution(rng, 2);
    const auto y = random_distribution(rng, 1);
    std::vector<Variable> vars = x.variables();
    vars.push_back({"W", y.variables()[0].alphabet});
    JointDistribution::Builder b(vars);
    for (const auto& [tx, wx] : x.rows())
      for (const auto& [ty, wy] : y.rows()) b.add({tx[0], tx[1], ty[0]}, wx * wy);
    const auto d = b.build();
    ASSERT_TRUE(is_independent(d, {"V0", "V1"}, {"W"}));
    ASSERT_EQ(mutual_information(d, {"V0", "V1"}, {"W"}), 0.0);
  }
}

TEST(Han, CollectionExamples) {
  const auto copy = JointDistribution::Builder({{"X", 1}, {"Y1", 2}, {"Y2", 2}}).add({0, 0, 0}).add({0, 1, 1}).build();
  const auto c = check_han_collection(copy, {{"Y1"}, {"Y2"}}, {"X"}, {{0}, {1}}, 1);
  EXPECT_TRUE(c.holds);
  EXPECT_NEAR(c.slack, 1.0, 1e-12);

  const auto whole = check_han_collection(copy, {{"Y1"}, {"Y2"}}, {"X"}, {{0, 1}}, 1);
  EXPECT_EQ(whole.slack, 0.0);

  EXPECT_THROW(check_han_collection(copy, {{"Y1"}, {"Y2"}}, {"X"}, {{0}, {0, 1}}, 1), std::invalid_argument);
}

TEST(Han, SubsetExamples) {
  JointDistribution::Builder b({{"X", 1}, {"Y1", 2}, {"Y2", 2}, {"Y3", 2}});
  for (std::uint32_t v = 0; v < 8; ++v) b.add({0, v >> 2, (v >> 1) & 1, v & 1});
  const auto d = b.build();
  const std::vector<NameSet> groups{{"Y1"}, {"Y2"}, {"Y3"}};
  const auto c = check_han_subsets(d, groups, {"X"}, 1);
  EXPECT_NEAR(c.lhs, 3.0, 1e-12);
  EXPECT_NEAR(c.rhs, 3.0, 1e-12);
  EXPECT_NEAR(c.slack, 0.0, 1e-12);
  EXPECT_EQ(check_han_subsets(d, groups, {"X"}, 3).slack, 0.0);
  EXPECT_THROW(check_han_subsets(d, groups, {"X"}, 0), std::invalid_argument);
  EXPECT_THROW(check_han_subsets(d, groups, {"X"}, 4), std::invalid_argument);
}

TEST(Han, RandomSweepNeverViolates) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto inst = random_han_instance(rng, 3);
    for (std::size_t r = 1; r <= 3; ++r)
      ASSERT_TRUE(check_han_subsets(inst.dist, inst.groups, inst.x, r).holds);
  }
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = random_han_instance(rng, 4);
    ASSERT_TRUE(check_han_subsets(inst.dist, inst.groups, inst.x, 2).holds);
  }
}

TEST(Json, RoundTripIsExact) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = random_distribution(rng, 3);
    EXPECT_EQ(distribution_from_json(to_json(d)), d);
  }
}
