#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "sncl/anti_latin.hpp"
#include "sncl/attack_engine.hpp"

using namespace sncl;

namespace {

const std::vector<AttackClass> kAllClasses{AttackClass::deterministic_passive, AttackClass::adaptive_passive,
                                           AttackClass::deterministic_active, AttackClass::adaptive_active};

AttackStrategy strategy(AttackClass k, Edge first, std::vector<Symbol> mod, std::vector<Edge> sel) {
  AttackStrategy s;
  s.klass = k;
  s.first_edge = first;
  s.modification = std::move(mod);
  s.selector = std::move(sel);
  return s;
}

std::vector<Symbol> identity(unsigned d) {
  std::vector<Symbol> v(d);
  for (unsigned i = 0; i < d; ++i) v[i] = static_cast<Symbol>(i);
  return v;
}

std::vector<OneHopCode> assorted_codes() {
  std::vector<OneHopCode> out{standard_nonlinear_code(2), standard_nonlinear_code(3),
                              scalar_linear_code(2),      scalar_linear_code(3, false),
                              vector_linear_code(2)};
  auto [a, b] = sample_pair_d3();
  out.push_back(anti_latin_code(a, b));
  return out;
}

}  // namespace

TEST(Enumeration, CountsPerClass) {
  EXPECT_EQ(enumerate_attacks(2, AttackClass::deterministic_passive).size(), 4u);
  EXPECT_EQ(enumerate_attacks(2, AttackClass::adaptive_passive).size(), 8u);
  EXPECT_EQ(enumerate_attacks(3, AttackClass::adaptive_active).size(), 432u);
  for (unsigned d = 2; d <= 4; ++d) {
    const std::uint64_t dd = static_cast<std::uint64_t>(std::pow(d, d));
    EXPECT_EQ(attack_count(d, 1, AttackClass::deterministic_passive), 4u);
    EXPECT_EQ(attack_count(d, 1, AttackClass::adaptive_passive), 2u << d);
    EXPECT_EQ(attack_count(d, 1, AttackClass::deterministic_active), 4 * dd);
    EXPECT_EQ(attack_count(d, 1, AttackClass::adaptive_active), 2 * dd * (1u << d));
    for (auto k : kAllClasses) {
      const auto list = enumerate_attacks(d, k);
      ASSERT_EQ(list.size(), attack_count(d, 1, k));
      std::set<std::string> distinct;
      for (const auto& s : list) distinct.insert(to_json(s).dump());
      EXPECT_EQ(distinct.size(), list.size());
    }
  }
  EXPECT_EQ(attack_count(3, 2, AttackClass::adaptive_passive), 2u * 512);
}

TEST(Enumeration, BudgetIsEnforced) {
  EXPECT_THROW(enumerate_attacks(6, AttackClass::adaptive_active, 1, 1000), BudgetExceeded);
}

TEST(Enumeration, ClassNames) {
  for (auto k : kAllClasses) EXPECT_EQ(attack_class_from_string(to_string(k)), k);
  EXPECT_THROW(attack_class_from_string("sneaky"), std::invalid_argument);
}

TEST(Simulate, StandardCodePassiveViewsLeakHalfABit) {
  const auto c = standard_nonlinear_code(2);
  for (Edge first : {Edge::e1, Edge::e2})
    for (Edge second : {Edge::e3, Edge::e4}) {
      const auto dist = simulate_attack(c, strategy(AttackClass::deterministic_passive, first, identity(2), {second, second}));
      EXPECT_NEAR(mutual_information(dist, {"M"}, eve_view(c)), 0.5, 1e-12);
      EXPECT_FALSE(is_function_of(dist, {"M"}, eve_view(c)));
    }
}

TEST(Simulate, RejectsMalformedStrategies) {
  const auto c = standard_nonlinear_code(2);
  EXPECT_THROW(simulate_attack(c, strategy(AttackClass::deterministic_passive, Edge::e1, {1, 0}, {Edge::e3, Edge::e3})),
               std::invalid_argument);
  EXPECT_THROW(simulate_attack(c, strategy(AttackClass::deterministic_passive, Edge::e1, identity(2), {Edge::e3, Edge::e4})),
               std::invalid_argument);
  EXPECT_THROW(simulate_attack(c, strategy(AttackClass::adaptive_passive, Edge::e1, identity(2), {Edge::e3})),
               std::invalid_argument);
  EXPECT_THROW(simulate_attack(vector_linear_code(2),
                               strategy(AttackClass::adaptive_passive, Edge::e1, identity(2), {Edge::e3, Edge::e4})),
               std::invalid_argument);
}

TEST(Simulate, SubstitutionAttacksRecoverTheMessage) {
  for (unsigned d = 2; d <= 5; ++d) {
    const auto c = standard_nonlinear_code(d);
    const std::vector<Symbol> to_one(d, 1), to_zero(d, 0);
    const auto read3 = simulate_attack(c, strategy(AttackClass::deterministic_active, Edge::e1, to_one, std::vector<Edge>(d, Edge::e3)));
    for (const auto& [t, w] : read3.rows()) ASSERT_EQ((t[2] + 1 + d - t[1]) % d, t[0]);
    const auto read4 = simulate_attack(c, strategy(AttackClass::deterministic_active, Edge::e1, to_zero, std::vector<Edge>(d, Edge::e4)));
    for (const auto& [t, w] : read4.rows()) ASSERT_EQ((t[2] + d - t[1]) % d, t[0]);
    EXPECT_NEAR(mutual_information(read3, {"M"}, {"Z1", "Z2"}), std::log2(d), 1e-12);
    EXPECT_NEAR(mutual_information(read4, {"M"}, {"Z1", "Z2"}), std::log2(d), 1e-12);
  }
}

TEST(Simulate, EveKeepsTheTrueObservation) {
  const auto c = standard_nonlinear_code(3);
  const auto dist = simulate_attack(c, strategy(AttackClass::deterministic_active, Edge::e1, {2, 2, 2}, {Edge::e3, Edge::e3, Edge::e3}));
  EXPECT_EQ(marginal(dist, {"Z1"}).support_size(), 3u);
}

TEST(Classify, AdaptiveRoutingBreaksStandardCode) {
  const auto v = classify(standard_nonlinear_code(2), AttackClass::adaptive_passive);
  EXPECT_EQ(v.level, SecurityLevel::insecure);
  EXPECT_EQ(v.witness.first_edge, Edge::e1);
  EXPECT_EQ(v.witness.selector, (std::vector<Edge>{Edge::e4, Edge::e3}));
  EXPECT_NEAR(v.max_leakage_bits, 1.0, 1e-12);
}

TEST(Classify, PrimeAlphabetWitnessRoutesByScramble) {
  for (unsigned d : {2u, 3u, 5u, 7u}) {
    const auto v = classify(standard_nonlinear_code(d), AttackClass::adaptive_passive);
    ASSERT_EQ(v.level, SecurityLevel::insecure) << d;
    EXPECT_EQ(v.witness.first_edge, Edge::e1);
    EXPECT_EQ(v.witness.selector[0], Edge::e4);
    for (unsigned l = 1; l < d; ++l) EXPECT_EQ(v.witness.selector[l], Edge::e3) << d << ' ' << l;
  }
}

TEST(Classify, PerfectlySecretCodes) {
  for (unsigned d = 2; d <= 4; ++d) {
    for (auto k : kAllClasses) {
      EXPECT_EQ(classify(vector_linear_code(d), k).level, SecurityLevel::perfectly_secret) << d;
      EXPECT_EQ(classify(scalar_linear_code(d, true), k).level, SecurityLevel::perfectly_secret) << d;
    }
  }
  const auto v = classify(vector_linear_code(3), AttackClass::adaptive_active);
  EXPECT_EQ(v.max_leakage_bits, 0.0);
}

TEST(Classify, FastRouteAgreesWithExhaustiveSimulation) {
  for (const auto& c : assorted_codes())
    for (auto k : kAllClasses) {
      const auto fast = classify(c, k);
      const auto slow = classify_exhaustive(c, k);
      EXPECT_EQ(fast.level, slow.level) << c.id() << ' ' << to_string(k);
      EXPECT_NEAR(fast.max_leakage_bits, slow.max_leakage_bits, 1e-9) << c.id() << ' ' << to_string(k);
      EXPECT_EQ(fast.witness, slow.witness) << c.id() << ' ' << to_string(k);
      EXPECT_EQ(fast.strategies, slow.strategies);
    }
}

TEST(Classify, FastRouteAgreesOnEnumeratedCodes) {
  std::uint64_t index = 0, compared = 0;
  enumerate_onehop_codes(2, [&](const OneHopCode& c) {
    if (index++ % 61 != 0) return;
    ++compared;
    for (auto k : kAllClasses) {
      const auto fast = classify(c, k);
      const auto slow = classify_exhaustive(c, k);
      ASSERT_EQ(fast.level, slow.level) << c.id();
      ASSERT_NEAR(fast.max_leakage_bits, slow.max_leakage_bits, 1e-9) << c.id();
      ASSERT_EQ(fast.witness, slow.witness) << c.id();
    }
  });
  EXPECT_GT(compared, 100u);
}

TEST(Classify, LeakageBoundedByLogDWithEqualityExactlyOnRecovery) {
  for (const auto& c : assorted_codes()) {
    const double cap = std::log2(c.d());
    for_each_attack(c.d(), c.shots(), AttackClass::adaptive_active, [&](const AttackStrategy& s) {
      const auto dist = simulate_attack(c, s);
      const double i = mutual_information(dist, {"M"}, eve_view(c));
      ASSERT_LE(i, cap + 1e-12);
      ASSERT_EQ(std::abs(i - cap) < 1e-9, is_function_of(dist, {"M"}, eve_view(c))) << c.id();
    });
  }
}

TEST(Classify, StrongerClassesNeverLeakLess) {
  std::vector<OneHopCode> codes;
  for (unsigned d = 2; d <= 5; ++d) {
    codes.push_back(standard_nonlinear_code(d));
    codes.push_back(scalar_linear_code(d, false));
  }
  codes.push_back(vector_linear_code(2));
  codes.push_back(vector_linear_code(3));
  for (const auto& p : {sample_pair_d3(), sample_pair_d4()}) codes.push_back(anti_latin_code(p.first, p.second));
  auto rank = [](const SecurityVerdict& v) {
    return v.level == SecurityLevel::insecure ? 1e9 : v.max_leakage_bits;
  };
  for (const auto& c : codes) {
    const double dp = rank(classify(c, AttackClass::deterministic_passive));
    const double ap = rank(classify(c, AttackClass::adaptive_passive));
    const double da = rank(classify(c, AttackClass::deterministic_active));
    const double aa = rank(classify(c, AttackClass::adaptive_active));
    EXPECT_LE(dp, ap + 1e-12) << c.id();
    EXPECT_LE(ap, aa + 1e-12) << c.id();
    EXPECT_LE(dp, da + 1e-12) << c.id();
    EXPECT_LE(da, aa + 1e-12) << c.id();
  }
}

TEST(Classify, AntiLatinCodesFromPairSearchStayImperfectlySecret) {
  for (unsigned d : {3u, 5u}) {
    const auto found = find_decodable_pair(d);
    ASSERT_TRUE(found.pair.has_value()) << d;
    const auto c = anti_latin_code(found.pair->first, found.pair->second);
    ASSERT_TRUE(check_correctness(c));
    EXPECT_EQ(classify(c, AttackClass::adaptive_active).level, SecurityLevel::imperfectly_secret) << d;
  }
}

TEST(PerShot, VectorLinearStaysPerfectlySecret) {
  for (unsigned d : {2u, 3u})
    for (bool active : {false, true}) {
      const auto r = verify_per_shot_secrecy(vector_linear_code(d), active);
      EXPECT_TRUE(r.perfectly_secret) << d << ' ' << active;
      EXPECT_EQ(r.max_leakage_bits, 0.0);
      EXPECT_GT(r.strategies, 0u);
    }
  EXPECT_THROW(verify_per_shot_secrecy(standard_nonlinear_code(2), false), std::invalid_argument);
}

TEST(PerShot, DetectsLeakyTwoShotCode) {
  // Shot 2 repeats the message in the clear on e1.
  const auto base = vector_linear_code(2);
  auto enc = base.encoder_table();
  for (std::size_t i = 0; i < base.source_inputs(); ++i) enc[i * 4 + 1] = base.message_of(i);
  const OneHopCode leaky("leaky", 2, 2, 3, false, enc, base.relay_table(), base.decoder_table());
  EXPECT_FALSE(verify_per_shot_secrecy(leaky, false).perfectly_secret);
}

TEST(Table, ReproducesExpectedGrid) {
  const auto t = classification_table({2, 3, 4});
  EXPECT_TRUE(t.matches_expected()) << t.to_text();
  ASSERT_EQ(t.rows.size(), 9u);
  const auto& standard = t.rows[3];
  EXPECT_EQ(standard.family, "standard-nonlinear");
  EXPECT_EQ(standard.cells[0].level, SecurityLevel::imperfectly_secret);
  EXPECT_EQ(standard.cells[1].level, SecurityLevel::insecure);
  EXPECT_EQ(standard.cells[2].level, SecurityLevel::insecure);
  EXPECT_GT(t.rows[0].codes_examined, 1u);
  const auto csv = t.to_csv();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);
  EXPECT_EQ(t.to_json()["matches_expected"], true);
}

TEST(Nonexistence, BinaryCodesFallToAdaptiveTaps) {
  const auto r = exhaustive_nonexistence_check(AttackClass::adaptive_passive);
  EXPECT_GT(r.codes_examined, 0u);
  EXPECT_EQ(r.insecure, r.codes_examined);
  EXPECT_TRUE(r.non_insecure.empty());
  EXPECT_EQ(r.witnesses.size(), r.codes_examined);
}

TEST(Nonexistence, DeterministicPassiveAdmitsImperfectSecrecy) {
  const auto r = exhaustive_nonexistence_check(AttackClass::deterministic_passive);
  EXPECT_GT(r.imperfectly_secret, 0u);
  EXPECT_EQ(r.insecure + r.imperfectly_secret + r.perfectly_secret, r.codes_examined);
  const auto standard = standard_nonlinear_code(2);
  std::string standard_id;
  enumerate_onehop_codes(2, [&](const OneHopCode& c) {
    if (c.encoder_table() == standard.encoder_table() && c.relay_table() == standard.relay_table())
      standard_id = c.id();
  });
  bool standard_listed = false;
  for (const auto& [id, v] : r.non_insecure) standard_listed = standard_listed || id == standard_id;
  EXPECT_TRUE(standard_listed);
  const auto lin = exhaustive_nonexistence_check(AttackClass::deterministic_passive, CodeFamily::scalar_linear);
  EXPECT_GT(lin.codes_examined, 0u);
  EXPECT_EQ(lin.insecure, lin.codes_examined);
}

TEST(Reduction, LinearCodesReduceToPassive) {
  for (const auto& c : {scalar_linear_code(3), scalar_linear_code(2, false), vector_linear_code(2)}) {
    const auto r = linear_active_reduction_check(c);
    EXPECT_TRUE(r.holds) << c.id();
    EXPECT_FALSE(r.counterexample.has_value());
    EXPECT_EQ(r.active_strategies, attack_count(c.d(), c.shots(), AttackClass::deterministic_active) +
                                       attack_count(c.d(), c.shots(), AttackClass::adaptive_active));
  }
  EXPECT_THROW(linear_active_reduction_check(standard_nonlinear_code(2)), std::invalid_argument);
}

TEST(Json, VerdictCarriesWitness) {
  const auto c = standard_nonlinear_code(2);
  const auto j = to_json(c, AttackClass::adaptive_passive, classify(c, AttackClass::adaptive_passive));
  EXPECT_EQ(j["level"], "insecure");
  EXPECT_EQ(j["code_id"], c.id());
  EXPECT_EQ(j["witness"]["first_edge"], "e1");
  EXPECT_EQ(j["witness"]["selector"], (nlohmann::json{"e4", "e3"}));
}
