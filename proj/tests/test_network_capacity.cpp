#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "sncl/network_capacity.hpp"

using namespace sncl;

namespace {

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

WiretapNetwork six_node() { return parse_network(read(std::string(SNCL_DATA_DIR) + "/six_node.net")); }

// Minimum over every vertex cut set containing the sources but not the sink
// of the number of edges leaving it.
unsigned brute_force_cut(const WiretapNetwork& net, const std::vector<std::size_t>& sources,
                         const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  const std::size_t n = net.nodes().size();
  const std::size_t sink = net.terminal();
  unsigned best = ~0u;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (mask >> sink & 1) continue;
    bool ok = true;
    for (auto s : sources) ok = ok && (mask >> s & 1);
    if (!ok) continue;
    unsigned crossing = 0;
    for (auto [a, b] : edges) crossing += (mask >> a & 1) && !(mask >> b & 1);
    best = std::min(best, crossing);
  }
  return best;
}

WiretapNetwork random_dag(std::mt19937_64& rng, std::size_t n, bool allow_pseudo) {
  WiretapNetwork net;
  for (std::size_t i = 0; i < n; ++i) {
    const NodeRole role = i == 0 ? NodeRole::source : i + 1 == n ? NodeRole::terminal : NodeRole::intermediate;
    net.add_node({"v" + std::to_string(i), role, i == 0, false});
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (int copies = static_cast<int>(rng() % 3); copies > 1; --copies)
        net.add_edge("v" + std::to_string(a), "v" + std::to_string(b));
  if (!allow_pseudo) {
    for (std::size_t v = 1; v + 1 < n; ++v) {
      bool has_in = false;
      for (auto [a, b] : net.edges()) has_in = has_in || b == v;
      if (!has_in) net.add_edge("v0", "v" + std::to_string(v));
    }
  }
  return net;
}

}  // namespace

TEST(Mincut, SixNodeFixture) {
  const auto net = six_node();
  EXPECT_EQ(mincut1(net), 3u);
  EXPECT_EQ(mincut2(net), 2u);
  ASSERT_EQ(net.pseudo_sources().size(), 1u);
  EXPECT_EQ(net.nodes()[net.pseudo_sources()[0]].id, "5");
  EXPECT_EQ(net.wiretap_budget, 2u);
}

TEST(Mincut, SmallExamples) {
  EXPECT_EQ(mincut1(parse_network("node s source\nnode t terminal\nedge s t\n")), 1u);
  EXPECT_EQ(mincut1(onehop_network()), 2u);
  EXPECT_EQ(mincut2(onehop_network()), 2u);
  EXPECT_EQ(mincut1(parse_network("node s source\nnode x intermediate\nnode t terminal\nedge s x\n")), 0u);
}

TEST(Mincut, MatchesBruteForceCutsOnRandomNetworks) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 150; ++trial) {
    const auto net = random_dag(rng, 3 + rng() % 6, true);
    std::vector<std::size_t> with_pseudo{net.source()};
    for (auto p : net.pseudo_sources()) with_pseudo.push_back(p);
    ASSERT_EQ(mincut1(net), brute_force_cut(net, with_pseudo, net.edges()));
    std::vector<std::pair<std::size_t, std::size_t>> kept;
    const auto pseudo = net.pseudo_sources();
    for (auto e : net.edges())
      if (std::find(pseudo.begin(), pseudo.end(), e.first) == pseudo.end()) kept.push_back(e);
    ASSERT_EQ(mincut2(net), brute_force_cut(net, {net.source()}, kept));
    ASSERT_LE(mincut2(net), mincut1(net));
  }
}

TEST(Parse, RejectsMalformedNetworks) {
  EXPECT_THROW(parse_network("node s source\n"), std::invalid_argument);
  EXPECT_THROW(parse_network("node s source\nnode t terminal\nnode u terminal\n"), std::invalid_argument);
  EXPECT_THROW(parse_network("node s source\nnode t terminal\nedge s q\n"), std::invalid_argument);
  EXPECT_THROW(parse_network("node s source\nnode a intermediate\nnode b intermediate\nnode t terminal\n"
                             "edge a b\nedge b a\n"),
               std::invalid_argument);
  EXPECT_THROW(parse_network("node s boss\n"), std::invalid_argument);
  EXPECT_THROW(parse_network("vertex s\n"), std::invalid_argument);
}

TEST(Parse, TextRoundTrip) {
  const auto net = six_node();
  const auto again = parse_network(to_text(net));
  EXPECT_EQ(to_text(again), to_text(net));
}

TEST(Parse, AnnotatedMessageNodeIsNotPseudoSource) {
  const auto net = parse_network("node s source\nnode x intermediate message\nnode t terminal\nedge s t\nedge x t\n");
  EXPECT_TRUE(net.pseudo_sources().empty());
  EXPECT_EQ(mincut1(net), 1u);
}

TEST(RWiretap, SixNodeWithTwoTaps) {
  const auto c = rwiretap_capacities(six_node(), 2);
  EXPECT_EQ(c.C2, 0u);
  EXPECT_EQ(c.C1_lower, 0u);
  EXPECT_EQ(c.C1_upper, 1u);
  EXPECT_FALSE(c.collapsed);
  EXPECT_TRUE(c.warnings.empty());
}

TEST(RWiretap, ClampsAndWarns) {
  const auto c = rwiretap_capacities(six_node(), 5);
  EXPECT_EQ(c.C2, 0u);
  EXPECT_EQ(c.C1_upper, 0u);
  EXPECT_EQ(c.warnings.size(), 2u);
}

TEST(RWiretap, OneHopAndZeroTaps) {
  const auto c = rwiretap_capacities(onehop_network(), 1);
  EXPECT_TRUE(c.collapsed);
  EXPECT_EQ(c.C2, 1u);
  EXPECT_EQ(c.C1_lower, 1u);
  EXPECT_EQ(c.C1_upper, 1u);
  const auto net = six_node();
  EXPECT_EQ(rwiretap_capacities(net, 0).C2, mincut2(net));
}

TEST(RWiretap, OrderedOnRandomNetworks) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const auto net = random_dag(rng, 3 + rng() % 6, trial % 2);
    for (unsigned r = 0; r < 4; ++r) {
      const auto c = rwiretap_capacities(net, r);
      ASSERT_LE(c.C2, c.C1_lower);
      ASSERT_LE(c.C1_lower, c.C1_upper);
      if (net.pseudo_sources().empty()) {
        ASSERT_TRUE(c.collapsed);
        ASSERT_EQ(c.C1_upper, c.mincut1 > r ? c.mincut1 - r : 0u);
      }
    }
  }
}

TEST(Unicast, Examples) {
  const auto c = unicast_capacities({{2, 2}, {1, 1}, 2});
  EXPECT_EQ(c.C1_bits, 1.0);
  EXPECT_EQ(c.C2_bits, 0.5);
  EXPECT_EQ(c.C2_symbols, Rational(1, 2));
  const auto z = unicast_capacities({{3, 5, 4}, {0, 0, 0}, 8});
  EXPECT_EQ(z.C1_bits, 9.0);
  EXPECT_EQ(z.C2_bits, 9.0);
  const auto one = unicast_capacities({{6}, {2}, 3});
  EXPECT_NEAR(one.C1_bits, 4 * std::log2(3.0), 1e-12);
  EXPECT_EQ(one.C1_bits, one.C2_bits);
}

TEST(Unicast, RejectsInvalidNetworks) {
  EXPECT_THROW(unicast_capacities({{2, 2}, {1, 2}, 2}), std::invalid_argument);
  EXPECT_THROW(unicast_capacities({{2}, {1, 0}, 2}), std::invalid_argument);
  EXPECT_THROW(unicast_capacities({{0}, {0}, 2}), std::invalid_argument);
  EXPECT_THROW(layered_from_json(nlohmann::json::parse(R"({"c":3,"k":[2,2],"r":[1,1],"q":2})")),
               std::invalid_argument);
}

TEST(Unicast, C2NeverExceedsC1) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 500; ++trial) {
    LayeredUnicastNetwork net;
    net.q = 2 + static_cast<std::uint32_t>(rng() % 6);
    const std::size_t c = 1 + rng() % 4;
    for (std::size_t i = 0; i < c; ++i) {
      net.k.push_back(1 + static_cast<unsigned>(rng() % 5));
      net.r.push_back(static_cast<unsigned>(rng() % net.k.back()));
    }
    const auto cap = unicast_capacities(net);
    ASSERT_LE(cap.C2_symbols, cap.C1_symbols);
    // Oracle: direct floating evaluation of both formulas.
    double c1 = 1e9, c2 = 1e9;
    for (std::size_t j = 0; j < c; ++j) {
      c1 = std::min(c1, double(net.k[j] - net.r[j]));
      double t = net.k[j] - net.r[j];
      for (std::size_t i = j + 1; i < c; ++i) t *= double(net.k[i] - net.r[i]) / net.k[i];
      c2 = std::min(c2, t);
    }
    ASSERT_NEAR(cap.C1_bits, c1 * std::log2(net.q), 1e-9);
    ASSERT_NEAR(cap.C2_bits, c2 * std::log2(net.q), 1e-9);
    bool tail_clear = true;
    for (std::size_t i = 1; i < c; ++i) tail_clear = tail_clear && net.r[i] == 0;
    if (tail_clear) ASSERT_EQ(cap.C1_symbols, cap.C2_symbols);
  }
}

TEST(WiretapII, EncodeDecodeRoundTrip) {
  const WiretapIICode code(5, 2, 7);
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint32_t> m(3), s(2);
    for (auto& v : m) v = rng() % 7;
    for (auto& v : s) v = rng() % 7;
    const auto x = code.encode(m, s);
    ASSERT_EQ(code.decode(x), m);
    ASSERT_EQ(std::vector<std::uint32_t>(x.begin(), x.begin() + 2), s);
  }
}

TEST(WiretapII, VerifiedParameterSets) {
  for (auto [q, k, r] : {std::tuple{3u, 3u, 1u}, {5u, 4u, 2u}, {3u, 2u, 1u}, {5u, 5u, 3u}, {3u, 3u, 0u}}) {
    const auto rep = wiretap2_verify(WiretapIICode(k, r, q));
    EXPECT_TRUE(rep.decodable) << q << k << r;
    EXPECT_TRUE(rep.zero_leakage) << q << k << r;
    EXPECT_EQ(rep.cases, static_cast<std::uint64_t>(std::pow(q, k)));
    for (const auto& t : rep.taps) EXPECT_EQ(t.leakage_bits, 0.0);
  }
}

TEST(WiretapII, RejectsBadParameters) {
  EXPECT_THROW(WiretapIICode(4, 1, 3), std::invalid_argument);
  EXPECT_THROW(WiretapIICode(3, 3, 3), std::invalid_argument);
  EXPECT_THROW(WiretapIICode(3, 1, 4), std::invalid_argument);
}
