#include "sncl/network_capacity.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <stdexcept>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/edmonds_karp_max_flow.hpp>

#include "sncl/combinatorics.hpp"

namespace sncl {

std::string to_string(NodeRole r) {
  switch (r) {
    case NodeRole::source: return "source";
    case NodeRole::terminal: return "terminal";
    case NodeRole::intermediate: return "intermediate";
  }
  return "?";
}

void WiretapNetwork::add_node(NetworkNode node) {
  for (const auto& n : nodes_)
    if (n.id == node.id) throw std::invalid_argument("duplicate node '" + node.id + "'");
  nodes_.push_back(std::move(node));
}

std::size_t WiretapNetwork::node_index(const std::string& id) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].id == id) return i;
  throw std::invalid_argument("unknown node '" + id + "'");
}

void WiretapNetwork::add_edge(const std::string& from, const std::string& to) {
  const auto a = node_index(from), b = node_index(to);
  if (a == b) throw std::invalid_argument("self-loop on node '" + from + "'");
  edges_.emplace_back(a, b);
}

namespace {

std::size_t unique_role(const std::vector<NetworkNode>& nodes, NodeRole role) {
  std::size_t found = nodes.size(), count = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].role == role) {
      found = i;
      ++count;
    }
  if (count != 1)
    throw std::invalid_argument("network needs exactly one " + to_string(role) + " node, found " +
                                std::to_string(count));
  return found;
}

}  // namespace

std::size_t WiretapNetwork::source() const { return unique_role(nodes_, NodeRole::source); }
std::size_t WiretapNetwork::terminal() const { return unique_role(nodes_, NodeRole::terminal); }

std::vector<std::size_t> WiretapNetwork::pseudo_sources() const {
  std::vector<bool> has_in(nodes_.size());
  for (auto [a, b] : edges_) has_in[b] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].role == NodeRole::intermediate && !has_in[i] && !nodes_[i].message) out.push_back(i);
  return out;
}

void WiretapNetwork::validate() const {
  source();
  terminal();
  std::vector<std::size_t> indeg(nodes_.size());
  std::vector<std::vector<std::size_t>> out(nodes_.size());
  for (auto [a, b] : edges_) {
    ++indeg[b];
    out[a].push_back(b);
  }
  std::queue<std::size_t> ready;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (indeg[i] == 0) ready.push(i);
  std::size_t seen = 0;
  while (!ready.empty()) {
    const auto v = ready.front();
    ready.pop();
    ++seen;
    for (auto w : out[v])
      if (--indeg[w] == 0) ready.push(w);
  }
  if (seen != nodes_.size()) throw std::invalid_argument("network contains a directed cycle");
}

WiretapNetwork parse_network(std::string_view text) {
  WiretapNetwork net;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("network line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    try {
      if (tok[0] == "node") {
        if (tok.size() < 3) fail("expected 'node <id> <role> [message] [random]'");
        NetworkNode n{tok[1], NodeRole::intermediate, false, false};
        if (tok[2] == "source") n.role = NodeRole::source;
        else if (tok[2] == "terminal") n.role = NodeRole::terminal;
        else if (tok[2] == "intermediate") n.role = NodeRole::intermediate;
        else fail("unknown role '" + tok[2] + "'");
        for (std::size_t i = 3; i < tok.size(); ++i) {
          if (tok[i] == "message") n.message = true;
          else if (tok[i] == "random") n.random = true;
          else fail("unknown node annotation '" + tok[i] + "'");
        }
        net.add_node(n);
      } else if (tok[0] == "edge") {
        if (tok.size() != 3) fail("expected 'edge <from> <to>'");
        net.add_edge(tok[1], tok[2]);
      } else if (tok[0] == "wiretap") {
        if (tok.size() != 2) fail("expected 'wiretap <r>'");
        net.wiretap_budget = static_cast<unsigned>(std::stoul(tok[1]));
      } else {
        fail("unknown directive '" + tok[0] + "'");
      }
    } catch (const std::logic_error& e) {
      const std::string msg = e.what();
      if (msg.rfind("network line", 0) == 0) throw;
      fail(msg);
    }
  }
  net.validate();
  return net;
}

std::string to_text(const WiretapNetwork& net) {
  std::ostringstream os;
  for (const auto& n : net.nodes()) {
    os << "node " << n.id << ' ' << to_string(n.role);
    if (n.message) os << " message";
    if (n.random) os << " random";
    os << '\n';
  }
  for (auto [a, b] : net.edges()) os << "edge " << net.nodes()[a].id << ' ' << net.nodes()[b].id << '\n';
  if (net.wiretap_budget) os << "wiretap " << net.wiretap_budget << '\n';
  return os.str();
}

WiretapNetwork onehop_network() {
  WiretapNetwork net;
  net.add_node({"s", NodeRole::source, true, true});
  net.add_node({"relay", NodeRole::intermediate, false, false});
  net.add_node({"t", NodeRole::terminal, false, false});
  net.add_edge("s", "relay");
  net.add_edge("s", "relay");
  net.add_edge("relay", "t");
  net.add_edge("relay", "t");
  return net;
}

namespace {

using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
using FlowGraph = boost::adjacency_list<
    boost::vecS, boost::vecS, boost::directedS, boost::no_property,
    boost::property<boost::edge_capacity_t, long,
                    boost::property<boost::edge_residual_capacity_t, long,
                                    boost::property<boost::edge_reverse_t, Traits::edge_descriptor>>>>;

// Unit-capacity max flow from `sources` (merged through a super source) to `sink`.
unsigned max_flow(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                  const std::vector<std::size_t>& sources, std::size_t sink) {
  FlowGraph g(n + 1);
  auto cap = boost::get(boost::edge_capacity, g);
  auto rev = boost::get(boost::edge_reverse, g);
  auto link = [&](std::size_t a, std::size_t b, long c) {
    auto e = boost::add_edge(a, b, g).first;
    auto r = boost::add_edge(b, a, g).first;
    cap[e] = c;
    cap[r] = 0;
    rev[e] = r;
    rev[r] = e;
  };
  for (auto [a, b] : edges) link(a, b, 1);
  const std::size_t super = n;
  for (auto s : sources) link(super, s, static_cast<long>(edges.size()) + 1);
  return static_cast<unsigned>(boost::edmonds_karp_max_flow(g, super, sink));
}

}  // namespace

unsigned mincut1(const WiretapNetwork& net) {
  net.validate();
  std::vector<std::size_t> sources{net.source()};
  for (auto p : net.pseudo_sources()) sources.push_back(p);
  return max_flow(net.nodes().size(), net.edges(), sources, net.terminal());
}

unsigned mincut2(const WiretapNetwork& net) {
  net.validate();
  const auto pseudo = net.pseudo_sources();
  std::vector<std::pair<std::size_t, std::size_t>> kept;
  for (auto e : net.edges())
    if (std::find(pseudo.begin(), pseudo.end(), e.first) == pseudo.end()) kept.push_back(e);
  return max_flow(net.nodes().size(), kept, {net.source()}, net.terminal());
}

RWiretapCapacities rwiretap_capacities(const WiretapNetwork& net, unsigned r) {
  RWiretapCapacities c;
  c.mincut1 = mincut1(net);
  c.mincut2 = mincut2(net);
  c.r = r;
  auto clamp = [&](unsigned cut, const char* name) {
    if (r <= cut) return cut - r;
    c.warnings.push_back(std::string(name) + " = " + std::to_string(cut) + " is below r = " +
                         std::to_string(r) + "; capacity clamped to 0");
    return 0u;
  };
  c.C2 = clamp(c.mincut2, "mincut2");
  c.C1_lower = c.C2;
  c.C1_upper = clamp(c.mincut1, "mincut1");
  if (net.pseudo_sources().empty()) {
    c.collapsed = true;
    c.C1_lower = c.C1_upper = c.C2;
  }
  return c;
}

nlohmann::json to_json(const RWiretapCapacities& c) {
  return {{"schema_version", 1},
          {"mincut1", c.mincut1},
          {"mincut2", c.mincut2},
          {"r", c.r},
          {"C2", c.C2},
          {"C1_bounds", {c.C1_lower, c.C1_upper}},
          {"collapsed", c.collapsed},
          {"warnings", c.warnings}};
}

void LayeredUnicastNetwork::validate() const {
  if (k.empty()) throw std::invalid_argument("layered network needs at least one layer");
  if (k.size() != r.size()) throw std::invalid_argument("k and r must have one entry per layer");
  if (q < 2) throw std::invalid_argument("field size q must be at least 2");
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] < 1) throw std::invalid_argument("every layer needs at least one edge");
    if (r[i] >= k[i])
      throw std::invalid_argument("layer " + std::to_string(i + 1) + ": need r_i < k_i, got r_i = " +
                                  std::to_string(r[i]) + ", k_i = " + std::to_string(k[i]));
  }
}

LayeredUnicastNetwork layered_from_json(const nlohmann::json& j) {
  LayeredUnicastNetwork net;
  try {
    net.k = j.at("k").get<std::vector<unsigned>>();
    net.r = j.at("r").get<std::vector<unsigned>>();
    net.q = j.at("q").get<std::uint32_t>();
    if (j.contains("c") && j.at("c").get<std::size_t>() != net.k.size())
      throw std::invalid_argument("c does not match the number of layers in k");
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("layered network JSON: ") + e.what());
  }
  net.validate();
  return net;
}

nlohmann::json to_json(const LayeredUnicastNetwork& net) {
  return {{"c", net.layers()}, {"k", net.k}, {"r", net.r}, {"q", net.q}};
}

UnicastCapacities unicast_capacities(const LayeredUnicastNetwork& net) {
  net.validate();
  const std::size_t c = net.layers();
  UnicastCapacities out;
  out.C1_symbols = Rational(net.k[0] - net.r[0]);
  for (std::size_t j = 0; j < c; ++j)
    out.C1_symbols = std::min(out.C1_symbols, Rational(net.k[j] - net.r[j]));
  for (std::size_t j = 0; j < c; ++j) {
    Rational term(net.k[j] - net.r[j]);
    for (std::size_t i = j + 1; i < c; ++i) term *= Rational(net.k[i] - net.r[i], net.k[i]);
    if (j == 0 || term < out.C2_symbols) out.C2_symbols = term;
  }
  const double scale = std::log2(static_cast<double>(net.q));
  out.C1_bits = boost::rational_cast<double>(out.C1_symbols) * scale;
  out.C2_bits = boost::rational_cast<double>(out.C2_symbols) * scale;
  return out;
}

nlohmann::json to_json(const UnicastCapacities& c) {
  auto frac = [](const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
  };
  return {{"schema_version", 1},
          {"C1", c.C1_bits},
          {"C2", c.C2_bits},
          {"C1_symbols", frac(c.C1_symbols)},
          {"C2_symbols", frac(c.C2_symbols)}};
}

namespace {

Matrix wiretap_generator(std::size_t k, std::size_t r, std::uint32_t q) {
  if (!is_prime(q)) throw std::invalid_argument("wiretap II code needs a prime field size");
  if (r >= k) throw std::invalid_argument("wiretap II code needs r < k");
  if (q < k) throw std::invalid_argument("no MDS generator over F_" + std::to_string(q) + " for k = " +
                                         std::to_string(k));
  if (r == 0) return Matrix(0, k, q);
  return build_mds_generator(k, r, q);
}

}  // namespace

WiretapIICode::WiretapIICode(std::size_t k, std::size_t r, std::uint32_t q)
    : k_(k), r_(r), q_(q), generator_(wiretap_generator(k, r, q)) {}

std::vector<std::uint32_t> WiretapIICode::encode(const std::vector<std::uint32_t>& message,
                                                 const std::vector<std::uint32_t>& scrambles) const {
  if (message.size() != message_length() || scrambles.size() != r_)
    throw std::invalid_argument("wiretap II encode: wrong message or scramble length");
  std::vector<std::uint64_t> x(k_, 0);
  for (std::size_t j = r_; j < k_; ++j) x[j] = message[j - r_] % q_;
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < k_; ++j) x[j] += std::uint64_t{scrambles[i] % q_} * generator_.at(i, j);
  std::vector<std::uint32_t> out(k_);
  for (std::size_t j = 0; j < k_; ++j) out[j] = static_cast<std::uint32_t>(x[j] % q_);
  return out;
}

std::vector<std::uint32_t> WiretapIICode::decode(const std::vector<std::uint32_t>& codeword) const {
  if (codeword.size() != k_) throw std::invalid_argument("wiretap II decode: wrong codeword length");
  // The generator is systematic, so the first r symbols are the scrambles.
  std::vector<std::uint32_t> m(message_length());
  for (std::size_t j = r_; j < k_; ++j) {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < r_; ++i) mask += std::uint64_t{codeword[i]} * generator_.at(i, j);
    m[j - r_] = static_cast<std::uint32_t>((codeword[j] + q_ - mask % q_) % q_);
  }
  return m;
}

WiretapIIReport wiretap2_verify(const WiretapIICode& code) {
  const std::size_t k = code.k(), r = code.r(), ml = code.message_length();
  const std::uint32_t q = code.q();
  std::vector<Variable> vars;
  NameSet message, all_symbols, codeword_names;
  for (std::size_t i = 0; i < ml; ++i) {
    vars.push_back({"M" + std::to_string(i), q});
    message.push_back(vars.back().name);
  }
  for (std::size_t j = 0; j < k; ++j) {
    vars.push_back({"X" + std::to_string(j), q});
    codeword_names.push_back(vars.back().name);
  }
  JointDistribution::Builder b(vars);
  WiretapIIReport report;
  report.decodable = true;
  const std::uint64_t cases = checked_pow(q, static_cast<unsigned>(k));
  std::vector<std::uint32_t> m(ml), s(r);
  Tuple row(ml + k);
  for (std::uint64_t idx = 0; idx < cases; ++idx) {
    std::uint64_t v = idx;
    for (std::size_t i = r; i-- > 0;) s[i] = static_cast<std::uint32_t>(v % q), v /= q;
    for (std::size_t i = ml; i-- > 0;) m[i] = static_cast<std::uint32_t>(v % q), v /= q;
    const auto x = code.encode(m, s);
    if (code.decode(x) != m) report.decodable = false;
    std::copy(m.begin(), m.end(), row.begin());
    std::copy(x.begin(), x.end(), row.begin() + static_cast<std::ptrdiff_t>(ml));
    b.add(row);
  }
  report.cases = cases;
  const auto dist = b.build();
  report.decodable = report.decodable && is_function_of(dist, message, codeword_names);
  report.zero_leakage = true;
  for_each_combination(k, r, [&](const std::vector<std::size_t>& subset) {
    TapLeakage t{subset, true, 0.0};
    if (!subset.empty()) {
      NameSet view;
      for (auto j : subset) view.push_back(codeword_names[j]);
      t.independent = is_independent(dist, message, view);
      t.leakage_bits = mutual_information(dist, message, view);
    }
    report.zero_leakage = report.zero_leakage && t.independent && t.leakage_bits == 0.0;
    report.taps.push_back(std::move(t));
  });
  return report;
}

nlohmann::json to_json(const WiretapIIReport& r) {
  nlohmann::json taps = nlohmann::json::array();
  for (const auto& t : r.taps)
    taps.push_back({{"symbols", t.symbols}, {"independent", t.independent}, {"leakage_bits", t.leakage_bits}});
  return {{"schema_version", 1},
          {"decodable", r.decodable},
          {"zero_leakage", r.zero_leakage},
          {"cases", r.cases},
          {"taps", taps}};
}

}  // namespace sncl
