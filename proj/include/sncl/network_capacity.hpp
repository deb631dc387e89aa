#pragma once

// Cut-based capacities of wiretap networks, layered unicast relay networks,
// and a wiretap channel II code built on an MDS generator.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sncl/algebra.hpp"
#include "sncl/info_theory.hpp"

namespace sncl {

enum class NodeRole { source, terminal, intermediate };
std::string to_string(NodeRole r);

struct NetworkNode {
  std::string id;
  NodeRole role = NodeRole::intermediate;
  bool message = false;
  bool random = false;
};

/// Directed acyclic multigraph with unit-capacity edges, one source and one
/// terminal. A pseudo source is an intermediate node with no in-edges that
/// carries no message.
class WiretapNetwork {
 public:
  void add_node(NetworkNode node);
  void add_edge(const std::string& from, const std::string& to);

  const std::vector<NetworkNode>& nodes() const { return nodes_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
  std::size_t node_index(const std::string& id) const;

  std::size_t source() const;
  std::size_t terminal() const;
  std::vector<std::size_t> pseudo_sources() const;

  /// Throws std::invalid_argument unless there is exactly one source and one
  /// terminal and the graph is acyclic.
  void validate() const;

  unsigned wiretap_budget = 0;

 private:
  std::vector<NetworkNode> nodes_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

/// Lines: "node <id> <source|terminal|intermediate> [message] [random]",
/// "edge <from> <to>", optional "wiretap <r>"; '#' starts a comment.
WiretapNetwork parse_network(std::string_view text);
std::string to_text(const WiretapNetwork& net);

/// source --e1,e2--> relay --e3,e4--> terminal.
WiretapNetwork onehop_network();

/// Max-flow into the terminal from the source together with every pseudo
/// source, so randomness injected mid-network counts toward the cut.
unsigned mincut1(const WiretapNetwork& net);
/// Max-flow from the source alone after deleting every pseudo source's out-edges.
unsigned mincut2(const WiretapNetwork& net);

struct RWiretapCapacities {
  unsigned mincut1 = 0, mincut2 = 0, r = 0;
  unsigned C2 = 0;
  unsigned C1_lower = 0, C1_upper = 0;
  bool collapsed = false;  // no pseudo source: C1 = C2 = mincut1 - r
  std::vector<std::string> warnings;
};

/// Capacities in symbols per use. Negative values are clamped to 0 and
/// reported in `warnings`.
RWiretapCapacities rwiretap_capacities(const WiretapNetwork& net, unsigned r);
nlohmann::json to_json(const RWiretapCapacities& c);

struct LayeredUnicastNetwork {
  std::vector<unsigned> k;
  std::vector<unsigned> r;
  std::uint32_t q = 2;

  std::size_t layers() const { return k.size(); }
  /// Requires k_i >= 1, 0 <= r_i < k_i, q >= 2, matching lengths.
  void validate() const;
};

/// Accepts {"c": n, "k": [...], "r": [...], "q": q}.
LayeredUnicastNetwork layered_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LayeredUnicastNetwork& net);

struct UnicastCapacities {
  Rational C1_symbols, C2_symbols;  // q-ary symbols per channel use
  double C1_bits = 0.0, C2_bits = 0.0;
};
UnicastCapacities unicast_capacities(const LayeredUnicastNetwork& net);
nlohmann::json to_json(const UnicastCapacities& c);

/// (k, r) wiretap channel II code over F_q: codeword x = s G + (0^r, m) with
/// G the r x k systematic MDS generator and s the r scrambles.
class WiretapIICode {
 public:
  /// Requires q prime, r < k, q >= k.
  WiretapIICode(std::size_t k, std::size_t r, std::uint32_t q);

  std::size_t k() const { return k_; }
  std::size_t r() const { return r_; }
  std::uint32_t q() const { return q_; }
  std::size_t message_length() const { return k_ - r_; }
  const Matrix& generator() const { return generator_; }

  std::vector<std::uint32_t> encode(const std::vector<std::uint32_t>& message,
                                    const std::vector<std::uint32_t>& scrambles) const;
  std::vector<std::uint32_t> decode(const std::vector<std::uint32_t>& codeword) const;

 private:
  std::size_t k_, r_;
  std::uint32_t q_;
  Matrix generator_;
};

struct TapLeakage {
  std::vector<std::size_t> symbols;
  bool independent = false;
  double leakage_bits = 0.0;
};

struct WiretapIIReport {
  bool decodable = false;     // decode(encode(m, s)) = m everywhere and X determines M
  bool zero_leakage = false;  // every r-subset independent of M
  std::uint64_t cases = 0;
  std::vector<TapLeakage> taps;
};

WiretapIIReport wiretap2_verify(const WiretapIICode& code);
nlohmann::json to_json(const WiretapIIReport& r);

}  // namespace sncl
