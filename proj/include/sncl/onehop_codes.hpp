#pragma once

// One-hop relay network: source --e1,e2--> relay --e3,e4--> destination.
// Codes are explicit lookup tables so that correctness checks, enumeration,
// relabeling searches and attack simulation all evaluate the same data.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace sncl {

using Symbol = std::uint8_t;

enum class Edge : std::uint8_t { e1 = 1, e2 = 2, e3 = 3, e4 = 4 };

constexpr int layer_of(Edge e) { return e == Edge::e1 || e == Edge::e2 ? 1 : 2; }
std::string to_string(Edge e);

/// Fixed four-edge topology of the one-hop network.
struct OneHopTopology {
  static constexpr std::array<Edge, 2> first_layer{Edge::e1, Edge::e2};
  static constexpr std::array<Edge, 2> second_layer{Edge::e3, Edge::e4};
};

/// Encoder/relay/decoder triple over Z_d.
///
/// Table layouts (all indices are base-d numbers, most significant first):
///  - encoder: input (M, L_1..L_s); output 2*shots symbols ordered
///    [e1 shot 1..shots, e2 shot 1..shots].
///  - relay: input (first-layer symbols in the encoder output order, then L'
///    when relay randomness is present); output (Y3, Y4).
///  - decoder: input (Y3, Y4); output M.
///
/// The second layer carries exactly one symbol per edge; in a two-shot code
/// the second layer of shot 2 is silent.
class OneHopCode {
 public:
  OneHopCode(std::string id, unsigned d, unsigned shots, unsigned scrambles,
             bool relay_randomness, std::vector<Symbol> encoder,
             std::vector<Symbol> relay, std::vector<Symbol> decoder);

  const std::string& id() const { return id_; }
  unsigned d() const { return d_; }
  unsigned shots() const { return shots_; }
  unsigned scramble_count() const { return scrambles_; }
  bool relay_randomness() const { return relay_randomness_; }

  std::size_t source_inputs() const { return source_inputs_; }
  unsigned relay_random_values() const { return relay_randomness_ ? d_ : 1; }
  std::size_t first_layer_width() const { return 2 * shots_; }

  /// First-layer symbols for source input index (M major, then scrambles).
  std::span<const Symbol> encode(std::size_t source_input) const;
  std::span<const Symbol> encode(Symbol message, std::span<const Symbol> scrambles) const;
  std::array<Symbol, 2> relay(std::span<const Symbol> first_layer, Symbol relay_random = 0) const;
  Symbol decode(Symbol y3, Symbol y4) const { return decoder_[y3 * d_ + y4]; }

  Symbol message_of(std::size_t source_input) const;

  /// log2(d) / shots bits per network use.
  double rate_bits() const;

  const std::vector<Symbol>& encoder_table() const { return encoder_; }
  const std::vector<Symbol>& relay_table() const { return relay_; }
  const std::vector<Symbol>& decoder_table() const { return decoder_; }

  OneHopCode with_decoder(std::vector<Symbol> decoder, std::string id) const;

  bool operator==(const OneHopCode& rhs) const;

 private:
  std::string id_;
  unsigned d_, shots_, scrambles_;
  bool relay_randomness_;
  std::size_t source_inputs_;
  std::vector<Symbol> encoder_, relay_, decoder_;
};

/// Builds the decoder from encoder + relay when (Y3, Y4) determines M for
/// every source input and relay randomness value; unreachable cells map to 0.
std::optional<std::vector<Symbol>> derive_decoder(unsigned d, unsigned shots, unsigned scrambles,
                                                  bool relay_randomness,
                                                  const std::vector<Symbol>& encoder,
                                                  const std::vector<Symbol>& relay);

/// Y1 = L, Y2 = M + L; relay Y3 = L', Y4 = Y2 - Y1 + L'; decoder Y4 - Y3.
/// With relay_randomness = false, L' is fixed to 0.
OneHopCode scalar_linear_code(unsigned d, bool relay_randomness = true);

/// Y1 = L, Y2 = M + L; relay Y3 = Y1 (Y2 - Y1), Y4 = (Y1 + 1)(Y2 - Y1);
/// decoder Y4 - Y3.
OneHopCode standard_nonlinear_code(unsigned d);

class AntiLatinSquare;

/// Relay Y3 = a[Y1][Y2], Y4 = b[Y1][Y2]; throws when the pair is not decodable.
OneHopCode anti_latin_code(const AntiLatinSquare& a, const AntiLatinSquare& b);

/// Two transmissions with scrambles L1, L2, L3:
/// shot 1 (L1, M + L1), shot 2 (L2, L3 + L2);
/// relay Y3 = Y2' - Y1', Y4 = Y2 - Y1 + Y2' - Y1'; decoder Y4 - Y3.
OneHopCode vector_linear_code(unsigned d);

bool check_correctness(const OneHopCode& code);

/// Every correct d = 2 code with one scramble and no relay randomness,
/// visited in (encoder, relay) index order. Encoder and relay tables are
/// indexed 0..255 with entry i held in bits [2i, 2i + 2).
void enumerate_onehop_codes(unsigned d, const std::function<void(const OneHopCode&)>& visit);

/// Correct one-scramble codes whose encoder and relay are linear (affine
/// when `affine` is set) over Z_d, without relay randomness.
void enumerate_scalar_linear_codes(unsigned d, bool affine,
                                   const std::function<void(const OneHopCode&)>& visit);

struct StandardEquivalence {
  bool equivalent = false;
  // f[0..3] relabel Y1..Y4, f[4] relabels M; each is a bijection of Z_2.
  std::array<std::array<Symbol, 2>, 5> relabeling{};
  // Joint law (as counts) of the relabeled (M, L) pair, weight[m][l].
  std::array<std::array<std::uint64_t, 2>, 2> message_scramble_law{};
};

/// Searches the 32 relabelings (bijections on Y1..Y4 and M) that map the code
/// onto the standard non-linear code over Z_2, with the relabeled Y1 playing
/// the scramble. Requires d = 2 and a single shot.
StandardEquivalence is_equivalent_to_standard(const OneHopCode& code);

/// Affine form out = coeff * in + offset over Z_d, one row per output.
struct AffineForm {
  std::vector<std::vector<std::uint32_t>> coeff;
  std::vector<std::uint32_t> offset;
};

/// Relay as an affine map of (first-layer symbols, L'); empty if not affine.
std::optional<AffineForm> relay_affine_form(const OneHopCode& code);
/// Encoder as an affine map of (M, scrambles); empty if not affine.
std::optional<AffineForm> encoder_affine_form(const OneHopCode& code);

nlohmann::json to_json(const OneHopCode& code);
OneHopCode code_from_json(const nlohmann::json& j);

}  // namespace sncl
