#pragma once

// Anti-Latin squares: d x d tables over Z_d in which every row and every
// column repeats some value.  Pairs of them drive the relay of the anti-Latin
// code (Y3 = a[Y1][Y2], Y4 = b[Y1][Y2]).

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sncl/onehop_codes.hpp"

namespace sncl {

/// Throws std::invalid_argument on a malformed table (wrong size, value >= d).
bool is_anti_latin(unsigned d, std::span<const Symbol> table);

class AntiLatinSquare {
 public:
  /// Row-major d*d entries; throws unless the table is anti-Latin.
  AntiLatinSquare(unsigned d, std::vector<Symbol> entries);
  AntiLatinSquare(std::initializer_list<std::initializer_list<int>> rows);

  unsigned d() const { return d_; }
  Symbol at(unsigned row, unsigned col) const { return entries_[row * d_ + col]; }
  const std::vector<Symbol>& entries() const { return entries_; }

  /// Applies a permutation of Z_d to every entry.
  AntiLatinSquare relabeled(std::span<const Symbol> permutation) const;

  bool operator==(const AntiLatinSquare&) const = default;
  auto operator<=>(const AntiLatinSquare& rhs) const {
    if (auto c = d_ <=> rhs.d_; c != 0) return c;
    return entries_ <=> rhs.entries_;
  }

 private:
  unsigned d_;
  std::vector<Symbol> entries_;
};

struct XiSet {
  Symbol z = 0;
  Symbol m = 0;
  std::vector<Symbol> members;  // sorted, distinct
};

/// { b[l][l+m] : a[l][l+m] = z, l in Z_d }.
XiSet xi_set(const AntiLatinSquare& a, const AntiLatinSquare& b, Symbol z, Symbol m);

/// Xi-sets with the same z are pairwise disjoint across m.
bool is_decodable_pair(const AntiLatinSquare& a, const AntiLatinSquare& b);

/// (Y1, Y2) -> (a[Y1][Y2], b[Y1][Y2]) is injective.
bool is_one_to_one_pair(const AntiLatinSquare& a, const AntiLatinSquare& b);

/// The two example pairs: 3x3 (first, second) and 4x4 (third, fourth).
std::pair<AntiLatinSquare, AntiLatinSquare> sample_pair_d3();
std::pair<AntiLatinSquare, AntiLatinSquare> sample_pair_d4();

/// Every d x d anti-Latin square in lexicographic order. Only d <= 3.
std::vector<AntiLatinSquare> anti_latin_catalog(unsigned d);

enum class SearchStatus { found, proven_absent, budget_exhausted };
std::string to_string(SearchStatus s);

struct PairSearch {
  SearchStatus status = SearchStatus::budget_exhausted;
  std::optional<std::pair<AntiLatinSquare, AntiLatinSquare>> pair;
  std::uint64_t steps = 0;
  std::string note;
};

inline constexpr std::uint64_t kDefaultSeed = 0x5eed5eedULL;

/// d <= 3: exhaustive over the catalog (first decodable pair in catalog
/// order). d >= 4: seeded restart hill-climb over single-cell mutations.
PairSearch find_decodable_pair(unsigned d, std::uint64_t seed = kDefaultSeed,
                               std::uint64_t budget = 2'000'000);

enum class PairMode { decodable, one_to_one };
enum class SearchMethod { exact, heuristic };
std::string to_string(PairMode m);

struct MutualSet {
  std::size_t size = 0;
  std::vector<AntiLatinSquare> certificate;  // sorted
  bool maximal = false;        // exact method finished
  bool lower_bound = false;    // heuristic result
  std::uint64_t catalog_size = 0;
  std::uint64_t class_count = 0;   // value-relabeling orbits (exact method)
  std::uint64_t compatible_pairs = 0;  // edges between catalog squares (exact method)
  std::uint64_t steps = 0;
};

/// Largest set of anti-Latin squares whose every pair satisfies the mode's
/// predicate. A single square counts as a set of size 1.
MutualSet max_mutual_set(unsigned d, PairMode mode, SearchMethod method,
                         std::uint64_t seed = kDefaultSeed, std::uint64_t budget = 200'000);

std::string to_text(const AntiLatinSquare& s);
AntiLatinSquare square_from_text(std::string_view text);
nlohmann::json to_json(const AntiLatinSquare& s);
AntiLatinSquare square_from_json(const nlohmann::json& j);

}  // namespace sncl
