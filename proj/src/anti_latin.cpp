#include "sncl/anti_latin.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sncl/combinatorics.hpp"

namespace sncl {

bool is_anti_latin(unsigned d, std::span<const Symbol> table) {
  if (d == 0 || table.size() != static_cast<std::size_t>(d) * d)
    throw std::invalid_argument("anti-Latin check: table is not d x d");
  for (auto v : table)
    if (v >= d) throw std::invalid_argument("anti-Latin check: entry outside Z_d");
  std::vector<bool> seen(d);
  auto repeats = [&](auto cell) {
    std::fill(seen.begin(), seen.end(), false);
    for (unsigned i = 0; i < d; ++i) {
      const Symbol v = cell(i);
      if (seen[v]) return true;
      seen[v] = true;
    }
    return false;
  };
  for (unsigned r = 0; r < d; ++r)
    if (!repeats([&](unsigned c) { return table[r * d + c]; })) return false;
  for (unsigned c = 0; c < d; ++c)
    if (!repeats([&](unsigned r) { return table[r * d + c]; })) return false;
  return true;
}

AntiLatinSquare::AntiLatinSquare(unsigned d, std::vector<Symbol> entries)
    : d_(d), entries_(std::move(entries)) {
  if (!is_anti_latin(d_, entries_)) throw std::invalid_argument("table is not anti-Latin");
}

namespace {

std::vector<Symbol> flatten(std::initializer_list<std::initializer_list<int>> rows) {
  std::vector<Symbol> out;
  for (const auto& r : rows) {
    if (r.size() != rows.size()) throw std::invalid_argument("square rows must have d entries");
    for (int v : r) {
      if (v < 0 || v >= static_cast<int>(rows.size()))
        throw std::invalid_argument("anti-Latin check: entry outside Z_d");
      out.push_back(static_cast<Symbol>(v));
    }
  }
  return out;
}

}  // namespace

AntiLatinSquare::AntiLatinSquare(std::initializer_list<std::initializer_list<int>> rows)
    : AntiLatinSquare(static_cast<unsigned>(rows.size()), flatten(rows)) {}

AntiLatinSquare AntiLatinSquare::relabeled(std::span<const Symbol> permutation) const {
  if (permutation.size() != d_) throw std::invalid_argument("relabeling must be a permutation of Z_d");
  std::vector<bool> hit(d_);
  for (auto v : permutation) {
    if (v >= d_ || hit[v]) throw std::invalid_argument("relabeling must be a permutation of Z_d");
    hit[v] = true;
  }
  std::vector<Symbol> e(entries_.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = permutation[entries_[i]];
  return AntiLatinSquare(d_, std::move(e));
}

XiSet xi_set(const AntiLatinSquare& a, const AntiLatinSquare& b, Symbol z, Symbol m) {
  const unsigned d = a.d();
  if (b.d() != d) throw std::invalid_argument("squares differ in size");
  if (z >= d || m >= d) throw std::invalid_argument("xi set index outside Z_d");
  XiSet out{z, m, {}};
  for (unsigned l = 0; l < d; ++l) {
    const unsigned col = (l + m) % d;
    if (a.at(l, col) == z) out.members.push_back(b.at(l, col));
  }
  std::sort(out.members.begin(), out.members.end());
  out.members.erase(std::unique(out.members.begin(), out.members.end()), out.members.end());
  return out;
}

bool is_decodable_pair(const AntiLatinSquare& a, const AntiLatinSquare& b) {
  const unsigned d = a.d();
  if (b.d() != d) throw std::invalid_argument("squares differ in size");
  // Cell (l, l + m) carries message m; each (a, b) output must name one m.
  std::vector<int> owner(d * d, -1);
  for (unsigned l = 0; l < d; ++l)
    for (unsigned m = 0; m < d; ++m) {
      const unsigned col = (l + m) % d;
      int& o = owner[a.at(l, col) * d + b.at(l, col)];
      if (o >= 0 && o != static_cast<int>(m)) return false;
      o = static_cast<int>(m);
    }
  return true;
}

bool is_one_to_one_pair(const AntiLatinSquare& a, const AntiLatinSquare& b) {
  const unsigned d = a.d();
  if (b.d() != d) throw std::invalid_argument("squares differ in size");
  std::vector<bool> used(d * d);
  for (unsigned r = 0; r < d; ++r)
    for (unsigned c = 0; c < d; ++c) {
      const unsigned key = a.at(r, c) * d + b.at(r, c);
      if (used[key]) return false;
      used[key] = true;
    }
  return true;
}

std::pair<AntiLatinSquare, AntiLatinSquare> sample_pair_d3() {
  return {AntiLatinSquare{{0, 1, 0}, {1, 1, 2}, {0, 2, 2}},
          AntiLatinSquare{{0, 2, 2}, {0, 1, 0}, {1, 1, 2}}};
}

std::pair<AntiLatinSquare, AntiLatinSquare> sample_pair_d4() {
  return {AntiLatinSquare{{0, 1, 3, 3}, {0, 1, 2, 0}, {1, 1, 2, 3}, {0, 2, 2, 3}},
          AntiLatinSquare{{0, 0, 1, 0}, {1, 1, 1, 2}, {3, 2, 2, 2}, {3, 0, 3, 3}}};
}

std::vector<AntiLatinSquare> anti_latin_catalog(unsigned d) {
  if (d > 3) throw std::invalid_argument("anti-Latin catalog is only enumerated for d <= 3");
  std::vector<AntiLatinSquare> out;
  if (d == 0) return out;
  const std::size_t cells = static_cast<std::size_t>(d) * d;
  std::vector<Symbol> t(cells, 0);
  while (true) {
    if (is_anti_latin(d, t)) out.emplace_back(d, t);
    std::size_t i = cells;
    while (i > 0 && t[i - 1] == d - 1) t[--i] = 0;
    if (i == 0) break;
    ++t[i - 1];
  }
  return out;
}

std::string to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::proven_absent: return "proven-absent";
    case SearchStatus::budget_exhausted: return "budget-exhausted";
  }
  return "?";
}

std::string to_string(PairMode m) { return m == PairMode::decodable ? "decodable" : "one-to-one"; }

namespace {

// Lines without a repeated value plus, for every (a, b) output, the number of
// extra messages mapped to it. Zero exactly on decodable anti-Latin pairs.
unsigned pair_cost(unsigned d, const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
  unsigned cost = 0;
  std::vector<unsigned> seen(d);
  unsigned stamp = 0;
  auto line_ok = [&](const std::vector<Symbol>& t, unsigned start, unsigned stride) {
    ++stamp;
    for (unsigned i = 0; i < d; ++i) {
      const Symbol v = t[start + i * stride];
      if (seen[v] == stamp) return true;
      seen[v] = stamp;
    }
    return false;
  };
  for (const auto* t : {&a, &b})
    for (unsigned i = 0; i < d; ++i) {
      if (!line_ok(*t, i * d, 1)) ++cost;
      if (!line_ok(*t, i, d)) ++cost;
    }
  std::vector<std::uint32_t> messages(d * d, 0);
  for (unsigned r = 0; r < d; ++r)
    for (unsigned c = 0; c < d; ++c) {
      const unsigned m = (c + d - r) % d;
      messages[a[r * d + c] * d + b[r * d + c]] |= 1u << m;
    }
  for (auto mask : messages)
    if (mask) cost += static_cast<unsigned>(__builtin_popcount(mask)) - 1;
  return cost;
}

}  // namespace

PairSearch find_decodable_pair(unsigned d, std::uint64_t seed, std::uint64_t budget) {
  PairSearch out;
  if (d == 0) throw std::invalid_argument("d must be positive");
  if (d <= 3) {
    const auto catalog = anti_latin_catalog(d);
    for (const auto& a : catalog)
      for (const auto& b : catalog) {
        ++out.steps;
        if (is_decodable_pair(a, b)) {
          out.status = SearchStatus::found;
          out.pair.emplace(a, b);
          out.note = "first decodable pair in catalog order";
          return out;
        }
      }
    out.status = SearchStatus::proven_absent;
    out.note = "enumerated all " + std::to_string(checked_pow(d, d * d)) + " tables over Z_" +
               std::to_string(d) + ": " + std::to_string(catalog.size()) +
               " anti-Latin, none of the " + std::to_string(catalog.size() * catalog.size()) +
               " ordered pairs is decodable";
    return out;
  }
  if (d > 32) throw std::invalid_argument("pair search supports d <= 32");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned> value(0, d - 1), cell(0, d * d - 1), which(0, 1);
  const std::size_t cells = static_cast<std::size_t>(d) * d;
  const std::uint64_t restart_after = 20 * cells * d;
  std::vector<Symbol> a(cells), b(cells);
  std::uint64_t restarts = 0;
  while (out.steps < budget) {
    for (auto& v : a) v = static_cast<Symbol>(value(rng));
    for (auto& v : b) v = static_cast<Symbol>(value(rng));
    unsigned cost = pair_cost(d, a, b);
    std::uint64_t stale = 0;
    while (cost > 0 && out.steps < budget && stale < restart_after) {
      ++out.steps;
      auto& t = which(rng) ? b : a;
      const auto i = cell(rng);
      const Symbol old = t[i];
      t[i] = static_cast<Symbol>(value(rng));
      const unsigned next = pair_cost(d, a, b);
      if (next < cost) {
        cost = next;
        stale = 0;
      } else if (next == cost) {
        ++stale;
      } else {
        t[i] = old;
        ++stale;
      }
    }
    if (cost == 0) {
      out.status = SearchStatus::found;
      out.pair.emplace(AntiLatinSquare(d, a), AntiLatinSquare(d, b));
      out.note = "hill-climb, " + std::to_string(restarts) + " restarts";
      return out;
    }
    ++restarts;
  }
  out.status = SearchStatus::budget_exhausted;
  out.note = "no pair within " + std::to_string(budget) + " mutations";
  return out;
}

namespace {

bool compatible(const AntiLatinSquare& a, const AntiLatinSquare& b, PairMode mode) {
  return mode == PairMode::decodable ? is_decodable_pair(a, b) : is_one_to_one_pair(a, b);
}

// Relabel values by order of first appearance; this is the lexicographically
// least member of the square's relabeling orbit.
std::vector<Symbol> normal_form(unsigned d, const std::vector<Symbol>& t) {
  std::vector<int> map(d, -1);
  int next = 0;
  std::vector<Symbol> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (map[t[i]] < 0) map[t[i]] = next++;
    out[i] = static_cast<Symbol>(map[t[i]]);
  }
  return out;
}

std::uint64_t orbit_size(unsigned d, const std::vector<Symbol>& t) {
  std::set<Symbol> used(t.begin(), t.end());
  std::uint64_t n = 1;
  for (unsigned i = 0; i < used.size(); ++i) n *= d - i;
  return n;
}

// Branch-and-bound maximum clique with greedy coloring bounds.
class CliqueSearch {
 public:
  CliqueSearch(std::vector<std::vector<bool>> adj, std::uint64_t budget)
      : adj_(std::move(adj)), budget_(budget) {}

  void run() {
    std::vector<std::size_t> all(adj_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    // Higher degree first tends to find large cliques early.
    std::vector<std::size_t> degree(adj_.size());
    for (std::size_t i = 0; i < adj_.size(); ++i)
      degree[i] = static_cast<std::size_t>(std::count(adj_[i].begin(), adj_[i].end(), true));
    std::stable_sort(all.begin(), all.end(), [&](auto x, auto y) { return degree[x] > degree[y]; });
    std::vector<std::size_t> current;
    expand(current, all);
  }

  const std::vector<std::size_t>& best() const { return best_; }
  std::uint64_t steps() const { return steps_; }
  bool complete() const { return !aborted_; }

 private:
  void color(const std::vector<std::size_t>& cand, std::vector<std::size_t>& order,
             std::vector<std::size_t>& bound) const {
    std::vector<std::vector<std::size_t>> classes;
    for (auto v : cand) {
      std::size_t k = 0;
      for (; k < classes.size(); ++k)
        if (std::none_of(classes[k].begin(), classes[k].end(), [&](auto u) { return adj_[u][v]; }))
          break;
      if (k == classes.size()) classes.emplace_back();
      classes[k].push_back(v);
    }
    order.clear();
    bound.clear();
    for (std::size_t k = 0; k < classes.size(); ++k)
      for (auto v : classes[k]) {
        order.push_back(v);
        bound.push_back(k + 1);
      }
  }

  void expand(std::vector<std::size_t>& current, const std::vector<std::size_t>& cand) {
    if (aborted_) return;
    if (++steps_ > budget_) {
      aborted_ = true;
      return;
    }
    std::vector<std::size_t> order, bound;
    color(cand, order, bound);
    for (std::size_t i = order.size(); i-- > 0;) {
      if (current.size() + bound[i] <= best_.size()) return;
      const auto v = order[i];
      current.push_back(v);
      std::vector<std::size_t> next;
      for (std::size_t j = 0; j < i; ++j)
        if (adj_[v][order[j]]) next.push_back(order[j]);
      if (next.empty()) {
        if (current.size() > best_.size()) best_ = current;
      } else {
        expand(current, next);
      }
      current.pop_back();
      if (aborted_) return;
    }
  }

  std::vector<std::vector<bool>> adj_;
  std::uint64_t budget_;
  std::uint64_t steps_ = 0;
  bool aborted_ = false;
  std::vector<std::size_t> best_;
};

MutualSet exact_mutual_set(unsigned d, PairMode mode, std::uint64_t budget) {
  MutualSet out;
  const auto catalog = anti_latin_catalog(d);
  out.catalog_size = catalog.size();
  std::vector<const AntiLatinSquare*> reps;
  std::vector<std::uint64_t> weight;
  for (const auto& s : catalog)
    if (normal_form(d, s.entries()) == s.entries()) {
      reps.push_back(&s);
      weight.push_back(orbit_size(d, s.entries()));
    }
  out.class_count = reps.size();
  std::vector<std::vector<bool>> adj(reps.size(), std::vector<bool>(reps.size(), false));
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = i + 1; j < reps.size(); ++j)
      if (compatible(*reps[i], *reps[j], mode)) {
        adj[i][j] = adj[j][i] = true;
        out.compatible_pairs += weight[i] * weight[j];
      }
  if (reps.empty()) {
    out.maximal = true;
    return out;
  }
  CliqueSearch search(std::move(adj), budget);
  search.run();
  out.steps = search.steps();
  out.maximal = search.complete();
  out.lower_bound = !out.maximal;
  for (auto i : search.best()) out.certificate.push_back(*reps[i]);
  std::sort(out.certificate.begin(), out.certificate.end());
  out.size = out.certificate.size();
  return out;
}

MutualSet greedy_mutual_set(unsigned d, PairMode mode, std::uint64_t seed, std::uint64_t budget) {
  MutualSet out;
  out.lower_bound = true;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned> value(0, d - 1);
  const std::size_t cells = static_cast<std::size_t>(d) * d;
  const std::uint64_t round = std::max<std::uint64_t>(budget / 16, 1);
  std::vector<AntiLatinSquare> current;
  std::vector<Symbol> t(cells);
  while (out.steps < budget) {
    ++out.steps;
    for (auto& v : t) v = static_cast<Symbol>(value(rng));
    if (is_anti_latin(d, t)) {
      AntiLatinSquare s(d, t);
      if (std::all_of(current.begin(), current.end(),
                      [&](const AntiLatinSquare& o) { return compatible(o, s, mode); }))
        current.push_back(std::move(s));
    }
    if (current.size() > out.certificate.size()) out.certificate = current;
    if (out.steps % round == 0) current.clear();
  }
  std::sort(out.certificate.begin(), out.certificate.end());
  out.size = out.certificate.size();
  return out;
}

}  // namespace

MutualSet max_mutual_set(unsigned d, PairMode mode, SearchMethod method, std::uint64_t seed,
                         std::uint64_t budget) {
  if (d == 0) throw std::invalid_argument("d must be positive");
  if (method == SearchMethod::exact) {
    if (d > 3) throw std::invalid_argument("exact mutual-set search is limited to d <= 3");
    return exact_mutual_set(d, mode, budget);
  }
  if (d > 16) throw std::invalid_argument("heuristic mutual-set search supports d <= 16");
  return greedy_mutual_set(d, mode, seed, budget);
}

std::string to_text(const AntiLatinSquare& s) {
  std::ostringstream os;
  for (unsigned r = 0; r < s.d(); ++r) {
    for (unsigned c = 0; c < s.d(); ++c) os << (c ? " " : "") << static_cast<unsigned>(s.at(r, c));
    os << '\n';
  }
  return os.str();
}

AntiLatinSquare square_from_text(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::vector<Symbol> values;
  long v;
  while (is >> v) {
    if (v < 0 || v > 255) throw std::invalid_argument("square entry out of range");
    values.push_back(static_cast<Symbol>(v));
  }
  if (!is.eof()) throw std::invalid_argument("square text contains a non-integer token");
  unsigned d = 0;
  while (static_cast<std::size_t>(d + 1) * (d + 1) <= values.size()) ++d;
  if (static_cast<std::size_t>(d) * d != values.size() || d == 0)
    throw std::invalid_argument("square text must hold d*d integers");
  return AntiLatinSquare(d, std::move(values));
}

nlohmann::json to_json(const AntiLatinSquare& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (unsigned r = 0; r < s.d(); ++r) {
    std::vector<unsigned> row;
    for (unsigned c = 0; c < s.d(); ++c) row.push_back(s.at(r, c));
    rows.push_back(row);
  }
  return {{"d", s.d()}, {"rows", rows}};
}

AntiLatinSquare square_from_json(const nlohmann::json& j) {
  const auto& rows = j.contains("rows") ? j.at("rows") : j;
  if (!rows.is_array()) throw std::invalid_argument("square JSON must be an array of rows");
  const unsigned d = static_cast<unsigned>(rows.size());
  std::vector<Symbol> values;
  for (const auto& r : rows) {
    if (!r.is_array() || r.size() != d) throw std::invalid_argument("square JSON rows must have d entries");
    for (const auto& v : r) {
      const auto x = v.get<long>();
      if (x < 0 || x >= static_cast<long>(d)) throw std::invalid_argument("anti-Latin check: entry outside Z_d");
      values.push_back(static_cast<Symbol>(x));
    }
  }
  if (j.contains("d") && j.at("d").get<unsigned>() != d)
    throw std::invalid_argument("square JSON d does not match its rows");
  return AntiLatinSquare(d, std::move(values));
}

}  // namespace sncl
