#include "sncl/info_theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

#include "sncl/combinatorics.hpp"

namespace sncl {

namespace {

__extension__ using u128 = unsigned __int128;

std::vector<std::uint64_t> radix_for(const std::vector<Variable>& vars) {
  std::vector<std::uint64_t> radix(vars.size(), 1);
  u128 acc = 1;
  for (std::size_t i = vars.size(); i-- > 0;) {
    if (vars[i].alphabet == 0)
      throw std::invalid_argument("variable '" + vars[i].name + "' has empty alphabet");
    radix[i] = static_cast<std::uint64_t>(acc);
    acc *= vars[i].alphabet;
    if (acc > std::numeric_limits<std::uint64_t>::max())
      throw std::invalid_argument("joint alphabet too large to index");
  }
  return radix;
}

void check_distinct_names(const std::vector<Variable>& vars) {
  for (std::size_t i = 0; i < vars.size(); ++i)
    for (std::size_t j = i + 1; j < vars.size(); ++j)
      if (vars[i].name == vars[j].name)
        throw std::invalid_argument("duplicate variable '" + vars[i].name + "'");
}

// Maps full keys onto keys of a sub-tuple (selected variable indices).
class Projection {
 public:
  Projection(const JointDistribution& dist, std::vector<std::size_t> idx)
      : idx_(std::move(idx)) {
    const auto& vars = dist.variables();
    full_radix_.resize(vars.size());
    std::uint64_t r = 1;
    for (std::size_t i = vars.size(); i-- > 0;) {
      full_radix_[i] = r;
      r *= vars[i].alphabet;
    }
    alpha_.resize(idx_.size());
    sub_radix_.resize(idx_.size());
    std::uint64_t s = 1;
    for (std::size_t i = idx_.size(); i-- > 0;) {
      alpha_[i] = vars[idx_[i]].alphabet;
      sub_radix_[i] = s;
      s *= alpha_[i];
    }
  }

  std::uint64_t operator()(std::uint64_t key) const {
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < idx_.size(); ++i) {
      const std::uint64_t digit = (key / full_radix_[idx_[i]]) % alpha_[i];
      out += digit * sub_radix_[i];
    }
    return out;
  }

 private:
  std::vector<std::size_t> idx_;
  std::vector<std::uint64_t> full_radix_, alpha_, sub_radix_;
};

std::vector<std::size_t> merged(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  for (auto i : b)
    if (std::find(a.begin(), a.end(), i) == a.end()) a.push_back(i);
  return a;
}

std::unordered_map<std::uint64_t, std::uint64_t> marginal_weights(
    const JointDistribution& dist, const std::vector<std::size_t>& idx) {
  Projection proj(dist, idx);
  std::unordered_map<std::uint64_t, std::uint64_t> out;
  for (const auto& [key, w] : dist.entries()) out[proj(key)] += w;
  return out;
}

}  // namespace

JointDistribution::Builder::Builder(std::vector<Variable> variables)
    : vars_(std::move(variables)), radix_(radix_for(vars_)) {
  check_distinct_names(vars_);
}

JointDistribution::Builder& JointDistribution::Builder::add(const Tuple& tuple,
                                                            std::uint64_t weight) {
  if (tuple.size() != vars_.size())
    throw std::invalid_argument("tuple arity " + std::to_string(tuple.size()) +
                                " does not match " + std::to_string(vars_.size()) +
                                " declared variables");
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] >= vars_[i].alphabet)
      throw std::invalid_argument("value " + std::to_string(tuple[i]) +
                                  " outside alphabet of '" + vars_[i].name + "'");
    key += tuple[i] * radix_[i];
  }
  if (weight != 0) raw_.emplace_back(key, weight);
  return *this;
}

JointDistribution JointDistribution::Builder::build() const {
  JointDistribution dist;
  dist.vars_ = vars_;
  dist.radix_ = radix_;
  auto raw = raw_;
  std::sort(raw.begin(), raw.end());
  for (const auto& [key, w] : raw) {
    if (!dist.entries_.empty() && dist.entries_.back().first == key)
      dist.entries_.back().second += w;
    else
      dist.entries_.emplace_back(key, w);
    dist.total_ += w;
  }
  if (dist.total_ == 0) throw std::invalid_argument("distribution has zero total weight");
  return dist;
}

JointDistribution JointDistribution::from_probabilities(
    std::vector<Variable> variables, const std::vector<std::pair<Tuple, Rational>>& rows) {
  std::int64_t lcm = 1;
  for (const auto& [t, p] : rows) {
    if (p < 0) throw std::invalid_argument("negative probability");
    lcm = std::lcm(lcm, p.denominator());
  }
  Builder b(std::move(variables));
  std::int64_t sum = 0;
  for (const auto& [t, p] : rows) {
    const std::int64_t w = p.numerator() * (lcm / p.denominator());
    sum += w;
    b.add(t, static_cast<std::uint64_t>(w));
  }
  if (sum != lcm) throw std::invalid_argument("probabilities do not sum to 1");
  return b.build();
}

std::size_t JointDistribution::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return i;
  throw UnknownVariable("unknown variable '" + std::string(name) + "'");
}

std::vector<std::size_t> JointDistribution::indices_of(const NameSet& names) const {
  std::vector<std::size_t> idx;
  for (const auto& n : names) {
    const auto i = index_of(n);
    if (std::find(idx.begin(), idx.end(), i) == idx.end()) idx.push_back(i);
  }
  return idx;
}

std::uint64_t JointDistribution::encode(const Tuple& tuple) const {
  if (tuple.size() != vars_.size()) throw std::invalid_argument("tuple arity mismatch");
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] >= vars_[i].alphabet) throw std::invalid_argument("value outside alphabet");
    key += tuple[i] * radix_[i];
  }
  return key;
}

Tuple JointDistribution::decode(std::uint64_t key) const {
  Tuple t(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i)
    t[i] = static_cast<std::uint32_t>((key / radix_[i]) % vars_[i].alphabet);
  return t;
}

Rational JointDistribution::probability(const Tuple& tuple) const {
  const auto key = encode(tuple);
  auto it = std::lower_bound(entries_.begin(), entries_.end(),
                             std::make_pair(key, std::uint64_t{0}));
  if (it == entries_.end() || it->first != key) return Rational(0);
  return Rational(static_cast<std::int64_t>(it->second), static_cast<std::int64_t>(total_));
}

std::vector<std::pair<Tuple, std::uint64_t>> JointDistribution::rows() const {
  std::vector<std::pair<Tuple, std::uint64_t>> out;
  out.reserve(entries_.size());
  for (const auto& [key, w] : entries_) out.emplace_back(decode(key), w);
  return out;
}

bool JointDistribution::operator==(const JointDistribution& rhs) const {
  if (vars_ != rhs.vars_ || entries_.size() != rhs.entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].first != rhs.entries_[i].first) return false;
    if (u128(entries_[i].second) * rhs.total_ != u128(rhs.entries_[i].second) * total_)
      return false;
  }
  return true;
}

JointDistribution marginal(const JointDistribution& dist, const NameSet& vars) {
  const auto idx = dist.indices_of(vars);
  std::vector<Variable> sub;
  for (auto i : idx) sub.push_back(dist.variables()[i]);
  JointDistribution::Builder b(sub);
  Tuple part(idx.size());
  for (const auto& [key, w] : dist.entries()) {
    const Tuple full = dist.decode(key);
    for (std::size_t i = 0; i < idx.size(); ++i) part[i] = full[idx[i]];
    b.add(part, w);
  }
  return b.build();
}

double entropy(const JointDistribution& dist, const NameSet& vars) {
  if (vars.empty()) throw std::invalid_argument("entropy: empty variable set");
  const auto weights = marginal_weights(dist, dist.indices_of(vars));
  // Sum in key order so the result does not depend on hash iteration order.
  std::map<std::uint64_t, std::uint64_t> ordered(weights.begin(), weights.end());
  const long double total = static_cast<long double>(dist.total_weight());
  long double h = 0;
  for (const auto& [key, w] : ordered) {
    if (w == dist.total_weight()) continue;
    h += (w / total) * std::log2(total / w);
  }
  return static_cast<double>(h);
}

double conditional_entropy(const JointDistribution& dist, const NameSet& a,
                           const NameSet& given) {
  if (given.empty()) return entropy(dist, a);
  const auto idx_b = dist.indices_of(given);
  const auto idx_ab = merged(dist.indices_of(a), idx_b);
  const auto w_b = marginal_weights(dist, idx_b);
  const auto w_ab = marginal_weights(dist, idx_ab);
  std::map<std::uint64_t, std::uint64_t> ordered(w_ab.begin(), w_ab.end());
  Projection to_b(dist, idx_b);
  // Keys of the merged projection have to be mapped back to the given part;
  // rebuild them from any full key that lands on each merged key.
  Projection to_ab(dist, idx_ab);
  std::unordered_map<std::uint64_t, std::uint64_t> ab_to_b;
  for (const auto& [key, w] : dist.entries()) ab_to_b.emplace(to_ab(key), to_b(key));
  const long double total = static_cast<long double>(dist.total_weight());
  long double h = 0;
  for (const auto& [key, w] : ordered) {
    const std::uint64_t wb = w_b.at(ab_to_b.at(key));
    if (wb == w) continue;
    h += (w / total) * std::log2(static_cast<long double>(wb) / w);
  }
  return static_cast<double>(h);
}

double mutual_information(const JointDistribution& dist, const NameSet& a,
                          const NameSet& b) {
  const auto idx_a = dist.indices_of(a);
  const auto idx_b = dist.indices_of(b);
  for (auto i : idx_a)
    if (std::find(idx_b.begin(), idx_b.end(), i) != idx_b.end())
      throw std::invalid_argument("mutual_information: variable sets overlap");
  if (idx_a.empty() || idx_b.empty()) return 0.0;
  Projection pa(dist, idx_a), pb(dist, idx_b);
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> w_ab;
  std::unordered_map<std::uint64_t, std::uint64_t> w_a, w_b;
  for (const auto& [key, w] : dist.entries()) {
    const auto ka = pa(key), kb = pb(key);
    w_ab[{ka, kb}] += w;
    w_a[ka] += w;
    w_b[kb] += w;
  }
  const std::uint64_t total = dist.total_weight();
  long double info = 0;
  for (const auto& [k, w] : w_ab) {
    const u128 num = u128(w) * total;
    const u128 den = u128(w_a.at(k.first)) * w_b.at(k.second);
    if (num == den) continue;
    info += (static_cast<long double>(w) / total) *
            std::log2(static_cast<long double>(num) / static_cast<long double>(den));
  }
  return static_cast<double>(info);
}

bool is_independent(const JointDistribution& dist, const NameSet& a, const NameSet& b) {
  const auto idx_a = dist.indices_of(a);
  const auto idx_b = dist.indices_of(b);
  Projection pa(dist, idx_a), pb(dist, idx_b);
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> w_ab;
  std::map<std::uint64_t, std::uint64_t> w_a, w_b;
  for (const auto& [key, w] : dist.entries()) {
    const auto ka = pa(key), kb = pb(key);
    w_ab[{ka, kb}] += w;
    w_a[ka] += w;
    w_b[kb] += w;
  }
  // The product support must be fully covered, and every cell must factor.
  if (w_ab.size() != w_a.size() * w_b.size()) return false;
  const std::uint64_t total = dist.total_weight();
  for (const auto& [k, w] : w_ab)
    if (u128(w) * total != u128(w_a.at(k.first)) * w_b.at(k.second)) return false;
  return true;
}

bool is_function_of(const JointDistribution& dist, const NameSet& target,
                    const NameSet& given) {
  Projection pt(dist, dist.indices_of(target));
  Projection pg(dist, dist.indices_of(given));
  std::unordered_map<std::uint64_t, std::uint64_t> seen;
  for (const auto& [key, w] : dist.entries()) {
    const auto [it, inserted] = seen.emplace(pg(key), pt(key));
    if (!inserted && it->second != pt(key)) return false;
  }
  return true;
}

HanCheck check_han_collection(const JointDistribution& dist,
                              const std::vector<NameSet>& groups, const NameSet& x,
                              const std::vector<std::vector<std::size_t>>& collection,
                              std::uint64_t h) {
  const std::size_t k = groups.size();
  std::vector<std::uint64_t> cover(k, 0);
  for (const auto& member : collection) {
    std::vector<bool> in(k, false);
    for (auto e : member) {
      if (e >= k) throw std::invalid_argument("collection member outside [k]");
      if (in[e]) throw std::invalid_argument("collection member repeats an element");
      in[e] = true;
      ++cover[e];
    }
  }
  for (std::size_t e = 0; e < k; ++e)
    if (cover[e] != h)
      throw std::invalid_argument("element " + std::to_string(e) + " is covered " +
                                  std::to_string(cover[e]) + " times, expected " +
                                  std::to_string(h));

  auto names_of = [&](const std::vector<std::size_t>& member) {
    NameSet out;
    for (auto e : member) out.insert(out.end(), groups[e].begin(), groups[e].end());
    return out;
  };
  std::vector<std::size_t> everything(k);
  std::iota(everything.begin(), everything.end(), 0);

  HanCheck out;
  for (const auto& member : collection) {
    if (member.empty()) continue;
    auto sorted = member;
    std::sort(sorted.begin(), sorted.end());
    out.lhs += conditional_entropy(dist, names_of(sorted), x);
  }
  out.rhs = static_cast<double>(h) * conditional_entropy(dist, names_of(everything), x);
  out.slack = out.lhs - out.rhs;
  out.holds = out.slack >= -1e-9;
  return out;
}

HanCheck check_han_subsets(const JointDistribution& dist,
                           const std::vector<NameSet>& groups, const NameSet& x,
                           std::size_t r) {
  const std::size_t k = groups.size();
  if (r < 1 || r > k) throw std::invalid_argument("check_han_subsets: need 1 <= r <= k");
  std::vector<std::vector<std::size_t>> subsets;
  for_each_combination(k, r, [&](const std::vector<std::size_t>& s) { subsets.push_back(s); });
  return check_han_collection(dist, groups, x, subsets, binomial(k - 1, r - 1));
}

HanInstance random_han_instance(std::mt19937_64& rng, std::size_t k) {
  if (k < 1 || k > 6) throw std::invalid_argument("random_han_instance: need 1 <= k <= 6");
  std::uniform_int_distribution<std::uint32_t> x_alpha(1, 2), y_alpha(2, 3), weight(0, 9);
  std::vector<Variable> vars{{"X", x_alpha(rng)}};
  std::vector<NameSet> groups;
  for (std::size_t i = 1; i <= k; ++i) {
    vars.push_back({"Y" + std::to_string(i), y_alpha(rng)});
    groups.push_back({vars.back().name});
  }
  JointDistribution::Builder b(vars);
  Tuple t(vars.size(), 0);
  bool any = false;
  while (true) {
    const auto w = weight(rng);
    if (w > 0) {
      b.add(t, w);
      any = true;
    }
    std::size_t i = t.size();
    while (i > 0 && t[i - 1] + 1 == vars[i - 1].alphabet) t[--i] = 0;
    if (i == 0) break;
    ++t[i - 1];
  }
  if (!any) b.add(Tuple(vars.size(), 0), 1);
  return {b.build(), groups, {"X"}};
}

nlohmann::json to_json(const JointDistribution& dist) {
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& v : dist.variables())
    vars.push_back({{"name", v.name}, {"alphabet", v.alphabet}});
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [t, w] : dist.rows()) {
    const Rational p(static_cast<std::int64_t>(w), static_cast<std::int64_t>(dist.total_weight()));
    rows.push_back({{"tuple", t}, {"numerator", p.numerator()}, {"denominator", p.denominator()}});
  }
  return {{"schema_version", 1}, {"variables", vars}, {"rows", rows}};
}

JointDistribution distribution_from_json(const nlohmann::json& j) {
  std::vector<Variable> vars;
  for (const auto& v : j.at("variables"))
    vars.push_back({v.at("name").get<std::string>(), v.at("alphabet").get<std::uint32_t>()});
  std::vector<std::pair<Tuple, Rational>> rows;
  for (const auto& r : j.at("rows")) {
    const auto den = r.at("denominator").get<std::int64_t>();
    if (den <= 0) throw std::invalid_argument("non-positive denominator");
    rows.emplace_back(r.at("tuple").get<Tuple>(),
                      Rational(r.at("numerator").get<std::int64_t>(), den));
  }
  return JointDistribution::from_probabilities(std::move(vars), rows);
}

}  // namespace sncl
