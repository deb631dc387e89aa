#include "sncl/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "sncl/algebra.hpp"
#include "sncl/anti_latin.hpp"
#include "sncl/attack_engine.hpp"
#include "sncl/combinatorics.hpp"
#include "sncl/info_theory.hpp"
#include "sncl/network_capacity.hpp"
#include "sncl/onehop_codes.hpp"

namespace sncl {

namespace {

using nlohmann::json;

struct Config {
  std::string format = "text";
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t budget = 0;
  bool selftest = false;

  // classify
  std::string family;
  std::string code_file;
  std::string d_list;
  std::string klass = "all";
  bool table = false;
  bool expect_table1 = false;
  bool exhaustive = false;
  bool per_shot = false;

  // antilatin
  std::string square, square_a, square_b;
  unsigned d = 0;
  unsigned z = 0, m = 0;
  std::string mode = "decodable";
  std::string method = "exact";

  // capacity / mincut
  std::string layered;
  std::string net;
  int r = -1;

  // mds / wiretap2
  unsigned k = 0;
  unsigned q = 0;
  std::string matrix;

  // han
  unsigned samples = 1000;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "@path" reads a file; anything else is taken literally.
std::string literal_or_file(const std::string& arg) {
  return !arg.empty() && arg[0] == '@' ? read_file(arg.substr(1)) : arg;
}

std::vector<unsigned> parse_d_list(const std::string& s) {
  std::vector<unsigned> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size() || v < 2 || v > 16) throw std::invalid_argument("");
      out.push_back(static_cast<unsigned>(v));
    } catch (const std::logic_error&) {
      throw UsageError("--d expects alphabet sizes between 2 and 16, got '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("--d is required");
  return out;
}

// Rows separated by ';' or newlines, entries by ',' or spaces; or JSON.
std::pair<unsigned, std::vector<Symbol>> parse_table(const std::string& arg) {
  std::string text = literal_or_file(arg);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
    const auto j = json::parse(text);
    const auto& rows = j.is_object() ? j.at("rows") : j;
    std::vector<Symbol> values;
    for (const auto& row : rows)
      for (const auto& v : row) {
        const auto x = v.get<long>();
        if (x < 0 || x > 255) throw UsageError("square entry out of range");
        values.push_back(static_cast<Symbol>(x));
      }
    const auto d = static_cast<unsigned>(rows.size());
    if (static_cast<std::size_t>(d) * d != values.size()) throw UsageError("square must be d x d");
    return {d, values};
  }
  std::replace(text.begin(), text.end(), ';', '\n');
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  std::vector<Symbol> values;
  for (long v; in >> v;) {
    if (v < 0 || v > 255) throw UsageError("square entry out of range");
    values.push_back(static_cast<Symbol>(v));
  }
  if (!in.eof()) throw UsageError("square contains a non-integer token");
  unsigned d = 0;
  while (static_cast<std::size_t>(d + 1) * (d + 1) <= values.size()) ++d;
  if (d == 0 || static_cast<std::size_t>(d) * d != values.size())
    throw UsageError("square must hold d*d entries");
  return {d, values};
}

AntiLatinSquare parse_square(const std::string& arg, const char* option) {
  if (arg.empty()) throw UsageError(std::string(option) + " is required");
  auto [d, values] = parse_table(arg);
  for (auto v : values)
    if (v >= d) throw UsageError(std::string(option) + ": entry outside Z_d");
  if (!is_anti_latin(d, values)) throw UsageError(std::string(option) + " is not an anti-Latin square");
  return AntiLatinSquare(d, values);
}

void emit(std::ostream& out, const Config& cfg, const json& j, const std::string& text) {
  if (cfg.format == "json")
    out << j.dump(2) << '\n';
  else
    out << text;
}

// ---------------------------------------------------------------------------
// Selftests: each check prints one line; any failure makes the run fail.

class Selftest {
 public:
  Selftest(std::ostream& out, std::string name) : out_(out), name_(std::move(name)) {}
  void check(const std::string& what, const std::function<bool()>& fn) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      out_ << "  exception: " << e.what() << '\n';
    }
    out_ << (ok ? "ok   " : "FAIL ") << name_ << ": " << what << '\n';
    failures_ += !ok;
  }
  int finish() const { return failures_ ? kExitExpectation : kExitOk; }

 private:
  std::ostream& out_;
  std::string name_;
  int failures_ = 0;
};

// ---------------------------------------------------------------------------

OneHopCode code_for_family(const std::string& family, unsigned d, std::uint64_t seed) {
  if (family == "scalar-linear") return scalar_linear_code(d, false);
  if (family == "scalar-linear-random") return scalar_linear_code(d, true);
  if (family == "standard") return standard_nonlinear_code(d);
  if (family == "vector-linear") return vector_linear_code(d);
  if (family == "anti-latin") {
    if (d == 3) {
      auto [a, b] = sample_pair_d3();
      return anti_latin_code(a, b);
    }
    if (d == 4) {
      auto [a, b] = sample_pair_d4();
      return anti_latin_code(a, b);
    }
    const auto search = find_decodable_pair(d, seed);
    if (!search.pair) {
      if (search.status == SearchStatus::budget_exhausted) throw BudgetExceeded(search.note);
      throw UsageError("no anti-Latin code exists over Z_" + std::to_string(d) + ": " + search.note);
    }
    return anti_latin_code(search.pair->first, search.pair->second);
  }
  throw UsageError("unknown family '" + family + "'");
}

std::string describe(const AttackStrategy& s, unsigned d, unsigned shots) {
  std::ostringstream os;
  os << "tap " << to_string(s.first_edge);
  if (is_active(s.klass)) {
    os << ", forward f(z) = [";
    for (std::size_t i = 0; i < s.modification.size(); ++i)
      os << (i ? " " : "") << static_cast<unsigned>(s.modification[i]);
    os << "]";
  }
  if (!is_adaptive(s.klass)) {
    os << ", then " << to_string(s.selector.at(0));
    return os.str();
  }
  os << ", then";
  for (std::size_t o = 0; o < s.selector.size(); ++o) {
    os << (o ? "," : "") << ' ' << to_string(s.selector[o]) << " if Z1=";
    if (shots == 1) {
      os << o;
    } else {
      std::vector<std::size_t> digits(shots);
      std::size_t v = o;
      for (unsigned i = shots; i-- > 0;) digits[i] = v % d, v /= d;
      os << '(';
      for (unsigned i = 0; i < shots; ++i) os << (i ? "," : "") << digits[i];
      os << ')';
    }
  }
  return os.str();
}

int classify_selftest(std::ostream& out) {
  Selftest t(out, "classify");
  t.check("strategy counts 4, 2*2^d, 4*d^d, 2*d^d*2^d at d = 2", [] {
    return attack_count(2, 1, AttackClass::deterministic_passive) == 4 &&
           attack_count(2, 1, AttackClass::adaptive_passive) == 8 &&
           attack_count(2, 1, AttackClass::deterministic_active) == 16 &&
           attack_count(2, 1, AttackClass::adaptive_active) == 32;
  });
  t.check("scalar-linear code over Z_2 is insecure to passive taps", [] {
    return classify(scalar_linear_code(2, false), AttackClass::deterministic_passive).level ==
           SecurityLevel::insecure;
  });
  t.check("vector-linear code over Z_2 is perfectly secret to adaptive-active taps", [] {
    return classify(vector_linear_code(2), AttackClass::adaptive_active).level ==
           SecurityLevel::perfectly_secret;
  });
  t.check("attack class aliases", [] {
    return attack_class_from_string("passive") == AttackClass::deterministic_passive &&
           attack_class_from_string("active") == AttackClass::deterministic_active &&
           attack_class_from_string("adaptive") == AttackClass::adaptive_passive;
  });
  return t.finish();
}

int cmd_classify(const Config& cfg, std::ostream& out) {
  if (cfg.selftest) return classify_selftest(out);
  if (cfg.format == "csv" && !(cfg.table || cfg.expect_table1))
    throw UsageError("--format csv is only available with --table");
  if (cfg.table || cfg.expect_table1) {
    const auto d_list = parse_d_list(cfg.d_list.empty() ? "2,3,4" : cfg.d_list);
    const auto table = classification_table(d_list, cfg.seed);
    if (cfg.format == "csv")
      out << table.to_csv();
    else
      emit(out, cfg, table.to_json(), table.to_text());
    if (cfg.expect_table1 && !table.matches_expected()) {
      if (cfg.format == "text") out << "classification differs from the expected grid\n";
      return kExitExpectation;
    }
    return kExitOk;
  }

  std::optional<OneHopCode> code;
  if (!cfg.code_file.empty()) {
    if (!cfg.family.empty()) throw UsageError("--code and --family are mutually exclusive");
    code = code_from_json(json::parse(literal_or_file(cfg.code_file)));
  } else {
    if (cfg.family.empty()) throw UsageError("classify needs --family, --code or --table");
    const auto d = parse_d_list(cfg.d_list);
    if (d.size() != 1) throw UsageError("--d takes a single value unless --table is given");
    code = code_for_family(cfg.family, d[0], cfg.seed);
  }

  std::vector<AttackClass> classes;
  if (cfg.klass == "all")
    classes = {AttackClass::deterministic_passive, AttackClass::adaptive_passive,
               AttackClass::deterministic_active, AttackClass::adaptive_active};
  else
    classes = {attack_class_from_string(cfg.klass)};

  json verdicts = json::array();
  std::ostringstream text;
  text << "code " << code->id() << " (d = " << code->d() << ", shots = " << code->shots() << ")\n";
  for (auto k : classes) {
    const auto v = cfg.exhaustive ? classify_exhaustive(*code, k) : classify(*code, k);
    auto j = to_json(*code, k, v);
    j.erase("schema_version");
    j.erase("code_id");
    verdicts.push_back(j);
    text << "  " << to_string(k) << ": " << to_string(v.level) << ", max leakage "
         << v.max_leakage_bits << " bits over " << v.strategies << " strategies\n"
         << "    witness: " << describe(v.witness, code->d(), code->shots()) << '\n';
  }
  json report{{"schema_version", 1}, {"code_id", code->id()}, {"verdicts", verdicts}};
  if (cfg.per_shot) {
    const bool active = std::any_of(classes.begin(), classes.end(), [](AttackClass k) { return is_active(k); });
    const auto ps = verify_per_shot_secrecy(*code, active);
    report["per_shot"] = {{"perfectly_secret", ps.perfectly_secret},
                          {"strategies", ps.strategies},
                          {"max_leakage_bits", ps.max_leakage_bits}};
    text << "  per-shot taps (" << (active ? "active" : "passive") << "): "
         << (ps.perfectly_secret ? "perfectly-secret" : "leaks") << ", max leakage " << ps.max_leakage_bits
         << " bits over " << ps.strategies << " strategies\n";
  }
  emit(out, cfg, report, text.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------

int antilatin_selftest(std::ostream& out) {
  Selftest t(out, "antilatin");
  t.check("constant 2x2 squares are anti-Latin", [] {
    const std::vector<Symbol> zero{0, 0, 0, 0}, one{1, 1, 1, 1};
    return is_anti_latin(2, zero) && is_anti_latin(2, one);
  });
  t.check("a Latin square is not anti-Latin", [] {
    const std::vector<Symbol> latin{0, 1, 1, 0};
    return !is_anti_latin(2, latin);
  });
  t.check("the sample pairs are decodable and one-to-one", [] {
    auto [a, b] = sample_pair_d3();
    auto [c, e] = sample_pair_d4();
    return is_decodable_pair(a, b) && is_one_to_one_pair(a, b) && is_decodable_pair(c, e) &&
           is_one_to_one_pair(c, e);
  });
  t.check("no decodable pair over Z_2", [] {
    return find_decodable_pair(2).status == SearchStatus::proven_absent;
  });
  return t.finish();
}

int cmd_antilatin(const std::string& action, const Config& cfg, std::ostream& out) {
  if (cfg.selftest) return antilatin_selftest(out);
  if (action == "verify") {
    if (cfg.square.empty()) throw UsageError("verify needs --square");
    const auto [d, values] = parse_table(cfg.square);
    for (auto v : values)
      if (v >= d) throw UsageError("--square: entry outside Z_d");
    const bool ok = is_anti_latin(d, values);
    emit(out, cfg, {{"schema_version", 1}, {"d", d}, {"anti_latin", ok}},
         std::string(ok ? "anti-Latin" : "not anti-Latin") + " (d = " + std::to_string(d) + ")\n");
    return kExitOk;
  }
  if (action == "xi") {
    const auto a = parse_square(cfg.square_a, "--a");
    const auto b = parse_square(cfg.square_b, "--b");
    if (cfg.z >= a.d() || cfg.m >= a.d()) throw UsageError("--z and --m must lie in Z_d");
    const auto xi = xi_set(a, b, static_cast<Symbol>(cfg.z), static_cast<Symbol>(cfg.m));
    std::vector<unsigned> members(xi.members.begin(), xi.members.end());
    std::ostringstream text;
    text << "Xi(z=" << cfg.z << ", m=" << cfg.m << ") = {";
    for (std::size_t i = 0; i < members.size(); ++i) text << (i ? ", " : "") << members[i];
    text << "}\n";
    emit(out, cfg, {{"schema_version", 1}, {"z", cfg.z}, {"m", cfg.m}, {"members", members}}, text.str());
    return kExitOk;
  }
  if (action == "pair-check") {
    const auto a = parse_square(cfg.square_a, "--a");
    const auto b = parse_square(cfg.square_b, "--b");
    if (a.d() != b.d()) throw UsageError("--a and --b differ in size");
    const bool dec = is_decodable_pair(a, b), inj = is_one_to_one_pair(a, b);
    emit(out, cfg, {{"schema_version", 1}, {"d", a.d()}, {"decodable", dec}, {"one_to_one", inj}},
         std::string("decodable: ") + (dec ? "yes" : "no") + "\none-to-one: " + (inj ? "yes" : "no") + "\n");
    return kExitOk;
  }
  if (action == "find") {
    if (cfg.d < 1) throw UsageError("find needs --d");
    const auto res = find_decodable_pair(cfg.d, cfg.seed, cfg.budget ? cfg.budget : 2'000'000);
    json j{{"schema_version", 1}, {"d", cfg.d}, {"seed", cfg.seed}, {"status", to_string(res.status)},
           {"steps", res.steps}, {"note", res.note}};
    std::ostringstream text;
    if (res.pair) {
      j["pair"] = {to_json(res.pair->first), to_json(res.pair->second)};
      text << "Found (" << res.note << ")\nA =\n" << to_text(res.pair->first) << "B =\n"
           << to_text(res.pair->second);
    } else {
      text << "NotFound (" << to_string(res.status) << "): " << res.note << '\n';
    }
    emit(out, cfg, j, text.str());
    return res.status == SearchStatus::budget_exhausted ? kExitBudget : kExitOk;
  }
  if (action == "maxset") {
    if (cfg.d < 1) throw UsageError("maxset needs --d");
    PairMode mode;
    if (cfg.mode == "decodable") mode = PairMode::decodable;
    else if (cfg.mode == "one-to-one") mode = PairMode::one_to_one;
    else throw UsageError("--mode must be decodable or one-to-one");
    SearchMethod method;
    if (cfg.method == "exact") method = SearchMethod::exact;
    else if (cfg.method == "heuristic") method = SearchMethod::heuristic;
    else throw UsageError("--method must be exact or heuristic");
    const auto res = max_mutual_set(cfg.d, mode, method, cfg.seed, cfg.budget ? cfg.budget : 200'000);
    json squares = json::array();
    std::ostringstream text;
    text << to_string(mode) << " set over Z_" << cfg.d << ": size " << res.size
         << (res.maximal ? " (maximum)" : " (lower bound)") << '\n';
    if (method == SearchMethod::exact)
      text << "catalog " << res.catalog_size << " squares, " << res.class_count << " relabeling classes, "
           << res.compatible_pairs << " compatible pairs\n";
    for (const auto& s : res.certificate) {
      squares.push_back(to_json(s));
      text << to_text(s) << '\n';
    }
    emit(out, cfg,
         {{"schema_version", 1}, {"d", cfg.d}, {"mode", to_string(mode)}, {"method", cfg.method},
          {"seed", cfg.seed}, {"size", res.size}, {"maximal", res.maximal}, {"lower_bound", res.lower_bound},
          {"catalog_size", res.catalog_size}, {"class_count", res.class_count},
          {"compatible_pairs", res.compatible_pairs}, {"steps", res.steps}, {"certificate", squares}},
         text.str());
    return method == SearchMethod::exact && !res.maximal ? kExitBudget : kExitOk;
  }
  throw UsageError("antilatin needs one of verify, xi, pair-check, find, maxset");
}

// ---------------------------------------------------------------------------

int capacity_selftest(std::ostream& out) {
  Selftest t(out, "capacity");
  t.check("r = 0 everywhere gives log2 q * min k", [] {
    const auto c = unicast_capacities({{3, 2, 4}, {0, 0, 0}, 4});
    return c.C1_bits == 4.0 && c.C2_bits == 4.0;
  });
  t.check("one layer gives log2 q * (k - r)", [] {
    const auto c = unicast_capacities({{5}, {2}, 2});
    return c.C1_bits == 3.0 && c.C2_bits == 3.0;
  });
  t.check("r = 0 on a wiretap network gives C2 = mincut2", [] {
    const auto net = onehop_network();
    return rwiretap_capacities(net, 0).C2 == mincut2(net);
  });
  return t.finish();
}

int cmd_capacity(const Config& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.selftest) return capacity_selftest(out);
  if (!cfg.layered.empty() == !cfg.net.empty()) throw UsageError("capacity needs exactly one of --layered or --net");
  if (!cfg.layered.empty()) {
    json j;
    try {
      j = json::parse(literal_or_file(cfg.layered));
    } catch (const json::parse_error& e) {
      throw UsageError(std::string("--layered: ") + e.what());
    }
    const auto net = layered_from_json(j);
    const auto c = unicast_capacities(net);
    auto report = to_json(c);
    report["network"] = to_json(net);
    std::ostringstream text;
    text << "C1 = " << c.C1_bits << " bits (" << c.C1_symbols << " symbols)\n"
         << "C2 = " << c.C2_bits << " bits (" << c.C2_symbols << " symbols)\n";
    emit(out, cfg, report, text.str());
    return kExitOk;
  }
  const auto net = parse_network(read_file(cfg.net));
  const unsigned r = cfg.r >= 0 ? static_cast<unsigned>(cfg.r) : net.wiretap_budget;
  const auto c = rwiretap_capacities(net, r);
  for (const auto& w : c.warnings) err << "warning: " << w << '\n';
  std::ostringstream text;
  text << "mincut1 = " << c.mincut1 << ", mincut2 = " << c.mincut2 << ", r = " << r << '\n'
       << "C2 = " << c.C2 << '\n'
       << "C1 in [" << c.C1_lower << ", " << c.C1_upper << "]" << (c.collapsed ? " (no pseudo source)" : "") << '\n';
  emit(out, cfg, to_json(c), text.str());
  return kExitOk;
}

int mincut_selftest(std::ostream& out) {
  Selftest t(out, "mincut");
  t.check("single edge source -> terminal has cut 1", [] {
    const auto net = parse_network("node s source message\nnode t terminal\nedge s t\n");
    return mincut1(net) == 1 && mincut2(net) == 1;
  });
  t.check("one-hop topology has cut 2 on both counts", [] {
    const auto net = onehop_network();
    return mincut1(net) == 2 && mincut2(net) == 2;
  });
  t.check("disconnected terminal has cut 0", [] {
    return mincut1(parse_network("node s source\nnode t terminal\n")) == 0;
  });
  return t.finish();
}

int cmd_mincut(const Config& cfg, std::ostream& out) {
  if (cfg.selftest) return mincut_selftest(out);
  if (cfg.net.empty()) throw UsageError("mincut needs --net");
  const auto net = parse_network(read_file(cfg.net));
  const auto a = mincut1(net), b = mincut2(net);
  std::vector<std::string> pseudo;
  for (auto i : net.pseudo_sources()) pseudo.push_back(net.nodes()[i].id);
  emit(out, cfg, {{"schema_version", 1}, {"mincut1", a}, {"mincut2", b}, {"pseudo_sources", pseudo}},
       "mincut1 = " + std::to_string(a) + "\nmincut2 = " + std::to_string(b) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------------------

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<std::uint32_t> row;
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j));
    rows.push_back(row);
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"modulus", m.modulus()}, {"entries", rows}};
}

int mds_selftest(std::ostream& out) {
  Selftest t(out, "mds");
  t.check("(3, 1) generator over F_3 is MDS", [] { return verify_mds(build_mds_generator(3, 1, 3)); });
  t.check("a zero column breaks the MDS property", [] {
    return !verify_mds(Matrix(2, 3, 5, {1, 0, 1, 0, 0, 1}));
  });
  t.check("identity has determinant 1", [] { return determinant(Matrix(2, 2, 7, {1, 0, 0, 1})) == 1; });
  return t.finish();
}

int cmd_mds(const std::string& action, const Config& cfg, std::ostream& out) {
  if (cfg.selftest) return mds_selftest(out);
  if (action == "build") {
    if (cfg.k == 0 || cfg.q == 0 || cfg.r < 0) throw UsageError("mds build needs --k, --r and --q");
    const auto g = build_mds_generator(cfg.k, static_cast<std::size_t>(cfg.r), cfg.q);
    auto j = matrix_json(g);
    j["schema_version"] = 1;
    j["mds"] = verify_mds(g);
    emit(out, cfg, j, to_text(g));
    return kExitOk;
  }
  if (action == "verify") {
    if (cfg.matrix.empty()) throw UsageError("mds verify needs --matrix");
    const auto m = matrix_from_text(literal_or_file(cfg.matrix));
    const bool ok = verify_mds(m);
    auto j = matrix_json(m);
    j["schema_version"] = 1;
    j["mds"] = ok;
    emit(out, cfg, j, std::string(ok ? "MDS" : "not MDS") + "\n");
    return kExitOk;
  }
  throw UsageError("mds needs one of build, verify");
}

int wiretap2_selftest(std::ostream& out) {
  Selftest t(out, "wiretap2");
  t.check("r = 0 code is a plain invertible map", [] {
    const auto rep = wiretap2_verify(WiretapIICode(3, 0, 3));
    return rep.decodable && rep.zero_leakage && rep.taps.size() == 1;
  });
  t.check("(3, 1) code over F_3 hides the message from any one symbol", [] {
    const auto rep = wiretap2_verify(WiretapIICode(3, 1, 3));
    return rep.decodable && rep.zero_leakage && rep.taps.size() == 3;
  });
  return t.finish();
}

int cmd_wiretap2(const Config& cfg, std::ostream& out) {
  if (cfg.selftest) return wiretap2_selftest(out);
  if (cfg.k == 0 || cfg.q == 0 || cfg.r < 0) throw UsageError("wiretap2 needs --q, --k and --r");
  const WiretapIICode code(cfg.k, static_cast<std::size_t>(cfg.r), cfg.q);
  const auto rep = wiretap2_verify(code);
  auto j = to_json(rep);
  j["k"] = cfg.k;
  j["r"] = cfg.r;
  j["q"] = cfg.q;
  j["generator"] = matrix_json(code.generator());
  std::ostringstream text;
  text << "(" << cfg.k << ", " << cfg.r << ") code over F_" << cfg.q << ", " << rep.cases << " cases\n"
       << "decodable: " << (rep.decodable ? "yes" : "no") << '\n';
  for (const auto& t : rep.taps) {
    text << "  tap {";
    for (std::size_t i = 0; i < t.symbols.size(); ++i) text << (i ? "," : "") << t.symbols[i];
    text << "}: " << t.leakage_bits << " bits" << (t.independent ? "" : " (dependent)") << '\n';
  }
  text << "zero leakage: " << (rep.zero_leakage ? "yes" : "no") << '\n';
  emit(out, cfg, j, text.str());
  return rep.decodable && rep.zero_leakage ? kExitOk : kExitExpectation;
}

// ---------------------------------------------------------------------------

int han_selftest(std::ostream& out) {
  Selftest t(out, "han");
  t.check("collection {[k]} with h = 1 has slack 0", [] {
    std::mt19937_64 rng(1);
    const auto inst = random_han_instance(rng, 3);
    const auto c = check_han_collection(inst.dist, inst.groups, inst.x, {{0, 1, 2}}, 1);
    return c.holds && c.slack == 0.0;
  });
  t.check("Y1 = Y2 uniform gives slack 1 on singletons", [] {
    const auto dist = JointDistribution::Builder({{"X", 1}, {"Y1", 2}, {"Y2", 2}})
                          .add({0, 0, 0})
                          .add({0, 1, 1})
                          .build();
    const auto c = check_han_collection(dist, {{"Y1"}, {"Y2"}}, {"X"}, {{0}, {1}}, 1);
    return c.holds && std::abs(c.slack - 1.0) < 1e-12;
  });
  t.check("r = k is an equality", [] {
    std::mt19937_64 rng(2);
    const auto inst = random_han_instance(rng, 4);
    return check_han_subsets(inst.dist, inst.groups, inst.x, 4).slack == 0.0;
  });
  return t.finish();
}

int cmd_han(const Config& cfg, std::ostream& out) {
  if (cfg.selftest) return han_selftest(out);
  const std::size_t k = cfg.k ? cfg.k : 3;
  if (k > 6) throw UsageError("--k must be at most 6");
  std::mt19937_64 rng(cfg.seed);
  std::uint64_t checks = 0, violations = 0;
  double min_slack = 0.0;
  bool first = true;
  auto note = [&](const HanCheck& c) {
    ++checks;
    violations += !c.holds;
    if (first || c.slack < min_slack) min_slack = c.slack;
    first = false;
  };
  for (unsigned s = 0; s < cfg.samples; ++s) {
    const auto inst = random_han_instance(rng, k);
    for (std::size_t r = 1; r <= k; ++r) note(check_han_subsets(inst.dist, inst.groups, inst.x, r));
    // Cyclic windows of width w cover each element exactly w times.
    for (std::size_t w = 1; w < k; ++w) {
      std::vector<std::vector<std::size_t>> windows;
      for (std::size_t i = 0; i < k; ++i) {
        std::vector<std::size_t> win;
        for (std::size_t j = 0; j < w; ++j) win.push_back((i + j) % k);
        windows.push_back(win);
      }
      note(check_han_collection(inst.dist, inst.groups, inst.x, windows, w));
    }
  }
  std::ostringstream text;
  text << cfg.samples << " random distributions, k = " << k << ": " << checks << " checks, " << violations
       << " violations, minimum slack " << min_slack << " bits\n";
  emit(out, cfg,
       {{"schema_version", 1}, {"samples", cfg.samples}, {"k", k}, {"seed", cfg.seed}, {"checks", checks},
        {"violations", violations}, {"min_slack", min_slack}},
       text.str());
  return violations ? kExitExpectation : kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Secure network coding analysis on one-hop relay and wiretap networks", "sncl"};
  app.require_subcommand(1);
  const std::vector<std::string> formats{"text", "json"};

  auto common = [&](CLI::App* sub, bool csv = false) {
    std::vector<std::string> f = formats;
    if (csv) f.push_back("csv");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember(f));
    sub->add_option("--seed", cfg.seed, "Seed for randomized searches");
    sub->add_flag("--selftest", cfg.selftest, "Run built-in checks");
  };

  auto* classify_cmd = app.add_subcommand("classify", "Security level of a one-hop code per attack class");
  common(classify_cmd, true);
  classify_cmd->add_option("--family", cfg.family,
                           "scalar-linear | scalar-linear-random | standard | anti-latin | vector-linear");
  classify_cmd->add_option("--code", cfg.code_file, "Code JSON (literal or @file)");
  classify_cmd->add_option("--d", cfg.d_list, "Alphabet size; comma list with --table");
  classify_cmd->add_option("--class", cfg.klass, "Attack class or 'all'");
  classify_cmd->add_flag("--table", cfg.table, "Print the full classification grid");
  classify_cmd->add_flag("--expect-table1", cfg.expect_table1, "Exit 1 unless the grid matches the expected levels");
  classify_cmd->add_flag("--exhaustive", cfg.exhaustive, "Simulate every strategy individually");
  classify_cmd->add_flag("--per-shot", cfg.per_shot, "Also let a two-shot attacker switch edges between shots");

  auto* al = app.add_subcommand("antilatin", "Anti-Latin squares and pairs");
  common(al);
  std::string al_action;
  for (const char* name : {"verify", "xi", "pair-check", "find", "maxset"}) {
    auto* sub = al->add_subcommand(name);
    common(sub);
    sub->callback([&al_action, name] { al_action = name; });
    const std::string n = name;
    if (n == "verify") sub->add_option("--square", cfg.square, "Rows separated by ';' (or @file)");
    if (n == "xi" || n == "pair-check") {
      sub->add_option("--a", cfg.square_a, "First square");
      sub->add_option("--b", cfg.square_b, "Second square");
    }
    if (n == "xi") {
      sub->add_option("--z", cfg.z, "Value of the first square");
      sub->add_option("--m", cfg.m, "Message");
    }
    if (n == "find" || n == "maxset") {
      sub->add_option("--d", cfg.d, "Alphabet size");
      sub->add_option("--budget", cfg.budget, "Iteration cap");
    }
    if (n == "maxset") {
      sub->add_option("--mode", cfg.mode, "decodable | one-to-one");
      sub->add_option("--method", cfg.method, "exact | heuristic");
    }
  }

  auto* cap = app.add_subcommand("capacity", "Secrecy capacities of layered or wiretap networks");
  common(cap);
  cap->add_option("--layered", cfg.layered, "Layered network JSON (literal or @file)");
  cap->add_option("--net", cfg.net, "Network file");
  cap->add_option("--r", cfg.r, "Wiretap budget (defaults to the file's)");

  auto* mc = app.add_subcommand("mincut", "mincut1 and mincut2 of a network file");
  common(mc);
  mc->add_option("--net", cfg.net, "Network file");

  auto* mds = app.add_subcommand("mds", "MDS generator matrices");
  common(mds);
  std::string mds_action;
  for (const char* name : {"build", "verify"}) {
    auto* sub = mds->add_subcommand(name);
    common(sub);
    sub->callback([&mds_action, name] { mds_action = name; });
    if (std::string(name) == "build") {
      sub->add_option("--k", cfg.k, "Columns");
      sub->add_option("--r", cfg.r, "Rows");
      sub->add_option("--q", cfg.q, "Prime field size");
    } else {
      sub->add_option("--matrix", cfg.matrix, "'rows cols modulus entries...' (or @file)");
    }
  }

  auto* wt = app.add_subcommand("wiretap2", "Build and verify a wiretap channel II code");
  common(wt);
  wt->add_option("--k", cfg.k, "Channels");
  wt->add_option("--r", cfg.r, "Tapped channels");
  wt->add_option("--q", cfg.q, "Prime field size");

  auto* han = app.add_subcommand("han", "Random sweep of Han-type entropy inequalities");
  common(han);
  han->add_option("--samples", cfg.samples, "Number of random distributions");
  han->add_option("--k", cfg.k, "Number of Y variables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (classify_cmd->parsed()) return cmd_classify(cfg, out);
    if (al->parsed()) return cmd_antilatin(al_action, cfg, out);
    if (cap->parsed()) return cmd_capacity(cfg, out, err);
    if (mc->parsed()) return cmd_mincut(cfg, out);
    if (mds->parsed()) return cmd_mds(mds_action, cfg, out);
    if (wt->parsed()) return cmd_wiretap2(cfg, out);
    if (han->parsed()) return cmd_han(cfg, out);
  } catch (const BudgetExceeded& e) {
    err << "budget exhausted: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitExpectation;
  }
  return kExitUsage;
}

}  // namespace sncl
