#include "anticonc/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "anticonc/core/errors.hpp"

namespace anticonc {
namespace {

enum class Type { string, real, uint, boolean, rational, reals, vector, dist, choice };

struct KeySpec {
  Type type;
  std::optional<std::string> fallback;  // nullopt: required
  std::vector<std::string> choices = {};
};

using Schema = std::map<std::string, KeySpec>;

const Schema& common_keys() {
  static const Schema s{
      {"seed", {Type::uint, "0"}},
      {"threads", {Type::uint, "0"}},
      {"out", {Type::string, ""}},
      {"csv", {Type::string, ""}},
  };
  return s;
}

const Schema& schema(ExperimentKind k) {
  static const std::map<ExperimentKind, Schema> all{
      {ExperimentKind::lcf,
       {{"dist", {Type::dist, "rademacher"}},
        {"vector", {Type::vector, ""}},
        {"vector-file", {Type::string, ""}},
        {"radius", {Type::reals, std::nullopt}},
        {"method", {Type::choice, "exact", {"exact", "monte-carlo"}}},
        {"trials", {Type::uint, "100000"}},
        {"condition", {Type::string, "always"}}}},
      {ExperimentKind::fourier,
       {{"op", {Type::choice, "p-xi", {"p-xi", "xi-norm", "majorization", "doubling", "esseen"}}},
        {"dist", {Type::dist, "rademacher"}},
        {"vector", {Type::vector, ""}},
        {"vector-file", {Type::string, ""}},
        {"w", {Type::vector, ""}},
        {"radius", {Type::real, "0"}},
        {"method", {Type::choice, "exact", {"exact", "monte-carlo"}}},
        {"trials", {Type::uint, "100000"}},
        {"quad-tol", {Type::real, "1e-6"}},
        {"max-cells", {Type::uint, "200000"}}}},
      {ExperimentKind::diophantine,
       {{"mode", {Type::choice, "search", {"search", "bound", "soundness"}}},
        {"dist", {Type::dist, "rademacher"}},
        {"vector", {Type::vector, ""}},
        {"vector-file", {Type::string, ""}},
        {"f", {Type::real, std::nullopt}},
        {"g", {Type::real, std::nullopt}},
        {"alpha", {Type::real, std::nullopt}},
        {"cxi", {Type::real, ""}},
        {"r", {Type::real, "0"}},
        {"trials", {Type::uint, "100000"}},
        {"real-eta", {Type::boolean, "false"}}}},
      {ExperimentKind::count,
       {{"op", {Type::choice, "rk", {"rk", "lemma16", "b-set", "verify-lemma"}}},
        {"p", {Type::uint, std::nullopt}},
        {"vector", {Type::vector, ""}},
        {"k", {Type::uint, "1"}},
        {"alpha", {Type::rational, "-1"}},
        {"n", {Type::uint, "2"}},
        {"s", {Type::uint, "1"}},
        {"t", {Type::rational, "1"}}}},
      {ExperimentKind::tail,
       {{"n", {Type::uint, std::nullopt}},
        {"dist", {Type::dist, "gaussian"}},
        {"matrix", {Type::string, "zero"}},
        {"etas", {Type::reals, std::nullopt}},
        {"trials", {Type::uint, "10000"}},
        {"check", {Type::choice, "none", {"none", "edelman", "sst"}}}}},
      {ExperimentKind::classify,
       {{"dist", {Type::dist, "rademacher"}},
        {"vector", {Type::vector, ""}},
        {"vector-file", {Type::string, ""}},
        {"normalize", {Type::boolean, "false"}},
        {"m-norm", {Type::real, "0"}},
        {"beta", {Type::real, std::nullopt}},
        {"eta", {Type::real, std::nullopt}},
        {"epsilon", {Type::real, "0.025"}},
        {"trials", {Type::uint, "10000"}},
        {"c-dioph", {Type::real, "1"}},
        {"j-max", {Type::uint, ""}},
        {"f-beta", {Type::real, ""}}}},
      {ExperimentKind::verify, {{"suite", {Type::choice, "all", {"concentration", "fourier", "counting", "matrix", "all"}}}}},
      {ExperimentKind::threshold,
       {{"alpha", {Type::real, std::nullopt}},
        {"m-norm", {Type::real, std::nullopt}},
        {"n", {Type::uint, std::nullopt}},
        {"c", {Type::real, "1"}}}},
  };
  return all.at(k);
}

const KeySpec* find_spec(ExperimentKind k, const std::string& key) {
  if (auto it = common_keys().find(key); it != common_keys().end()) return &it->second;
  const auto& s = schema(k);
  if (auto it = s.find(key); it != s.end()) return &it->second;
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ';') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

double parse_real(const std::string& s) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(x))
    throw PreconditionError("expected a finite number, got '" + s + "'");
  return x;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::lcf: return "lcf";
    case ExperimentKind::fourier: return "fourier";
    case ExperimentKind::diophantine: return "diophantine";
    case ExperimentKind::count: return "count";
    case ExperimentKind::tail: return "tail";
    case ExperimentKind::classify: return "classify";
    case ExperimentKind::verify: return "verify";
    case ExperimentKind::threshold: return "threshold";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(const std::string& s) {
  for (auto k : {ExperimentKind::lcf, ExperimentKind::fourier, ExperimentKind::diophantine, ExperimentKind::count,
                 ExperimentKind::tail, ExperimentKind::classify, ExperimentKind::verify, ExperimentKind::threshold})
    if (to_string(k) == s) return k;
  throw ConfigError("experiment", "unknown experiment kind '" + s + "'");
}

std::vector<std::string> config_keys(ExperimentKind k) {
  std::vector<std::string> out;
  for (const auto& [key, spec] : common_keys()) out.push_back(key);
  for (const auto& [key, spec] : schema(k)) out.push_back(key);
  std::sort(out.begin(), out.end());
  return out;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text, const std::string& source) {
  std::map<std::string, std::string> pairs;
  std::optional<std::string> kind;
  std::istringstream in(text);
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where, "empty key");
    if (key == "experiment") {
      if (kind) throw ConfigError(where + ": experiment", "duplicate key (one experiment per file)");
      kind = value;
      continue;
    }
    if (!pairs.emplace(key, value).second) throw ConfigError(where + ": " + key, "duplicate key");
  }
  if (!kind) throw ConfigError(source + ": experiment", "missing required key");
  return from_pairs(parse_experiment_kind(*kind), pairs);
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::string text;
  try {
    text = slurp(path);
  } catch (const PreconditionError& e) {
    throw ConfigError(path.string(), e.what());
  }
  return parse(text, path.string());
}

ExperimentConfig ExperimentConfig::from_pairs(ExperimentKind kind, const std::map<std::string, std::string>& pairs) {
  ExperimentConfig c;
  c.kind_ = kind;
  c.values_ = pairs;
  c.validate_and_fill();
  return c;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
  validate_and_fill();
}

void ExperimentConfig::validate_and_fill() {
  const std::string kname = to_string(kind_);
  for (const auto& [key, value] : values_) {
    const KeySpec* spec = find_spec(kind_, key);
    if (!spec) throw ConfigError(kname + "." + key, "unknown key for experiment '" + kname + "'");
    if (value.empty()) continue;
    try {
      switch (spec->type) {
        case Type::real: (void)get_double(key); break;
        case Type::uint: (void)get_uint(key); break;
        case Type::boolean: (void)get_bool(key); break;
        case Type::rational: (void)get_rational(key); break;
        case Type::reals: (void)get_doubles(key); break;
        case Type::vector: (void)get_vector(key); break;
        case Type::dist: (void)get_dist(key); break;
        case Type::choice:
          if (std::find(spec->choices.begin(), spec->choices.end(), value) == spec->choices.end()) {
            std::string opts;
            for (const auto& ch : spec->choices) opts += (opts.empty() ? "" : ", ") + ch;
            throw ConfigError(kname + "." + key, "'" + value + "' is not one of: " + opts);
          }
          break;
        case Type::string: break;
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(kname + "." + key, e.what());
    }
  }
  auto fill = [&](const Schema& s) {
    for (const auto& [key, spec] : s) {
      if (values_.count(key) && !values_.at(key).empty()) continue;
      if (!spec.fallback) throw ConfigError(kname + "." + key, "missing required key");
      values_[key] = *spec.fallback;
    }
  };
  fill(common_keys());
  fill(schema(kind_));
  const bool needs_vector = kind_ == ExperimentKind::lcf || kind_ == ExperimentKind::fourier ||
                            kind_ == ExperimentKind::diophantine || kind_ == ExperimentKind::classify ||
                            (kind_ == ExperimentKind::count && values_.at("op") != "verify-lemma");
  if (needs_vector && values_.at("vector").empty() && (!has("vector-file") || values_.at("vector-file").empty()))
    throw ConfigError(kname + ".vector", "missing required key (or vector-file)");
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  out << "experiment = " << to_string(kind_) << '\n';
  for (const auto& [k, v] : values_) out << k << " = " << v << '\n';
  return out.str();
}

std::string ExperimentConfig::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(to_string(kind_) + "." + key, "missing key");
  return it->second;
}

double ExperimentConfig::get_double(const std::string& key) const {
  try {
    return parse_real(get_string(key));
  } catch (const PreconditionError& e) {
    throw ConfigError(to_string(kind_) + "." + key, e.what());
  }
}

std::uint64_t ExperimentConfig::get_uint(const std::string& key) const {
  const std::string s = get_string(key);
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(to_string(kind_) + "." + key, "expected a nonnegative integer, got '" + s + "'");
  return x;
}

bool ExperimentConfig::get_bool(const std::string& key) const {
  const std::string s = get_string(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(to_string(kind_) + "." + key, "expected true/false, got '" + s + "'");
}

Rational ExperimentConfig::get_rational(const std::string& key) const {
  try {
    return parse_rational(get_string(key));
  } catch (const Error& e) {
    throw ConfigError(to_string(kind_) + "." + key, e.what());
  }
}

std::vector<double> ExperimentConfig::get_doubles(const std::string& key) const {
  std::vector<double> out;
  try {
    for (const auto& tok : split_list(get_string(key))) out.push_back(parse_real(tok));
  } catch (const PreconditionError& e) {
    throw ConfigError(to_string(kind_) + "." + key, e.what());
  }
  if (out.empty()) throw ConfigError(to_string(kind_) + "." + key, "expected at least one number");
  return out;
}

ComplexVec ExperimentConfig::get_vector(const std::string& key) const {
  try {
    ComplexVec out;
    for (const auto& tok : split_list(get_string(key))) out.push_back(parse_complex(tok));
    return out;
  } catch (const Error& e) {
    throw ConfigError(to_string(kind_) + "." + key, e.what());
  }
}

NoiseDistribution ExperimentConfig::get_dist(const std::string& key) const {
  try {
    return NoiseDistribution::parse(get_string(key));
  } catch (const Error& e) {
    throw ConfigError(to_string(kind_) + "." + key, e.what());
  }
}

ComplexVec ExperimentConfig::coefficient_vector() const {
  if (has("vector-file") && !values_.at("vector-file").empty()) {
    try {
      return read_vector_file(values_.at("vector-file"));
    } catch (const Error& e) {
      throw ConfigError(to_string(kind_) + ".vector-file", e.what());
    }
  }
  return get_vector("vector");
}

std::vector<std::filesystem::path> ExperimentConfig::input_files() const {
  std::vector<std::filesystem::path> out;
  if (has("vector-file") && !values_.at("vector-file").empty()) out.emplace_back(values_.at("vector-file"));
  if (has("matrix") && values_.at("matrix").rfind("file:", 0) == 0) out.emplace_back(values_.at("matrix").substr(5));
  return out;
}

ComplexVec read_vector_file(const std::filesystem::path& path) {
  ComplexVec out;
  for (const auto& tok : split_list(slurp(path))) out.push_back(parse_complex(tok));
  if (out.empty()) throw PreconditionError("vector file '" + path.string() + "' is empty");
  return out;
}

ComplexMatrix read_matrix_file(const std::filesystem::path& path) {
  std::istringstream in(slurp(path));
  std::vector<ComplexVec> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ComplexVec row;
    for (const auto& tok : split_list(line)) row.push_back(parse_complex(tok));
    rows.push_back(std::move(row));
  }
  for (const auto& r : rows)
    if (r.size() != rows.size())
      throw PreconditionError("matrix file '" + path.string() + "' is not square");
  ComplexMatrix m(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  return m;
}

ComplexMatrix build_matrix(const std::string& spec, std::size_t n) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "file") {
    ComplexMatrix m = read_matrix_file(arg);
    if (m.rows() != n)
      throw PreconditionError("matrix file has dimension " + std::to_string(m.rows()) + ", expected " + std::to_string(n));
    return m;
  }
  const double c = arg.empty() ? 1.0 : parse_real(arg);
  if (head == "zero") return ComplexMatrix(n, n);
  if (head == "identity") {
    ComplexMatrix m = ComplexMatrix::identity(n);
    m *= c;
    return m;
  }
  if (head == "rank1") {
    ComplexMatrix m(n, n);
    for (auto& z : m.data()) z = c / static_cast<double>(n);
    return m;
  }
  throw PreconditionError("unknown matrix spec '" + spec + "' (zero, identity[:c], rank1[:c], file:<path>)");
}

}  // namespace anticonc
