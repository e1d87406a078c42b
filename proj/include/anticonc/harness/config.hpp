#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "anticonc/core/distribution.hpp"
#include "anticonc/core/types.hpp"

namespace anticonc {

enum class ExperimentKind { lcf, fourier, diophantine, count, tail, classify, verify, threshold };
std::string to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(const std::string& s);

/// Keys accepted by an experiment kind, common keys included, sorted.
std::vector<std::string> config_keys(ExperimentKind k);

/// One experiment: `experiment = <kind>` plus flat typed `key = value`
/// pairs. Keys outside the kind's schema are rejected with their path.
///
///   # comment
///   experiment = lcf
///   dist = rademacher
///   vector = 1,1,1,1
///   radius = 0.5
class ExperimentConfig {
 public:
  /// Throws ConfigError naming `<source>:<line>` or the key.
  static ExperimentConfig parse(const std::string& text, const std::string& source = "<config>");
  static ExperimentConfig load(const std::filesystem::path& path);
  /// Builds and validates from already-split pairs (the CLI path).
  static ExperimentConfig from_pairs(ExperimentKind kind, const std::map<std::string, std::string>& pairs);

  ExperimentKind kind() const noexcept { return kind_; }
  const std::map<std::string, std::string>& values() const noexcept { return values_; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value);

  /// Canonical text (sorted keys, defaults filled in); parse(canonical()) == *this.
  std::string canonical() const;

  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  Rational get_rational(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;
  ComplexVec get_vector(const std::string& key) const;
  NoiseDistribution get_dist(const std::string& key) const;

  std::uint64_t seed() const { return get_uint("seed"); }

  /// Coefficient vector from `vector` or `vector-file` (one or more
  /// comma/newline separated complex numbers).
  ComplexVec coefficient_vector() const;

  /// Files read while resolving the config (for the content hash).
  std::vector<std::filesystem::path> input_files() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

 private:
  void validate_and_fill();
  ExperimentKind kind_ = ExperimentKind::lcf;
  std::map<std::string, std::string> values_;
};

/// Reads a complex vector file: entries separated by commas, whitespace or newlines.
ComplexVec read_vector_file(const std::filesystem::path& path);
/// Reads a square complex matrix: one row per line, comma separated.
ComplexMatrix read_matrix_file(const std::filesystem::path& path);
/// "zero", "identity[:c]", "rank1[:c]" (all entries c/n), or "file:<path>".
ComplexMatrix build_matrix(const std::string& spec, std::size_t n);

}  // namespace anticonc
