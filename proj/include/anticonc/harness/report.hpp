#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "anticonc/harness/config.hpp"

namespace anticonc {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::size_t instances = 1;
  std::size_t failures = 0;
  std::size_t vacuous = 0;
  std::string detail;
};

/// Plain CSV table; every cell is preformatted text.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string to_string() const;
};

struct RunReport {
  ExperimentConfig config;
  std::string input_hash;  // git blob SHA-1 of the canonical config + input files
  std::vector<CheckResult> checks;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  std::optional<CsvTable> csv;
  double wall_clock_seconds = 0.0;
  std::vector<std::string> artifacts;

  bool pass() const;
  nlohmann::ordered_json to_json() const;
};

/// Shortest round-trippable decimal text of a double.
std::string format_number(double x);

/// git hash-object style SHA-1 of `data` ("blob <len>\0" prefix).
std::string git_blob_sha1(const std::string& data);

}  // namespace anticonc
