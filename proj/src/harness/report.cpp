#include "anticonc/harness/report.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <memory>

#include "anticonc/core/errors.hpp"

namespace anticonc {

std::string CsvTable::to_string() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

bool RunReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

nlohmann::ordered_json RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["experiment"] = anticonc::to_string(config.kind());
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config.values()) cfg[k] = v;
  j["config"] = cfg;
  j["input_hash"] = input_hash;
  j["pass"] = pass();
  nlohmann::ordered_json checks_json = nlohmann::ordered_json::array();
  std::vector<std::string> failed;
  for (const auto& c : checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["instances"] = c.instances;
    cj["failures"] = c.failures;
    cj["vacuous"] = c.vacuous;
    if (!c.detail.empty()) cj["detail"] = c.detail;
    checks_json.push_back(cj);
    if (!c.pass) failed.push_back(c.name);
  }
  j["checks"] = checks_json;
  j["failed_checks"] = failed;
  j["results"] = results;
  j["wall_clock_seconds"] = wall_clock_seconds;
  j["artifacts"] = artifacts;
  return j;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

std::string git_blob_sha1(const std::string& data) {
  const std::string header = "blob " + std::to_string(data.size()) + '\0';
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), header.data(), header.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw Error("SHA-1 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

}  // namespace anticonc
