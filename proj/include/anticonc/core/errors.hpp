#pragma once

#include <stdexcept>
#include <string>

namespace anticonc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The inputs are valid but the requested method cannot handle them
/// (enumeration budget exceeded, no closed form for a continuous law, ...).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Malformed experiment configuration. `key()` names the offending key path.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionError(what);
}

}  // namespace anticonc
