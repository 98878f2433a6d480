#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hou {

/// Failure categories. The CLI maps them onto exit codes.
enum class ErrorKind {
  config,          ///< malformed or inconsistent configuration
  domain,          ///< argument outside the region where an operation is defined
  numeric,         ///< non-finite values, blow-up, failed factorization
  assumption,      ///< a model assumption (A3/A4) fails at the requested point
  nonconvergence,  ///< an iterative method did not meet its tolerance
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::string key = {})
      : std::runtime_error(what), kind_(kind), key_(std::move(key)) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Config key or parameter the error refers to, if any.
  const std::string& key() const noexcept { return key_; }

 private:
  ErrorKind kind_;
  std::string key_;
};

[[noreturn]] inline void throw_config(const std::string& key, const std::string& msg) {
  throw Error(ErrorKind::config, key.empty() ? msg : key + ": " + msg, key);
}
[[noreturn]] inline void throw_domain(const std::string& msg) { throw Error(ErrorKind::domain, msg); }
[[noreturn]] inline void throw_numeric(const std::string& msg) { throw Error(ErrorKind::numeric, msg); }
[[noreturn]] inline void throw_assumption(const std::string& msg) {
  throw Error(ErrorKind::assumption, msg);
}
[[noreturn]] inline void throw_nonconvergence(const std::string& msg) {
  throw Error(ErrorKind::nonconvergence, msg);
}

}  // namespace hou
