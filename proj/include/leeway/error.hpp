#pragma once

#include <stdexcept>
#include <string>

namespace leeway {

enum class ErrorKind { domain, fit, parse, data, estimate, usage };

/// Base error for the toolkit. kind() feeds the CLI's machine-readable
/// "error[kind]: message" prefix and its exit-code mapping.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  const char* kind_name() const {
    switch (kind_) {
      case ErrorKind::domain:   return "domain";
      case ErrorKind::fit:      return "fit";
      case ErrorKind::parse:    return "parse";
      case ErrorKind::data:     return "data";
      case ErrorKind::estimate: return "estimate";
      case ErrorKind::usage:    return "usage";
    }
    return "unknown";
  }

 private:
  ErrorKind kind_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& m) : Error(ErrorKind::domain, m) {}
};
struct FitError : Error {
  explicit FitError(const std::string& m) : Error(ErrorKind::fit, m) {}
};
struct ParseError : Error {
  explicit ParseError(const std::string& m) : Error(ErrorKind::parse, m) {}
};
struct DataError : Error {
  explicit DataError(const std::string& m) : Error(ErrorKind::data, m) {}
};
struct EstimateError : Error {
  explicit EstimateError(const std::string& m) : Error(ErrorKind::estimate, m) {}
};
struct UsageError : Error {
  explicit UsageError(const std::string& m) : Error(ErrorKind::usage, m) {}
};

}  // namespace leeway
