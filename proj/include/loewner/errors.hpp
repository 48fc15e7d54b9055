#pragma once

#include <exception>
#include <stdexcept>
#include <string>

namespace loewner {

// Exit-code classes used by the CLI: config/data -> 2, numerical -> 3, io -> 4.
enum class ErrorKind { kConfig, kData, kDomain, kNumerical, kIo };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::kDomain, what) {}
};

/// Malformed or inconsistent interpolation data.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::kData, what) {}
};

/// Singular solves, degenerate pencils, overflow.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::kNumerical, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::kConfig, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

/// Exception of the concrete class matching `kind`.
inline std::exception_ptr make_error(ErrorKind kind, const std::string& what) {
  switch (kind) {
    case ErrorKind::kConfig: return std::make_exception_ptr(ConfigError(what));
    case ErrorKind::kData: return std::make_exception_ptr(DataError(what));
    case ErrorKind::kDomain: return std::make_exception_ptr(DomainError(what));
    case ErrorKind::kNumerical: return std::make_exception_ptr(NumericalError(what));
    case ErrorKind::kIo: return std::make_exception_ptr(IoError(what));
  }
  return std::make_exception_ptr(Error(kind, what));
}

}  // namespace loewner
