#pragma once

#include <stdexcept>
#include <string>

namespace mcnf {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed document text (not valid JSON, bad number, bad QUBO line).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed document that does not match the expected schema.
// `path()` is a JSON-pointer-like location such as "/commodities/0/origin".
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class UnknownId : public Error {
 public:
  using Error::Error;
};

class PathExplosion : public Error {
 public:
  PathExplosion(std::string commodity, std::size_t cap)
      : Error("path enumeration for commodity '" + commodity + "' exceeded cap of " +
              std::to_string(cap)),
        commodity_(std::move(commodity)) {}
  const std::string& commodity() const noexcept { return commodity_; }

 private:
  std::string commodity_;
};

class InfeasibleCommodity : public Error {
 public:
  explicit InfeasibleCommodity(std::string commodity)
      : Error("commodity '" + commodity + "' has no path satisfying its turnaround time"),
        commodity_(std::move(commodity)) {}
  const std::string& commodity() const noexcept { return commodity_; }

 private:
  std::string commodity_;
};

// Assignment does not match the variables of the model it is evaluated against.
class KeyMismatch : public Error {
 public:
  using Error::Error;
};

class SizeMismatch : public Error {
 public:
  using Error::Error;
};

class BoundExceedsIncumbent : public Error {
 public:
  using Error::Error;
};

}  // namespace mcnf
