#pragma once

#include <stdexcept>
#include <string>

namespace threshold_lab {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A size/term-count guard was exceeded. `limit()` names the guard.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(std::string limit, const std::string& what)
      : std::runtime_error(what), limit_(std::move(limit)) {}
  const std::string& limit() const noexcept { return limit_; }

 private:
  std::string limit_;
};

// Root bracketing failed; the message carries both endpoints.
class BracketError : public std::runtime_error {
 public:
  BracketError(double lo, double hi, const std::string& what)
      : std::runtime_error(what), lo_(lo), hi_(hi) {}
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

}  // namespace threshold_lab
