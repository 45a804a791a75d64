#pragma once

#include <stdexcept>
#include <string>

namespace eals {

// Malformed input data: unreadable files, bad lines, duplicate pairs,
// dimension mismatches between artifacts.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A closed-form coordinate update hit a non-positive denominator. This means
// the weight model violates the nonnegativity assumption (or lambda is too
// small to compensate); the update is not a minimizer, so we refuse it.
class SingularUpdateError : public std::runtime_error {
 public:
  SingularUpdateError(const std::string& what, double denominator)
      : std::runtime_error(what), denominator_(denominator) {}
  double denominator() const { return denominator_; }

 private:
  double denominator_;
};

// Iterative routine (power iteration) exhausted its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

}  // namespace eals
