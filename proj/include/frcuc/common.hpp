#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace frcuc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Error taxonomy; the CLI maps each class to a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class InvariantError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

inline bool nearly_equal(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Compensated (Kahan) accumulator so aggregate sums do not depend on
// floating-point association order quirks between builds.
class KahanSum {
 public:
  void add(double v) {
    double y = v - carry_;
    double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace frcuc
