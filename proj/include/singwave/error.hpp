#pragma once

#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>

namespace singwave {

using cplx = std::complex<double>;

/// Base class for failures of a numerical procedure (as opposed to bad input).
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A series, continued fraction or iteration did not converge within its budget.
class convergence_error : public numeric_error {
 public:
  convergence_error(const std::string& what, double magnitude, int iterations)
      : numeric_error(format(what, magnitude, iterations)),
        magnitude_(magnitude),
        iterations_(iterations) {}

  double magnitude() const noexcept { return magnitude_; }
  int iterations() const noexcept { return iterations_; }

 private:
  static std::string format(const std::string& what, double magnitude, int iterations) {
    std::ostringstream os;
    os << what << " (|z| = " << magnitude << ", iterations = " << iterations << ")";
    return os.str();
  }

  double magnitude_;
  int iterations_;
};

/// Invalid user configuration; the CLI maps this to exit code 2.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace singwave
