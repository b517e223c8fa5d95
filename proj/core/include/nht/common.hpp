#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace nht {

// Error raised when an adaptive quadrature cannot reach the requested
// tolerances.  Never swallowed: callers either handle it or the run aborts.
class QuadratureError : public std::runtime_error {
 public:
  explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid parameter combinations (bad spec fields, violated preconditions).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

struct QuadratureConfig {
  int radial_nodes = 256;       // subintervals for adaptive rules
  double radial_cutoff = 1e8;   // upper truncation of radial/subordinator integrals
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;

  void validate() const {
    if (radial_nodes < 16) throw ValidationError("radial_nodes must be >= 16");
    if (!(radial_cutoff > 0)) throw ValidationError("radial_cutoff must be positive");
    if (!(rel_tol > 0) || !(abs_tol > 0))
      throw ValidationError("tolerances must be strictly positive");
  }
};

// Surface area of the unit sphere in R^d.
inline double sphere_area(int d) {
  if (d < 1) throw ValidationError("dimension must be >= 1");
  return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace nht
