#pragma once

#include <functional>
#include <vector>

#include "nht/common.hpp"

namespace nht {

using Integrand = std::function<double(double)>;

// Adaptive Gauss-Kronrod on [a, b].
double integrate(const Integrand& f, double a, double b, const QuadratureConfig& cfg);

// Adaptive integration on [a, +inf).
double integrate_upper(const Integrand& f, double a, const QuadratureConfig& cfg);

// \int_a^inf f(x) cos(omega x) dx  (or sin) with oscillatory-tail handling.
double integrate_fourier_cos(const Integrand& f, double a, double omega,
                             const QuadratureConfig& cfg);
double integrate_fourier_sin(const Integrand& f, double a, double omega,
                             const QuadratureConfig& cfg);

// Fixed Gauss-Legendre panels on log-spaced subdivisions of [a, b], a > 0.
// Non-adaptive fast path for inner loops; ~15 digits for smooth integrands
// once the panel count resolves the integrand's log-scale structure.
class LogGaussRule {
 public:
  LogGaussRule(double a, double b, int panels, int nodes_per_panel = 12);
  template <class F>
  double apply(F&& f) const {
    double s = 0.0;
    for (size_t i = 0; i < x_.size(); ++i) s += w_[i] * f(x_[i]);
    return s;
  }

 private:
  std::vector<double> x_, w_;
};

}  // namespace nht
