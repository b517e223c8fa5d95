#pragma once

#include <string>
#include <vector>

#include "nht/common.hpp"
#include "nht/kernel_spec.hpp"

namespace nht {

struct RatioWitness {
  double max_ratio = 0.0;
  double argmax_radius = 0.0;
};

// max over the radial grid of min(p_s(x), p_{t-s}(x)) / p_t(0); must stay
// bounded under grid refinement.  Requires 0 < s < t (and t <= 1 for the
// relativistic family, whose bound is a small-time statement).
RatioWitness check_3p(const KernelSpec& spec, double t, double s,
                      const std::vector<double>& x_grid, const QuadratureConfig& cfg);

// max over the grid of [p_s(x) p_{t-s}(x) / p_t(0)] / [p_s(x) + p_{t-s}(x)].
RatioWitness check_5p(const KernelSpec& spec, double t, double s,
                      const std::vector<double>& x_grid, const QuadratureConfig& cfg);

struct ScalarCheck {
  size_t points_checked = 0;
  size_t violations = 0;
  double worst_margin = 0.0;  // most negative slack observed (>= 0 when passing)
};

// Pointwise check of -a <= e^{-a} - 1 <= -a (1 + b e^b / 2) over all pairs
// with -b <= a <= 0, b >= 0.
ScalarCheck check_scalar_inequality(const std::vector<double>& a_grid,
                                    const std::vector<double>& b_grid);

struct MomentResult {
  bool finite = false;
  double value = 0.0;         // meaningful when finite
  double growth_ratio = 0.0;  // late-decade increment ratio of the cutoff integral
};

// E|X_1|^gamma = omega_d int r^{gamma+d-1} p_1(r) dr for the given family.
// Divergence (gamma at or above the tail index) is diagnosed by non-decaying
// increments under cutoff doubling and reported, never returned as a number.
MomentResult fractional_moment(const KernelSpec& spec, double gamma,
                               const QuadratureConfig& cfg);

MomentResult check_fractional_moment(double alpha, double gamma, int d,
                                     const QuadratureConfig& cfg);

}  // namespace nht
