#include "nht/inequalities.hpp"

#include <algorithm>
#include <cmath>

#include "nht/kernels.hpp"
#include "nht/quadrature.hpp"

namespace nht {

namespace {

void validate_times(const KernelSpec& spec, double t, double s) {
  if (!(s > 0 && s < t)) throw ValidationError("need 0 < s < t");
  if (spec.is_relativistic() && t > 1.0)
    throw ValidationError("relativistic comparison inequalities are stated for t <= 1");
}

void require_grid(const std::vector<double>& x_grid) {
  if (x_grid.empty()) throw ValidationError("empty evaluation grid");
}

}  // namespace

RatioWitness check_3p(const KernelSpec& spec, double t, double s,
                      const std::vector<double>& x_grid, const QuadratureConfig& cfg) {
  validate_times(spec, t, s);
  require_grid(x_grid);
  KernelEvaluator p(spec);
  const double pt0 = p.at_zero(t);
  RatioWitness w;
  for (double r : x_grid) {
    double ratio = std::min(p(s, r), p(t - s, r)) / pt0;
    if (ratio > w.max_ratio) {
      w.max_ratio = ratio;
      w.argmax_radius = r;
    }
  }
  return w;
}

RatioWitness check_5p(const KernelSpec& spec, double t, double s,
                      const std::vector<double>& x_grid, const QuadratureConfig& cfg) {
  validate_times(spec, t, s);
  require_grid(x_grid);
  KernelEvaluator p(spec);
  const double pt0 = p.at_zero(t);
  RatioWitness w;
  for (double r : x_grid) {
    double a = p(s, r);
    double b = p(t - s, r);
    if (a + b == 0.0) continue;
    double ratio = (a * b / pt0) / (a + b);
    if (ratio > w.max_ratio) {
      w.max_ratio = ratio;
      w.argmax_radius = r;
    }
  }
  return w;
}

ScalarCheck check_scalar_inequality(const std::vector<double>& a_grid,
                                    const std::vector<double>& b_grid) {
  ScalarCheck out;
  out.worst_margin = 1e300;
  for (double b : b_grid) {
    if (!(b >= 0)) throw ValidationError("b grid must be nonnegative");
    for (double a_raw : a_grid) {
      double a = std::clamp(a_raw, -b, 0.0);
      double mid = std::expm1(-a);
      double lower_slack = mid - (-a);
      double upper_slack = -a * (1.0 + 0.5 * b * std::exp(b)) - mid;
      double margin = std::min(lower_slack, upper_slack);
      ++out.points_checked;
      if (margin < -1e-12) ++out.violations;
      out.worst_margin = std::min(out.worst_margin, margin);
    }
  }
  return out;
}

MomentResult fractional_moment(const KernelSpec& spec, double gamma,
                               const QuadratureConfig& cfg) {
  if (!(gamma > 0)) throw ValidationError("moment order must be positive");
  spec.validate();
  const int d = spec.dimension;
  const double omega = sphere_area(d);
  KernelEvaluator p(spec);
  auto integrand = [&](double r) {
    return omega * std::pow(r, gamma + d - 1) * p(1.0, r);
  };

  LogGaussRule core_rule(1e-8, 100.0, 40, 12);
  double core = core_rule.apply(integrand);

  // Decade-by-decade tail increments; a non-decaying sequence flags a moment
  // order at or above the tail index.
  std::vector<double> inc;
  for (int k = 2; k < 8; ++k) {
    LogGaussRule rule(std::pow(10.0, k), std::pow(10.0, k + 1), 6, 10);
    inc.push_back(rule.apply(integrand));
  }
  MomentResult out;
  double last = inc[inc.size() - 1];
  double prev = inc[inc.size() - 2];
  out.growth_ratio = prev > 0 ? last / prev : 0.0;
  if (out.growth_ratio >= 0.97 && last > 1e-300) {
    out.finite = false;
    return out;
  }
  out.finite = true;
  out.value = core;
  for (double v : inc) out.value += v;
  if (out.growth_ratio > 0 && out.growth_ratio < 1.0)
    out.value += last * out.growth_ratio / (1.0 - out.growth_ratio);
  return out;
}

MomentResult check_fractional_moment(double alpha, double gamma, int d,
                                     const QuadratureConfig& cfg) {
  return fractional_moment(KernelSpec{Stable{alpha}, d}, gamma, cfg);
}

}  // namespace nht
