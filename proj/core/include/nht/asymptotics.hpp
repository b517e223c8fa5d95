#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nht/common.hpp"
#include "nht/kernel_spec.hpp"
#include "nht/potentials.hpp"
#include "nht/trace_types.hpp"

namespace nht {

// Regression failures: too few points, degenerate design, signal below the
// noise floor.
class FitError : public std::runtime_error {
 public:
  explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

struct TraceSample {
  double t = 0.0;
  double value = 0.0;
  double error = 0.0;  // one-sigma (mc) or discretization budget (spectral)
  std::string method;
};

TraceSample to_sample(const TraceEstimate& est);

struct AsymptoticFit {
  std::vector<std::array<double, 2>> normalized;  // (t, trace / p_t(0)), sorted by t
  double fitted_c1 = 0.0;
  double fitted_c2 = 0.0;
  double predicted_c1 = 0.0;  // -int V
  double predicted_c2 = 0.0;  // (1/2) int V^2
};

// Weighted least squares of trace / p_t(0) against c1 t + c2 t^2.  Needs at
// least 5 samples spanning a decade in t.
AsymptoticFit fit_expansion(const KernelSpec& spec, const std::vector<TraceSample>& samples,
                            const PotentialSpec& V, const QuadratureConfig& cfg);

struct ExponentFit {
  double exponent = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Theil-Sen slope of log y against log x with a bootstrap confidence interval
// (interval widened to contain the point estimate).
ExponentFit log_log_slope(const std::vector<std::array<double, 2>>& points,
                          uint64_t seed = 7);

// Robust slope of log |rho(t)| vs log t where rho is the trace residual after
// removing the predicted first- and second-order terms.  Throws FitError when
// the residual is below the per-sample error floor everywhere.
ExponentFit remainder_exponent(const KernelSpec& spec, const std::vector<TraceSample>& samples,
                               const PotentialSpec& V, const QuadratureConfig& cfg,
                               uint64_t seed = 7);

// Log-log slope of occupation-moment estimates against t.
ExponentFit moment_exponent_fit(const std::vector<std::array<double, 2>>& t_and_moment,
                                uint64_t seed = 7);

// CSV round-trip, header "t,method,value,error".
std::string samples_to_csv(const std::vector<TraceSample>& samples);
std::vector<TraceSample> samples_from_csv(const std::string& text);

}  // namespace nht
