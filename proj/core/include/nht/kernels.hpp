#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "nht/common.hpp"
#include "nht/kernel_spec.hpp"
#include "nht/quadrature.hpp"

namespace nht {

struct EnvelopePair {
  double lower = 0.0;
  double upper = 0.0;
  double constant_hint = 1.0;
};

enum class KernelRoute {
  kAuto,           // closed form when available, else subordination
  kSubordination,  // Gaussian-subordination quadrature
  kFourier,        // radial Fourier inversion (d <= 3)
  kBoth,           // run both routes, cross-check, return subordination value
};

// Thrown by KernelRoute::kBoth when the two evaluation paths disagree by more
// than 10x the requested relative tolerance.  Carries both values.
class RouteDisagreement : public QuadratureError {
 public:
  RouteDisagreement(double subordination, double fourier, const std::string& what)
      : QuadratureError(what), subordination_value(subordination), fourier_value(fourier) {}
  double subordination_value;
  double fourier_value;
};

// p_t(0).  Stable uses the closed form t^{-d/alpha} omega_d Gamma(d/alpha) /
// ((2 pi)^d alpha); the other variants integrate the characteristic function.
double kernel_at_zero(const KernelSpec& spec, double t, const QuadratureConfig& cfg);

// Characteristic-function quadrature for p_t(0), available for every variant
// (independent check of the closed form).
double kernel_at_zero_quadrature(const KernelSpec& spec, double t,
                                 const QuadratureConfig& cfg);

// Radial density p_t(x) at |x| = radius.
double eval_kernel(const KernelSpec& spec, double t, double radius,
                   const QuadratureConfig& cfg, KernelRoute route = KernelRoute::kAuto);

// Fast repeated evaluation for Monte Carlo inner loops.  Builds radial tables
// once (stable variants) or uses fixed-node subordination quadrature
// (relativistic, sum).  Thread-safe after construction.
class KernelEvaluator {
 public:
  explicit KernelEvaluator(const KernelSpec& spec);
  ~KernelEvaluator();
  KernelEvaluator(KernelEvaluator&&) noexcept;

  double operator()(double t, double radius) const;
  double at_zero(double t) const;
  const KernelSpec& spec() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Two-sided bound shape function for the kernel family; lower == upper == shape,
// with constant_hint filled by empirical calibration (the papers' C's are
// never stated explicitly).
EnvelopePair envelope_bounds(const KernelSpec& spec, double t, double radius);

struct EnvelopeCalibration {
  double ratio_lo;  // min over the grid of p_t(r) / shape(t, r)
  double ratio_hi;  // max over the grid
};

// Observed ratio spread of kernel vs envelope shape over a log-spaced (t, r)
// grid; ratio_hi serves as the empirical constant_hint.
EnvelopeCalibration calibrate_envelope(const KernelSpec& spec, const QuadratureConfig& cfg);

// Psi(r) = 2^{-(d+alpha)} Gamma((d+alpha)/2)^{-1}
//          int_0^inf s^{(d+alpha)/2-1} e^{-s/4} e^{-r^2/s} ds,
// the decreasing envelope factor of the relativistic kernel; Psi(0) = 1.
// Cached log-spaced table below r = 10, asymptotic c e^{-r} r^{(d+alpha-1)/2}
// fit above.
double psi_envelope(double r, const QuadratureConfig& cfg, int d, double alpha);

// Uncached quadrature evaluation (cross-check for the table).
double psi_envelope_direct(double r, const QuadratureConfig& cfg, int d, double alpha);

// Smooth rapidly-decaying test function with a known Fourier transform,
// convention fhat(xi) = int f(x) e^{-i xi x} dx.
struct TestFunction {
  std::function<double(double)> f;
  std::function<std::complex<double>(double)> fhat;
};

TestFunction gaussian_test_function(double center, double width);
TestFunction modulated_gaussian_test_function(double mode_k, double window_width);

struct GeneratorResult {
  double pv_integral;     // symmetrized principal-value integral, no constant
  double pv_paper;        // pv_integral times Gamma((d-alpha)/2)/(2^alpha pi^{d/2} Gamma(alpha/2));
                          // NaN where that constant has a pole (alpha == d parity)
  double multiplier;      // Fourier-multiplier evaluation of -(-Delta)^{alpha/2} f at x
  double empirical_constant;  // multiplier / pv_integral
};

// Fractional-Laplacian action on a test function (d = 1, 0 < alpha < 2),
// by both the principal-value and the Fourier-multiplier route.
GeneratorResult apply_generator(const KernelSpec& spec, const TestFunction& f, double x,
                                const QuadratureConfig& cfg);

}  // namespace nht
