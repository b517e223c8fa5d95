#include "nht/kernels.hpp"

#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_bessel.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "nht/subordinator.hpp"

namespace nht {

namespace {

// StableSum with a = 0 must be indistinguishable from Stable everywhere.
KernelSpec effective(const KernelSpec& spec) {
  if (const auto* s = std::get_if<StableSum>(&spec.variant)) {
    if (s->weight_a == 0.0) {
      KernelSpec out = spec;
      out.variant = Stable{s->alpha};
      return out;
    }
  }
  return spec;
}

double gaussian_kernel(int d, double t, double r) {
  return std::pow(4.0 * M_PI * t, -0.5 * d) * std::exp(-r * r / (4.0 * t));
}

double cauchy_kernel(int d, double t, double r) {
  // Multivariate Cauchy: Gamma((d+1)/2) / pi^{(d+1)/2} * t / (t^2+r^2)^{(d+1)/2}
  double nu = 0.5 * (d + 1);
  return std::tgamma(nu) / std::pow(M_PI, nu) * t / std::pow(t * t + r * r, nu);
}

// t * psi(u * t^{-1/alpha}) written in a form stable as t -> 0.
double scaled_exponent(const KernelSpec& spec, double t, double u) {
  if (const auto* s = std::get_if<Stable>(&spec.variant)) {
    (void)s;
    return std::pow(u, spec.alpha());
  }
  if (const auto* s = std::get_if<StableSum>(&spec.variant)) {
    return std::pow(u, s->alpha) + std::pow(s->weight_a, s->beta) *
                                       std::pow(t, 1.0 - s->beta / s->alpha) *
                                       std::pow(u, s->beta);
  }
  const auto& s = std::get<Relativistic>(spec.variant);
  double mt = s.mass_m * t;
  return std::pow(u * u + std::pow(mt, 2.0 / s.alpha), 0.5 * s.alpha) - mt;
}

double stable_zero_closed_form(int d, double alpha, double t) {
  return std::pow(t, -static_cast<double>(d) / alpha) * sphere_area(d) *
         std::tgamma(d / alpha) / (std::pow(2.0 * M_PI, d) * alpha);
}

// int_0^inf (4 pi s)^{-d/2} e^{-r^2/4s} w(s) eta_t(s) ds with eta from the
// cached time-1 table and optional tempering weight w(s) = e^{mt - rate s}.
double subordination_integral(double q, double t, double r, int d,
                              const Relativistic* temper, const QuadratureConfig& cfg) {
  const auto& table = detail::Eta1Table::get(q);
  double tau = std::pow(t, 1.0 / q);
  double lo = tau * table.support_lo();
  // The Gaussian factor kills everything below r^2 / (4 * 745).
  lo = std::max(lo, r * r / 2980.0 * 0.5);
  double rate = 0.0, log_pref = 0.0;
  if (temper) {
    rate = std::pow(temper->mass_m, 2.0 / temper->alpha);
    log_pref = temper->mass_m * t;
  }
  // Upper cutoff: grow until the dropped tail is negligible relative to the
  // size of the result itself (which can be far below abs_tol in deep tails).
  double hi = std::max({tau, r * r, lo * 10});
  double tail_c = t / (std::tgamma(1.0 - q) * q);
  double scale = std::pow(4.0 * M_PI * hi, -0.5 * d) *
                 std::min(1.0, tail_c * std::pow(hi, -q));
  double thresh = std::max(1e-280, 1e-3 * cfg.rel_tol * scale);
  for (int i = 0; i < 40; ++i) {
    double tail = std::pow(4.0 * M_PI * hi, -0.5 * d) *
                  std::min(1.0, tail_c * std::pow(hi, -q));
    if (temper) tail *= std::exp(log_pref - rate * hi);
    if (tail < thresh || hi > 1e290) break;
    hi *= 10.0;
  }
  if (!(hi > lo)) return 0.0;
  double inv_tau = 1.0 / tau;
  Integrand f = [&](double v) {
    double s = std::exp(v);
    double eta = table.density(s * inv_tau) * inv_tau;
    if (eta == 0.0) return 0.0;
    double log_g = -0.5 * d * std::log(4.0 * M_PI * s) - r * r / (4.0 * s);
    if (temper) log_g += log_pref - rate * s;
    if (log_g < -700.0) return 0.0;
    return s * std::exp(log_g) * eta;  // jacobian of s = e^v
  };
  return integrate(f, std::log(lo), std::log(hi), cfg);
}

// Double subordination for the sum process: S = S_alpha + a^2 S_beta.
double sum_subordination(const StableSum& s, int d, double t, double r,
                         const QuadratureConfig& cfg, int panels, int nodes) {
  double qa = 0.5 * s.alpha, qb = 0.5 * s.beta;
  const auto& ta = detail::Eta1Table::get(qa);
  const auto& tb = detail::Eta1Table::get(qb);
  double tau_a = std::pow(t, 1.0 / qa), tau_b = std::pow(t, 1.0 / qb);
  double a2 = s.weight_a * s.weight_a;
  auto upper = [&](double q, double tau) {
    double hi = std::max(tau, 1.0);
    double tail_c = t / (std::tgamma(1.0 - q) * q);
    while (tail_c * std::pow(hi, -q) > cfg.abs_tol * 1e-3 && hi < 1e200) hi *= 10.0;
    return hi;
  };
  LogGaussRule ra(tau_a * ta.support_lo(), upper(qa, tau_a), panels, nodes);
  LogGaussRule rb(tau_b * tb.support_lo(), upper(qb, tau_b), panels, nodes);
  double inv_a = 1.0 / tau_a, inv_b = 1.0 / tau_b;
  return ra.apply([&](double s1) {
    double eta1 = ta.density(s1 * inv_a) * inv_a;
    if (eta1 == 0.0) return 0.0;
    double inner = rb.apply([&](double s2) {
      double eta2 = tb.density(s2 * inv_b) * inv_b;
      if (eta2 == 0.0) return 0.0;
      double stot = s1 + a2 * s2;
      double lg = -0.5 * d * std::log(4.0 * M_PI * stot) - r * r / (4.0 * stot);
      return lg < -700.0 ? 0.0 : std::exp(lg) * eta2;
    });
    return eta1 * inner;
  });
}

double eval_subordination(const KernelSpec& spec, double t, double r,
                          const QuadratureConfig& cfg) {
  if (const auto* s = std::get_if<Stable>(&spec.variant)) {
    if (s->alpha == 2.0) return gaussian_kernel(spec.dimension, t, r);
    return subordination_integral(0.5 * s->alpha, t, r, spec.dimension, nullptr, cfg);
  }
  if (const auto* s = std::get_if<StableSum>(&spec.variant)) {
    return sum_subordination(*s, spec.dimension, t, r, cfg, 40, 12);
  }
  const auto& s = std::get<Relativistic>(spec.variant);
  return subordination_integral(0.5 * s.alpha, t, r, spec.dimension, &s, cfg);
}

double eval_fourier(const KernelSpec& spec, double t, double r, const QuadratureConfig& cfg) {
  int d = spec.dimension;
  if (d > 3) throw ValidationError("Fourier cross-check route limited to d <= 3");
  double alpha = spec.alpha();
  double ts = std::pow(t, 1.0 / alpha);  // frequency scale
  // Substituted variable u = rho * t^{1/alpha}; r_s = r / t^{1/alpha}.
  double rs = r / ts;
  double pref = std::pow(ts, -d);
  if (d == 1) {
    Integrand f = [&](double u) { return std::exp(-scaled_exponent(spec, t, u)) / M_PI; };
    return pref * (rs == 0.0 ? integrate_upper(f, 0.0, cfg)
                             : integrate_fourier_cos(f, 0.0, rs, cfg));
  }
  if (d == 2) {
    Integrand f = [&](double u) {
      return u * gsl_sf_bessel_J0(u * rs) * std::exp(-scaled_exponent(spec, t, u)) /
             (2.0 * M_PI);
    };
    return pref * integrate_upper(f, 0.0, cfg);
  }
  if (rs == 0.0) {
    Integrand f = [&](double u) {
      return u * u * std::exp(-scaled_exponent(spec, t, u)) / (2.0 * M_PI * M_PI);
    };
    return pref * integrate_upper(f, 0.0, cfg);
  }
  Integrand f = [&](double u) {
    return u * std::exp(-scaled_exponent(spec, t, u)) / (2.0 * M_PI * M_PI * rs);
  };
  return pref * integrate_fourier_sin(f, 0.0, rs, cfg);
}

}  // namespace

double kernel_at_zero(const KernelSpec& spec_in, double t, const QuadratureConfig& cfg) {
  KernelSpec spec = effective(spec_in);
  spec.validate();
  cfg.validate();
  if (!(t > 0)) throw ValidationError("kernel_at_zero needs t > 0");
  if (const auto* s = std::get_if<Stable>(&spec.variant))
    return stable_zero_closed_form(spec.dimension, s->alpha, t);
  return kernel_at_zero_quadrature(spec, t, cfg);
}

double kernel_at_zero_quadrature(const KernelSpec& spec_in, double t,
                                 const QuadratureConfig& cfg) {
  KernelSpec spec = effective(spec_in);
  spec.validate();
  cfg.validate();
  if (!(t > 0)) throw ValidationError("kernel_at_zero needs t > 0");
  int d = spec.dimension;
  double alpha = spec.alpha();
  Integrand f = [&](double u) {
    return std::pow(u, d - 1) * std::exp(-scaled_exponent(spec, t, u));
  };
  double integral = integrate_upper(f, 0.0, cfg);
  return std::pow(t, -static_cast<double>(d) / alpha) * sphere_area(d) /
         std::pow(2.0 * M_PI, d) * integral;
}

double eval_kernel(const KernelSpec& spec_in, double t, double radius,
                   const QuadratureConfig& cfg, KernelRoute route) {
  KernelSpec spec = effective(spec_in);
  spec.validate();
  cfg.validate();
  if (!(t > 0) || !(radius >= 0)) throw ValidationError("eval_kernel needs t > 0, radius >= 0");
  if (const auto* s = std::get_if<Stable>(&spec.variant)) {
    if (route != KernelRoute::kFourier && route != KernelRoute::kBoth) {
      if (s->alpha == 2.0) return gaussian_kernel(spec.dimension, t, radius);
      if (s->alpha == 1.0) return cauchy_kernel(spec.dimension, t, radius);
    }
  }
  switch (route) {
    case KernelRoute::kAuto:
    case KernelRoute::kSubordination:
      return eval_subordination(spec, t, radius, cfg);
    case KernelRoute::kFourier:
      return eval_fourier(spec, t, radius, cfg);
    case KernelRoute::kBoth: {
      double a = eval_subordination(spec, t, radius, cfg);
      double b = eval_fourier(spec, t, radius, cfg);
      double scale = std::max({std::abs(a), std::abs(b), cfg.abs_tol});
      if (std::abs(a - b) > 10.0 * cfg.rel_tol * scale) {
        std::ostringstream os;
        os << "kernel route disagreement at t=" << t << " r=" << radius
           << ": subordination=" << a << " fourier=" << b;
        throw RouteDisagreement(a, b, os.str());
      }
      return a;
    }
  }
  throw ValidationError("unknown kernel route");
}

// ---------------------------------------------------------------------------
// KernelEvaluator

struct KernelEvaluator::Impl {
  KernelSpec spec;
  enum class Mode { closed_gauss, closed_cauchy, stable_table, relativistic, sum } mode;
  double alpha = 0;
  double q = 0;

  // radial table of p_1 for general stable, in zeta = log1p(r)
  std::vector<double> log_p, slope;
  double zeta_max = 0, dzeta = 0, r_max = 0, tail_slope = 0;

  // fixed Gauss-Legendre nodes on [0,1] for the relativistic fast path
  std::vector<double> gl_x, gl_w;

  double stable_p1(double r) const {
    if (r >= r_max)
      return std::exp(log_p.back() + tail_slope * (std::log(r) - std::log(r_max)));
    double u = std::log1p(r) / dzeta;
    int i = std::min(static_cast<int>(u), static_cast<int>(log_p.size()) - 2);
    double t = u - i;
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    double h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t);
    double h11 = t * t * (t - 1);
    return std::exp(h00 * log_p[i] + h10 * dzeta * slope[i] + h01 * log_p[i + 1] +
                    h11 * dzeta * slope[i + 1]);
  }

  double relativistic_eval(double t, double r) const {
    const auto& s = std::get<Relativistic>(spec.variant);
    const auto& table = detail::Eta1Table::get(q);
    double tau = std::pow(t, 1.0 / q);
    double rate = std::pow(s.mass_m, 2.0 / s.alpha);
    double lo = std::max(tau * table.support_lo(), r * r / 2980.0 * 0.5);
    double hi = std::max({tau, r * r, lo * 10.0});
    int d = spec.dimension;
    double tail_c = t / (std::tgamma(1.0 - q) * q);
    for (int i = 0; i < 30; ++i) {
      double tail = std::pow(4.0 * M_PI * hi, -0.5 * d) *
                    std::min(1.0, tail_c * std::pow(hi, -q)) * std::exp(-rate * hi);
      if (tail < 1e-14 || hi > 1e250) break;
      hi *= 10.0;
    }
    double inv_tau = 1.0 / tau;
    double vlo = std::log(lo), vhi = std::log(hi);
    const int panels = 24;
    double h = (vhi - vlo) / panels;
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
      double v0 = vlo + p * h;
      for (size_t i = 0; i < gl_x.size(); ++i) {
        double v = v0 + h * gl_x[i];
        double sv = std::exp(v);
        double eta = table.density(sv * inv_tau) * inv_tau;
        if (eta == 0.0) continue;
        double lg = -0.5 * d * std::log(4.0 * M_PI * sv) - r * r / (4.0 * sv) +
                    s.mass_m * t - rate * sv;
        if (lg < -700.0) continue;
        acc += h * gl_w[i] * sv * std::exp(lg) * eta;
      }
    }
    return acc;
  }
};

KernelEvaluator::KernelEvaluator(const KernelSpec& spec_in) : impl_(new Impl) {
  KernelSpec spec = effective(spec_in);
  spec.validate();
  impl_->spec = spec;
  impl_->alpha = spec.alpha();
  impl_->q = 0.5 * impl_->alpha;
  if (spec.is_stable()) {
    if (impl_->alpha == 2.0) {
      impl_->mode = Impl::Mode::closed_gauss;
      return;
    }
    if (impl_->alpha == 1.0) {
      impl_->mode = Impl::Mode::closed_cauchy;
      return;
    }
    impl_->mode = Impl::Mode::stable_table;
    // p_1 radial table; scaling p_t(r) = t^{-d/alpha} p_1(t^{-1/alpha} r)
    const int n = 1600;
    impl_->r_max = 1e8;
    impl_->zeta_max = std::log1p(impl_->r_max);
    impl_->dzeta = impl_->zeta_max / (n - 1);
    impl_->log_p.resize(n);
    // the interpolated eta table limits achievable smoothness; 1e-9 is the
    // tightest tolerance the adaptive rule can certify against it
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-9;
    for (int i = 0; i < n; ++i) {
      double r = std::expm1(i * impl_->dzeta);
      double v = subordination_integral(impl_->q, 1.0, r, spec.dimension, nullptr, cfg);
      impl_->log_p[i] = std::log(std::max(v, 1e-300));
    }
    impl_->slope.resize(n);
    for (int i = 0; i < n; ++i) {
      int a = std::max(0, i - 1), b = std::min(n - 1, i + 1);
      impl_->slope[i] = (impl_->log_p[b] - impl_->log_p[a]) / ((b - a) * impl_->dzeta);
    }
    impl_->tail_slope = -(spec.dimension + impl_->alpha);
  } else if (spec.is_relativistic()) {
    impl_->mode = Impl::Mode::relativistic;
    detail::Eta1Table::get(impl_->q);  // warm the shared cache
    gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(16);
    for (size_t i = 0; i < 16; ++i) {
      double x, w;
      gsl_integration_glfixed_point(0.0, 1.0, i, &x, &w, t);
      impl_->gl_x.push_back(x);
      impl_->gl_w.push_back(w);
    }
    gsl_integration_glfixed_table_free(t);
  } else {
    impl_->mode = Impl::Mode::sum;
    const auto& s = std::get<StableSum>(spec.variant);
    detail::Eta1Table::get(0.5 * s.alpha);
    detail::Eta1Table::get(0.5 * s.beta);
  }
}

KernelEvaluator::~KernelEvaluator() = default;
KernelEvaluator::KernelEvaluator(KernelEvaluator&&) noexcept = default;

const KernelSpec& KernelEvaluator::spec() const { return impl_->spec; }

double KernelEvaluator::operator()(double t, double r) const {
  if (!(t > 0) || !(r >= 0)) throw ValidationError("KernelEvaluator needs t > 0, r >= 0");
  int d = impl_->spec.dimension;
  switch (impl_->mode) {
    case Impl::Mode::closed_gauss:
      return gaussian_kernel(d, t, r);
    case Impl::Mode::closed_cauchy:
      return cauchy_kernel(d, t, r);
    case Impl::Mode::stable_table: {
      double ts = std::pow(t, -1.0 / impl_->alpha);
      return std::pow(ts, d) * impl_->stable_p1(ts * r);
    }
    case Impl::Mode::relativistic:
      return impl_->relativistic_eval(t, r);
    case Impl::Mode::sum: {
      QuadratureConfig cfg;
      return sum_subordination(std::get<StableSum>(impl_->spec.variant), d, t, r, cfg, 40, 12);
    }
  }
  return 0.0;
}

double KernelEvaluator::at_zero(double t) const {
  switch (impl_->mode) {
    case Impl::Mode::closed_gauss:
    case Impl::Mode::closed_cauchy:
    case Impl::Mode::stable_table:
      return stable_zero_closed_form(impl_->spec.dimension, impl_->alpha, t);
    default: {
      QuadratureConfig cfg;
      return kernel_at_zero_quadrature(impl_->spec, t, cfg);
    }
  }
}

// ---------------------------------------------------------------------------
// Envelopes

EnvelopePair envelope_bounds(const KernelSpec& spec_in, double t, double radius) {
  KernelSpec spec = effective(spec_in);
  spec.validate();
  if (!(t > 0) || !(radius >= 0)) throw ValidationError("envelope needs t > 0, radius >= 0");
  int d = spec.dimension;
  double shape;
  if (const auto* s = std::get_if<Stable>(&spec.variant)) {
    double on_diag = std::pow(t, -d / s->alpha);
    shape = radius == 0.0 ? on_diag
                          : std::min(on_diag, t / std::pow(radius, d + s->alpha));
  } else if (const auto* s = std::get_if<StableSum>(&spec.variant)) {
    double ab = std::pow(s->weight_a, s->beta);
    double diag = std::min(std::pow(ab * t, -d / s->beta), std::pow(t, -d / s->alpha));
    if (radius == 0.0) {
      shape = diag;
    } else {
      double off = t / std::pow(radius, d + s->alpha) +
                   ab * t / std::pow(radius, d + s->beta);
      shape = std::min(diag, off);
    }
  } else {
    const auto& rel = std::get<Relativistic>(spec.variant);
    if (t > 1.0)
      throw ValidationError("relativistic envelope estimate out of validity range (t > 1)");
    double on_diag = std::pow(t, -d / rel.alpha);
    if (radius == 0.0) {
      shape = on_diag;
    } else {
      QuadratureConfig cfg;
      double psi =
          psi_envelope(std::pow(rel.mass_m, 1.0 / rel.alpha) * radius, cfg, d, rel.alpha);
      shape = std::min(on_diag, t * psi / std::pow(radius, d + rel.alpha));
    }
  }
  return EnvelopePair{shape, shape, 1.0};
}

EnvelopeCalibration calibrate_envelope(const KernelSpec& spec, const QuadratureConfig& cfg) {
  double lo = 1e300, hi = 0.0;
  KernelEvaluator eval(spec);
  bool rel = spec.is_relativistic();
  for (double t : {0.05, 0.1, 0.5, 1.0}) {
    if (rel && t > 1.0) continue;
    for (double r = 1e-2; r <= 30.0; r *= 1.9) {
      double p = eval(t, r);
      double shape = envelope_bounds(spec, t, r).upper;
      if (p <= 0 || shape <= 0) continue;
      double ratio = p / shape;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  (void)cfg;
  return EnvelopeCalibration{lo, hi};
}

// ---------------------------------------------------------------------------
// Psi envelope

double psi_envelope_direct(double r, const QuadratureConfig& cfg, int d, double alpha) {
  if (!(r >= 0)) throw ValidationError("psi_envelope needs r >= 0");
  if (r == 0.0) return 1.0;  // the integral reduces to the normalizing Gamma integral
  double nu = 0.5 * (d + alpha);
  double log_norm = -(d + alpha) * std::log(2.0) - std::lgamma(nu);
  Integrand f = [&](double v) {
    double s = std::exp(v);
    double lg = nu * std::log(s) - 0.25 * s - r * r / s + log_norm;
    return lg < -700.0 ? 0.0 : std::exp(lg);  // includes jacobian via nu (not nu-1)
  };
  // substitution s = e^v; peak near s ~ 2r for large r, s ~ 4 nu otherwise
  double s_peak = std::max(2.0 * r, 4.0 * nu);
  return integrate(f, std::log(s_peak) - 30.0, std::log(s_peak) + 12.0, cfg);
}

namespace {

class PsiTable {
 public:
  PsiTable(int d, double alpha) : d_(d), alpha_(alpha) {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-11;
    const int n = 600;
    lo_ = std::log(1e-3);
    step_ = (std::log(10.0) - lo_) / (n - 1);
    log_psi_.resize(n);
    for (int i = 0; i < n; ++i)
      log_psi_[i] = std::log(psi_envelope_direct(std::exp(lo_ + i * step_), cfg, d, alpha));
    slope_.resize(n);
    for (int i = 0; i < n; ++i) {
      int a = std::max(0, i - 1), b = std::min(n - 1, i + 1);
      slope_[i] = (log_psi_[b] - log_psi_[a]) / ((b - a) * step_);
    }
    // match c * e^{-r} r^{(d+alpha-1)/2} at r = 10
    double expo = 0.5 * (d + alpha - 1);
    asym_log_c_ = log_psi_.back() + 10.0 - expo * std::log(10.0);
    asym_expo_ = expo;
  }

  double eval(double r) const {
    if (r <= 1e-3) {
      QuadratureConfig cfg;
      return psi_envelope_direct(r, cfg, d_, alpha_);
    }
    if (r >= 10.0) return std::exp(asym_log_c_ - r + asym_expo_ * std::log(r));
    double u = (std::log(r) - lo_) / step_;
    int i = std::min(static_cast<int>(u), static_cast<int>(log_psi_.size()) - 2);
    double t = u - i;
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    double h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t);
    double h11 = t * t * (t - 1);
    return std::exp(h00 * log_psi_[i] + h10 * step_ * slope_[i] + h01 * log_psi_[i + 1] +
                    h11 * step_ * slope_[i + 1]);
  }

 private:
  int d_;
  double alpha_;
  double lo_, step_;
  std::vector<double> log_psi_, slope_;
  double asym_log_c_, asym_expo_;
};

}  // namespace

double psi_envelope(double r, const QuadratureConfig& cfg, int d, double alpha) {
  (void)cfg;
  if (!(r >= 0)) throw ValidationError("psi_envelope needs r >= 0");
  if (r == 0.0) return 1.0;
  static std::mutex mu;
  static std::map<std::pair<int, double>, std::unique_ptr<PsiTable>> cache;
  const PsiTable* table;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(d, alpha);
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, std::make_unique<PsiTable>(d, alpha)).first;
    table = it->second.get();
  }
  return std::min(1.0, table->eval(r));
}

// ---------------------------------------------------------------------------
// Generator

TestFunction gaussian_test_function(double center, double width) {
  double w = width;
  return TestFunction{
      [center, w](double x) {
        double z = (x - center) / w;
        return std::exp(-0.5 * z * z);
      },
      [center, w](double xi) {
        return std::complex<double>(w * std::sqrt(2.0 * M_PI) *
                                    std::exp(-0.5 * w * w * xi * xi)) *
               std::exp(std::complex<double>(0.0, -xi * center));
      }};
}

TestFunction modulated_gaussian_test_function(double mode_k, double window_width) {
  double w = window_width, k = mode_k;
  auto ghat = [w](double xi) { return w * std::sqrt(2.0 * M_PI) * std::exp(-0.5 * w * w * xi * xi); };
  return TestFunction{
      [k, w](double x) { return std::cos(k * x) * std::exp(-0.5 * x * x / (w * w)); },
      [ghat, k](double xi) {
        return std::complex<double>(0.5 * (ghat(xi - k) + ghat(xi + k)));
      }};
}

GeneratorResult apply_generator(const KernelSpec& spec_in, const TestFunction& fn, double x,
                                const QuadratureConfig& cfg) {
  KernelSpec spec = effective(spec_in);
  spec.validate();
  if (!spec.is_stable()) throw ValidationError("apply_generator supports the Stable variant only");
  if (spec.dimension != 1) throw ValidationError("apply_generator implemented for d = 1");
  double alpha = spec.alpha();
  if (alpha >= 2.0) throw ValidationError("alpha = 2 is the local Laplacian, out of scope here");

  double fx = fn.f(x);
  // Symmetrized PV integrand removes the singularity for alpha < 2.
  Integrand pv = [&](double y) {
    return (fn.f(x + y) + fn.f(x - y) - 2.0 * fx) / std::pow(y, 1.0 + alpha);
  };
  // Below delta the symmetrized increment is swamped by cancellation noise;
  // use the Taylor value f''(x) y^2 there instead.
  const double delta = 1e-3, h = 1e-3;
  double fpp = (fn.f(x + h) + fn.f(x - h) - 2.0 * fx) / (h * h);
  double pv_integral = fpp * std::pow(delta, 2.0 - alpha) / (2.0 - alpha) +
                       integrate(pv, delta, 1.0, cfg) + integrate_upper(pv, 1.0, cfg);

  double paper_c = std::numeric_limits<double>::quiet_NaN();
  double half_dm = 0.5 * (1.0 - alpha);
  if (!(half_dm <= 0.0 && std::abs(half_dm - std::round(half_dm)) < 1e-12)) {
    paper_c = std::tgamma(half_dm) /
              (std::pow(2.0, alpha) * std::sqrt(M_PI) * std::tgamma(0.5 * alpha));
  }

  Integrand mult = [&](double xi) {
    std::complex<double> v = fn.fhat(xi) * std::exp(std::complex<double>(0.0, xi * x));
    return std::pow(xi, alpha) * v.real() / M_PI;
  };
  double multiplier = -integrate_upper(mult, 0.0, cfg);

  double ratio = pv_integral != 0.0 ? multiplier / pv_integral
                                    : std::numeric_limits<double>::quiet_NaN();
  return GeneratorResult{pv_integral, paper_c * pv_integral, multiplier, ratio};
}

}  // namespace nht
