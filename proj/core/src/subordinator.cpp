#include "nht/subordinator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "nht/quadrature.hpp"

namespace nht {
namespace detail {

double log_kanter_a(double q, double u) {
  // Guard the endpoints; callers integrate over the open interval.
  double su = std::sin(u);
  double sq = std::sin(q * u);
  double s1q = std::sin((1.0 - q) * u);
  return (q * std::log(sq) + (1.0 - q) * std::log(s1q) - std::log(su)) / (1.0 - q);
}

// eta_1(s) = q/(1-q) s^{-1/(1-q)} (1/pi) int_0^pi A(u) exp(-A(u) s^{-q/(1-q)}) du
double eta1_direct(double q, double s, const QuadratureConfig& cfg) {
  if (!(s > 0)) throw ValidationError("subordinator density needs s > 0");
  double log_xfac = -(q / (1.0 - q)) * std::log(s);
  auto arg_at = [q, log_xfac](double u) {
    double la = log_kanter_a(q, u);
    double e = la + log_xfac;  // log(A * s^{-q/(1-q)})
    if (e > 690.0) return -1e300;
    return la - std::exp(e);
  };
  // The unnormalized integrand exp(arg) spans hundreds of e-folds for extreme
  // s; scan for the peak and integrate relative to it.
  double arg_max = -1e300, u_peak = 0.5 * M_PI;
  const int n_scan = 512;
  for (int i = 1; i < n_scan; ++i) {
    double u = M_PI * i / n_scan;
    double a = arg_at(u);
    if (a > arg_max) {
      arg_max = a;
      u_peak = u;
    }
  }
  if (arg_max < -700.0) return 0.0;
  Integrand f = [&](double u) {
    double z = arg_at(u) - arg_max;
    return z < -700.0 ? 0.0 : std::exp(z);
  };
  QuadratureConfig qc = cfg;
  qc.abs_tol = 1e-300;  // integrand can be uniformly tiny; rely on rel_tol
  double integral;
  try {
    integral = integrate(f, 1e-12, M_PI - 1e-12, qc);
  } catch (const QuadratureError&) {
    // Sharply peaked integrand; retry with a split at the peak.
    integral = integrate(f, 1e-12, u_peak, qc) + integrate(f, u_peak, M_PI - 1e-12, qc);
  }
  if (integral <= 0) return 0.0;
  double log_pref = std::log(q / (1.0 - q)) - std::log(s) / (1.0 - q) - std::log(M_PI);
  double lv = log_pref + arg_max + std::log(integral);
  return lv < -700.0 ? 0.0 : std::exp(lv);
}

namespace {

// Left-tail decay: -log eta_1(s) ~ (1-q) q^{q/(1-q)} s^{-q/(1-q)} as s -> 0.
double left_tail_scale(double q) { return (1.0 - q) * std::pow(q, q / (1.0 - q)); }

}  // namespace

Eta1Table::Eta1Table(double q) : q_(q) {
  // Support cutoff where the density falls below ~1e-260.
  double c = left_tail_scale(q);
  s_lo_ = std::pow(c / 600.0, (1.0 - q) / q);
  s_hi_ = 1e4;
  if (s_lo_ > 0.5) s_lo_ = 0.5 * s_lo_;  // keep some margin for q near 1
  int n = 2500;
  if (q > 0.85) n = 6000;  // density sharpens toward a spike at s = 1
  log_lo_ = std::log(s_lo_);
  step_ = (std::log(s_hi_) - log_lo_) / (n - 1);
  log_g_.resize(n);
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-10;
  for (int i = 0; i < n; ++i) {
    double s = std::exp(log_lo_ + i * step_);
    double g = eta1_direct(q, s, cfg);
    log_g_[i] = g > 0 ? std::log(g) : -750.0;
  }
  // Three-point finite-difference slopes for cubic Hermite interpolation.
  slope_.resize(n);
  for (int i = 0; i < n; ++i) {
    int a = std::max(0, i - 1), b = std::min(n - 1, i + 1);
    slope_[i] = (log_g_[b] - log_g_[a]) / ((b - a) * step_);
  }
}

double Eta1Table::tail_density(double s) const {
  // Asymptotic series: eta_1(s) = (1/pi) sum_n (-1)^{n+1} Gamma(nq+1)/n! sin(pi n q) s^{-nq-1}
  double sum = 0.0;
  double sign = 1.0;
  double fact = 1.0;
  for (int n = 1; n <= 4; ++n) {
    fact *= n;
    sum += sign * std::tgamma(n * q_ + 1.0) / fact * std::sin(M_PI * n * q_) *
           std::pow(s, -n * q_ - 1.0);
    sign = -sign;
  }
  return std::max(0.0, sum / M_PI);
}

double Eta1Table::density(double s) const {
  if (s <= s_lo_) return 0.0;
  if (s >= s_hi_) return tail_density(s);
  double u = (std::log(s) - log_lo_) / step_;
  int i = std::min(static_cast<int>(u), static_cast<int>(log_g_.size()) - 2);
  double t = u - i;
  double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  double h10 = t * (1 - t) * (1 - t);
  double h01 = t * t * (3 - 2 * t);
  double h11 = t * t * (t - 1);
  double lg = h00 * log_g_[i] + h10 * step_ * slope_[i] + h01 * log_g_[i + 1] +
              h11 * step_ * slope_[i + 1];
  return lg < -700.0 ? 0.0 : std::exp(lg);
}

const Eta1Table& Eta1Table::get(double q) {
  static std::mutex mu;
  static std::map<double, std::unique_ptr<Eta1Table>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(q);
  if (it == cache.end())
    it = cache.emplace(q, std::unique_ptr<Eta1Table>(new Eta1Table(q))).first;
  return *it->second;
}

}  // namespace detail

double eta_density(const SubordinatorSpec& spec, double t, double s,
                   const QuadratureConfig& cfg, bool* underflow) {
  spec.validate();
  if (!(t > 0) || !(s > 0)) throw ValidationError("eta_density needs t, s > 0");
  if (underflow) *underflow = false;
  double q = spec.index;
  // eta_t(s) = t^{-1/q} eta_1(s t^{-1/q})
  double scale = std::pow(t, -1.0 / q);
  double g = detail::eta1_direct(q, s * scale, cfg) * scale;
  double v = g;
  if (spec.tempering) {
    double m = spec.tempering->mass_m;
    double rate = std::pow(m, 2.0 / spec.tempering->alpha);
    v = std::exp(m * t - rate * s) * g;
  }
  if (v == 0.0 && underflow) *underflow = true;
  return v;
}

double sample_subordinator(const SubordinatorSpec& spec, double t, CounterRng& rng) {
  spec.validate();
  if (spec.tempering)
    throw ValidationError("tempered subordinator sampling is out of scope");
  if (!(t > 0)) throw ValidationError("sample_subordinator needs t > 0");
  double q = spec.index;
  double u = M_PI * rng.uniform();
  double e = rng.exponential();
  double log_s1 = ((1.0 - q) / q) * (detail::log_kanter_a(q, u) - std::log(e));
  return std::pow(t, 1.0 / q) * std::exp(log_s1);
}

std::vector<double> subordinated_gaussian_sample(const SubordinatorSpec& spec, double t,
                                                 int d, CounterRng& rng) {
  if (d < 1) throw ValidationError("dimension must be >= 1");
  double s = sample_subordinator(spec, t, rng);
  double sd = std::sqrt(2.0 * s);
  std::vector<double> x(static_cast<size_t>(d));
  for (auto& xi : x) xi = sd * rng.normal();
  return x;
}

}  // namespace nht
