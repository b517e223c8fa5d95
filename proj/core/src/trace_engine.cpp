#include "nht/trace_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "nht/quadrature.hpp"

namespace nht {

namespace {

// Spherically averaged autocorrelation g_bar(r) of V, g(z) = int V(y+z)V(y)dy,
// on a quadratically spaced r-grid with linear interpolation.  A single
// Gaussian well has the closed form depth^2 (pi sigma^2 / 2)^{d/2}
// e^{-r^2/(2 sigma^2)}; everything else is tabulated by Simpson quadrature.
class Autocorrelation {
 public:
  Autocorrelation(const PotentialSpec& V) : d_(V.dimension()) {
    if (V.shapes().size() == 1) {
      if (const auto* gw = std::get_if<GaussianWell>(&V.shapes()[0])) {
        gauss_amp_ = gw->depth * gw->depth *
                     std::pow(M_PI * gw->width * gw->width / 2.0, 0.5 * d_);
        gauss_width_ = gw->width;
        r_max_ = 40.0 * gw->width;
        return;
      }
    }
    if (d_ > 2) throw ValidationError("autocorrelation tabulation supports d <= 2");
    box_bounds(V);
    double diam = 0.0;
    for (int c = 0; c < d_; ++c) diam += (hi_[c] - lo_[c]) * (hi_[c] - lo_[c]);
    r_max_ = std::sqrt(diam);
    const int m = 96;
    grid_r_.resize(m + 1);
    grid_g_.resize(m + 1);
    for (int j = 0; j <= m; ++j) {
      double frac = static_cast<double>(j) / m;
      grid_r_[j] = r_max_ * frac * frac;
      grid_g_[j] = averaged(V, grid_r_[j]);
    }
  }

  double r_max() const { return r_max_; }

  double operator()(double r) const {
    if (gauss_width_ > 0)
      return gauss_amp_ * std::exp(-r * r / (2.0 * gauss_width_ * gauss_width_));
    if (r >= r_max_) return 0.0;
    auto it = std::upper_bound(grid_r_.begin(), grid_r_.end(), r);
    size_t j = std::max<ptrdiff_t>(1, it - grid_r_.begin());
    double w = (r - grid_r_[j - 1]) / (grid_r_[j] - grid_r_[j - 1]);
    return (1.0 - w) * grid_g_[j - 1] + w * grid_g_[j];
  }

 private:
  void box_bounds(const PotentialSpec& V) {
    lo_.assign(d_, 1e300);
    hi_.assign(d_, -1e300);
    for (const auto& shape : V.shapes()) {
      const auto* gw = std::get_if<GaussianWell>(&shape);
      const auto* cb = std::get_if<CompactBump>(&shape);
      double rad = gw ? 8.0 * gw->width : cb->radius;
      const auto& center = gw ? gw->center : cb->center;
      for (int c = 0; c < d_; ++c) {
        lo_[c] = std::min(lo_[c], center[c] - rad);
        hi_[c] = std::max(hi_[c], center[c] + rad);
      }
    }
  }

  template <class F>
  static double simpson(const F& f, double a, double b, int n) {
    double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
  }

  double averaged(const PotentialSpec& V, double r) const {
    if (d_ == 1) {
      auto g_at = [&](double z) {
        return simpson([&](double y) { return V({y + z}) * V({y}); }, lo_[0], hi_[0], 800);
      };
      return 0.5 * (g_at(r) + g_at(-r));
    }
    auto g_at = [&](double z0, double z1) {
      auto inner = [&](double y0) {
        return simpson(
            [&](double y1) {
              return V({y0 + z0, y1 + z1}) * V({y0, y1});
            },
            lo_[1], hi_[1], 128);
      };
      return simpson(inner, lo_[0], hi_[0], 128);
    };
    const int n_angle = 16;
    double sum = 0.0;
    for (int i = 0; i <= n_angle; ++i) {
      double th = M_PI * i / n_angle;
      double v = g_at(r * std::cos(th), r * std::sin(th));
      sum += (i == 0 || i == n_angle) ? 0.5 * v : v;
    }
    return sum / n_angle;
  }

  int d_;
  std::vector<double> lo_, hi_;
  double r_max_ = 0.0;
  double gauss_amp_ = 0.0, gauss_width_ = 0.0;
  std::vector<double> grid_r_, grid_g_;
};

}  // namespace

double duhamel_term1(const KernelSpec& spec, const PotentialSpec& V, double t,
                     const QuadratureConfig& cfg) {
  if (V.dimension() != spec.dimension) throw ValidationError("potential dimension mismatch");
  return -t * kernel_at_zero(spec, t, cfg) * V.exact_norms().int_v;
}

double duhamel_term2(const KernelSpec& spec, const PotentialSpec& V, double t,
                     const QuadratureConfig& cfg) {
  if (V.dimension() != spec.dimension) throw ValidationError("potential dimension mismatch");
  if (spec.dimension > 2) throw ValidationError("duhamel_term2 supports d <= 2");
  const auto norms = V.exact_norms();
  if (norms.l1 == 0.0) return 0.0;
  const int d = spec.dimension;
  const double g0 = norms.int_v2;
  const double pt0 = kernel_at_zero(spec, t, cfg);
  const double diagonal = 0.5 * t * t * pt0 * g0;

  Autocorrelation g(V);
  KernelEvaluator p(spec);
  const double r_cut = g.r_max();
  const double omega = sphere_area(d);

  // K(u) = int (g(z) - g(0)) p_{t-u}(z) p_u(z) dz; the g(0) tail beyond the
  // autocorrelation support is integrated explicitly so the near-origin part
  // keeps the (g - g0) cancellation that tames the small-u kernel spike.
  LogGaussRule near_rule(1e-7 * r_cut, r_cut, 30, 10);
  LogGaussRule far_rule(r_cut, 1e6 * r_cut, 20, 8);
  auto big_k = [&](double u) {
    double near = near_rule.apply([&](double r) {
      return (g(r) - g0) * p(t - u, r) * p(u, r) * std::pow(r, d - 1);
    });
    double far = far_rule.apply([&](double r) {
      return p(t - u, r) * p(u, r) * std::pow(r, d - 1);
    });
    return omega * (near - g0 * far);
  };

  // K is symmetric about t/2, so int_0^t (t-u) K du = t int_0^{t/2} K du.
  LogGaussRule u_rule(1e-6 * t, 0.5 * t, 14, 8);
  double cross = t * u_rule.apply(big_k);
  return diagonal + cross;
}

double series_remainder_bound(const KernelSpec& spec, const PotentialSpec& V, double t,
                              int terms_kept, const QuadratureConfig& cfg) {
  if (terms_kept < 1) throw ValidationError("remainder bound needs at least one kept term");
  const auto norms = V.exact_norms();
  double bound = kernel_at_zero(spec, t, cfg) * std::pow(t, terms_kept + 1) *
                 std::pow(norms.sup, terms_kept) * norms.l1 * std::exp(t * norms.sup) /
                 std::tgamma(terms_kept + 2.0);
  return bound;
}

TraceSandwich theorem1_sandwich(const KernelSpec& spec, const PotentialSpec& V, double t,
                                const QuadratureConfig& cfg) {
  if (!V.is_nonpositive()) throw ValidationError("sandwich bounds require a nonpositive potential");
  const auto norms = V.exact_norms();
  const double pt0 = kernel_at_zero(spec, t, cfg);
  TraceSandwich s;
  s.lower = pt0 * t * norms.l1;
  s.upper = s.lower + 0.5 * pt0 * t * t * norms.l1 * norms.sup * std::exp(t * norms.sup);
  return s;
}

DuhamelResult duhamel_trace(const KernelSpec& spec, const PotentialSpec& V, double t,
                            const QuadratureConfig& cfg) {
  DuhamelResult r;
  r.term1 = duhamel_term1(spec, V, t, cfg);
  r.term2 = duhamel_term2(spec, V, t, cfg);
  r.remainder_bound = series_remainder_bound(spec, V, t, 2, cfg);
  r.estimate.value = r.term1 + r.term2;
  r.estimate.method = "duhamel";
  r.estimate.t = t;
  r.estimate.spec_hash = spec.hash();
  r.estimate.potential_hash = V.hash();
  return r;
}

double theorem_bound_rhs(const KernelSpec& spec, const PotentialSpec& V, double t,
                         double gamma, double holder_m, int bound_family,
                         const QuadratureConfig& cfg) {
  if (bound_family < 2 || bound_family > 4)
    throw ValidationError("bound_family must be 2 (stable), 3 (sum), or 4 (relativistic)");
  if (bound_family == 2 && !spec.is_stable())
    throw ValidationError("bound_family 2 applies to the stable family");
  if (bound_family == 3 && !spec.is_sum())
    throw ValidationError("bound_family 3 applies to the stable-sum family");
  if (bound_family == 4) {
    if (!spec.is_relativistic())
      throw ValidationError("bound_family 4 applies to the relativistic family");
    if (t > 1.0) throw ValidationError("relativistic bound is stated for t <= 1 only");
  }
  const double alpha = spec.alpha();
  double constraint_index = alpha;
  if (bound_family == 3) constraint_index = std::get<StableSum>(spec.variant).beta;
  if (constraint_index <= 1.0) {
    if (!(gamma > 0 && gamma < std::min(constraint_index, 1.0)))
      throw ValidationError("holder order must satisfy 0 < gamma < min(index, 1)");
  } else if (!(gamma > 0 && gamma <= 1.0)) {
    throw ValidationError("holder order must satisfy 0 < gamma <= 1");
  }
  const auto norms = V.exact_norms();
  double shape = norms.sup * norms.sup * std::exp(t * norms.sup) * t * t * t +
                 holder_m * std::pow(t, gamma / alpha + 2.0);
  if (bound_family == 3) {
    double beta = std::get<StableSum>(spec.variant).beta;
    shape += holder_m * std::pow(t, gamma / beta + 2.0);
  }
  return norms.l1 * kernel_at_zero(spec, t, cfg) * shape;
}

void SpectralGrid::validate() const {
  if (!(half_width > 0)) throw ValidationError("half_width must be positive");
  if (modes < 32 || (modes & (modes - 1)) != 0)
    throw ValidationError("modes must be a power of two, at least 32");
}

namespace {

// Dense symmetric collocation matrix of psi(-i d/dx) + V on the torus [-L, L]
// with N modes; returns the eigenvalues of H and the free multipliers psi_k.
void assemble_and_solve(const KernelSpec& spec, const PotentialSpec& V, double half_width,
                        int n, std::vector<double>* eig, std::vector<double>* free_psi) {
  const double L = half_width;
  std::vector<double> psi(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) psi[k] = char_exponent(spec, M_PI * k / L);

  free_psi->clear();
  free_psi->reserve(n);
  for (int k = -n / 2; k < n / 2; ++k) free_psi->push_back(psi[std::abs(k)]);

  std::vector<double> row(n);
  for (int m = 0; m < n; ++m) {
    double s = psi[0] + (m % 2 ? -1.0 : 1.0) * psi[n / 2];
    for (int k = 1; k < n / 2; ++k) s += 2.0 * psi[k] * std::cos(2.0 * M_PI * k * m / n);
    row[m] = s / n;
  }

  Eigen::MatrixXd h(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) h(j, l) = row[(j - l + n) % n];
  for (int j = 0; j < n; ++j) h(j, j) += V({-L + 2.0 * L * j / n});

  double asym = (h - h.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) {
    std::ostringstream os;
    os << "collocation matrix lost symmetry: max asymmetry " << asym;
    throw std::runtime_error(os.str());
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("symmetric eigendecomposition failed");
  eig->assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
}

}  // namespace

SpectralOracle::SpectralOracle(const KernelSpec& spec, const PotentialSpec& V,
                               const SpectralGrid& grid) {
  spec.validate();
  grid.validate();
  if (spec.dimension != 1 || V.dimension() != 1)
    throw ValidationError("spectral oracle is one-dimensional");
  assemble_and_solve(spec, V, grid.half_width, grid.modes, &eig_coarse_, &free_coarse_);
  assemble_and_solve(spec, V, grid.half_width, 2 * grid.modes, &eig_fine_, &free_fine_);
  assemble_and_solve(spec, V, 2.0 * grid.half_width, 2 * grid.modes, &eig_box_, &free_box_);
  spec_hash_ = spec.hash();
  potential_hash_ = V.hash();
}

double SpectralOracle::trace_single(const std::vector<double>& eig,
                                    const std::vector<double>& free_psi, double t) const {
  double s = 0.0;
  for (double lam : eig) s += std::exp(-t * lam);
  for (double psi : free_psi) s -= std::exp(-t * psi);
  return s;
}

TraceEstimate SpectralOracle::trace(double t) const {
  if (!(t > 0)) throw ValidationError("horizon must be positive");
  double coarse = trace_single(eig_coarse_, free_coarse_, t);
  double fine = trace_single(eig_fine_, free_fine_, t);
  double box = trace_single(eig_box_, free_box_, t);
  TraceEstimate est;
  est.value = fine;
  est.n_samples = eig_fine_.size();
  est.method = "spectral";
  est.t = t;
  est.spec_hash = spec_hash_;
  est.potential_hash = potential_hash_;
  est.budget = std::fabs(fine - coarse) + std::fabs(box - coarse);
  return est;
}

TraceEstimate spectral_oracle_trace(const KernelSpec& spec, const PotentialSpec& V,
                                    double t, const SpectralGrid& grid) {
  return SpectralOracle(spec, V, grid).trace(t);
}

}  // namespace nht
