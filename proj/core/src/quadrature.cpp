#include "nht/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <sstream>

namespace nht {

namespace {

struct GslInit {
  GslInit() { gsl_set_error_handler_off(); }
};

void ensure_gsl_handler_off() {
  static GslInit init;
  (void)init;
}

double call_integrand(double x, void* p) {
  return (*static_cast<const Integrand*>(p))(x);
}

struct Workspace {
  explicit Workspace(size_t n) : w(gsl_integration_workspace_alloc(n)) {}
  ~Workspace() { gsl_integration_workspace_free(w); }
  gsl_integration_workspace* w;
};

[[noreturn]] void fail(const char* where, int status, double err) {
  std::ostringstream os;
  os << "quadrature did not converge in " << where << " (gsl status " << status
     << ", est. error " << err << ")";
  throw QuadratureError(os.str());
}

}  // namespace

double integrate(const Integrand& f, double a, double b, const QuadratureConfig& cfg) {
  ensure_gsl_handler_off();
  Workspace ws(static_cast<size_t>(cfg.radial_nodes) * 4);
  gsl_function gf{&call_integrand, const_cast<Integrand*>(&f)};
  double result = 0.0, err = 0.0;
  int status = gsl_integration_qags(&gf, a, b, cfg.abs_tol, cfg.rel_tol,
                                    static_cast<size_t>(cfg.radial_nodes) * 4, ws.w,
                                    &result, &err);
  if (status == GSL_EROUND || status == GSL_ETOL) {
    // Accept roundoff-limited results when the reported error is still small
    // relative to the requested tolerances scaled by a safety factor.
    if (err < 100 * (cfg.abs_tol + cfg.rel_tol * std::abs(result))) return result;
  }
  if (status != GSL_SUCCESS) fail("integrate", status, err);
  return result;
}

double integrate_upper(const Integrand& f, double a, const QuadratureConfig& cfg) {
  ensure_gsl_handler_off();
  Workspace ws(static_cast<size_t>(cfg.radial_nodes) * 4);
  gsl_function gf{&call_integrand, const_cast<Integrand*>(&f)};
  double result = 0.0, err = 0.0;
  int status = gsl_integration_qagiu(&gf, a, cfg.abs_tol, cfg.rel_tol,
                                     static_cast<size_t>(cfg.radial_nodes) * 4, ws.w,
                                     &result, &err);
  if (status == GSL_EROUND || status == GSL_ETOL || status == GSL_EDIVERGE) {
    if (err < 100 * (cfg.abs_tol + cfg.rel_tol * std::abs(result))) return result;
  }
  if (status != GSL_SUCCESS) fail("integrate_upper", status, err);
  return result;
}

namespace {

double integrate_fourier(const Integrand& f, double a, double omega, bool use_sine,
                         const QuadratureConfig& cfg) {
  ensure_gsl_handler_off();
  if (omega == 0.0) {
    if (use_sine) return 0.0;
    return integrate_upper(f, a, cfg);
  }
  size_t limit = static_cast<size_t>(cfg.radial_nodes) * 4;
  Workspace ws(limit);
  Workspace cyc(limit);
  gsl_integration_qawo_table* table = gsl_integration_qawo_table_alloc(
      omega, 1.0, use_sine ? GSL_INTEG_SINE : GSL_INTEG_COSINE, 48);
  gsl_function gf{&call_integrand, const_cast<Integrand*>(&f)};
  double result = 0.0, err = 0.0;
  int status = gsl_integration_qawf(&gf, a, cfg.abs_tol, limit, ws.w, cyc.w, table,
                                    &result, &err);
  gsl_integration_qawo_table_free(table);
  if (status == GSL_EROUND || status == GSL_ETOL) {
    if (err < 100 * (cfg.abs_tol + cfg.rel_tol * std::abs(result))) return result;
  }
  if (status != GSL_SUCCESS) fail("integrate_fourier", status, err);
  return result;
}

}  // namespace

double integrate_fourier_cos(const Integrand& f, double a, double omega,
                             const QuadratureConfig& cfg) {
  return integrate_fourier(f, a, omega, false, cfg);
}

double integrate_fourier_sin(const Integrand& f, double a, double omega,
                             const QuadratureConfig& cfg) {
  return integrate_fourier(f, a, omega, true, cfg);
}

LogGaussRule::LogGaussRule(double a, double b, int panels, int nodes_per_panel) {
  if (!(a > 0) || !(b > a)) throw ValidationError("LogGaussRule requires 0 < a < b");
  ensure_gsl_handler_off();
  gsl_integration_glfixed_table* t =
      gsl_integration_glfixed_table_alloc(static_cast<size_t>(nodes_per_panel));
  double la = std::log(a), lb = std::log(b);
  double h = (lb - la) / panels;
  x_.reserve(static_cast<size_t>(panels) * nodes_per_panel);
  w_.reserve(x_.capacity());
  for (int p = 0; p < panels; ++p) {
    double u0 = la + p * h, u1 = u0 + h;
    for (int i = 0; i < nodes_per_panel; ++i) {
      double xi, wi;
      gsl_integration_glfixed_point(u0, u1, static_cast<size_t>(i), &xi, &wi, t);
      double x = std::exp(xi);
      x_.push_back(x);
      w_.push_back(wi * x);  // Jacobian of x = e^u
    }
  }
  gsl_integration_glfixed_table_free(t);
}

}  // namespace nht
