#pragma once

#include <optional>
#include <vector>

#include "nht/common.hpp"
#include "nht/rng.hpp"

namespace nht {

struct SubordinatorSpec {
  double index;  // in (0,1); equals alpha/2 for the stable process
  struct Tempering {
    double mass_m;  // > 0
    double alpha;   // stability index of the relativistic process
  };
  std::optional<Tempering> tempering;

  void validate() const {
    if (!(index > 0 && index < 1)) throw ValidationError("subordinator index must be in (0,1)");
    if (tempering && !(tempering->mass_m > 0))
      throw ValidationError("tempering mass must be positive");
  }
};

// Density eta_t(s) of the one-sided stable subordinator with Laplace
// transform E[e^{-lambda S_t}] = e^{-t lambda^q}, q = index.  With tempering
// the exponential weight e^{mt} e^{-m^{2/alpha} s} is folded in, which is the
// density of the relativistic subordinator.  A value of exactly 0 means the
// point is in the far left tail (underflow); *underflow is set when provided.
double eta_density(const SubordinatorSpec& spec, double t, double s,
                   const QuadratureConfig& cfg, bool* underflow = nullptr);

// Exact draw of S_t by the Kanter construction.  Untempered specs only.
double sample_subordinator(const SubordinatorSpec& spec, double t, CounterRng& rng);

// X = sqrt(2 S_t) Z with Z standard d-dim Gaussian; X ~ p_t^{(alpha)} under
// the (4 pi s)^{-d/2} e^{-|x|^2/4s} Gaussian convention.
std::vector<double> subordinated_gaussian_sample(const SubordinatorSpec& spec, double t,
                                                 int d, CounterRng& rng);

namespace detail {

// log of Kanter's A-function for index q, u in (0, pi):
//   A(u) = [sin(qu)^q sin((1-q)u)^{1-q} / sin(u)]^{1/(1-q)}
double log_kanter_a(double q, double u);

// Direct Zolotarev-integral evaluation of the time-1 density (no caching).
double eta1_direct(double q, double s, const QuadratureConfig& cfg);

// Cached log-log interpolation table of eta_1 for fast inner-loop use.
// Immutable after construction; shared lookups are read-only.
class Eta1Table {
 public:
  static const Eta1Table& get(double q);

  double density(double s) const;     // 0 below the support cutoff
  double support_lo() const { return s_lo_; }

 private:
  explicit Eta1Table(double q);
  double q_;
  double s_lo_, s_hi_;
  double log_lo_, step_;
  std::vector<double> log_g_;   // log eta_1 on log-spaced grid
  std::vector<double> slope_;   // Hermite slopes d(log g)/d(log s)
  double tail_density(double s) const;
};

}  // namespace detail

}  // namespace nht
