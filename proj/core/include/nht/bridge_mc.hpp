#pragma once

#include <vector>

#include "nht/common.hpp"
#include "nht/kernels.hpp"
#include "nht/potentials.hpp"
#include "nht/rng.hpp"
#include "nht/trace_types.hpp"

namespace nht {

// Raised when a Monte Carlo estimator degenerates (all-zero weights, proposal
// mismatch detected by effective sample size).
class EstimatorError : public std::runtime_error {
 public:
  explicit EstimatorError(const std::string& what) : std::runtime_error(what) {}
};

// A free path sampled from x on the uniform grid s_j = j t/(k+1), carrying the
// endpoint-reweighting factor p_{t-s_k}(Y_k - x) / p_t(0).  For skeleton
// functionals F, E_free[F * weight] = E_{x,x}[F].
struct BridgeSkeleton {
  std::vector<double> times;
  std::vector<std::vector<double>> positions;
  std::vector<double> endpoint;
  double importance_weight = 0.0;
};

struct McResult {
  double value = 0.0;
  double std_error = 0.0;
};

struct OccupationCheck {
  McResult lhs_estimate;
  double rhs_exact = 0.0;
};

// Bridge Monte Carlo engine for one operator family.  Construction builds the
// kernel evaluator tables once; all estimators are deterministic functions of
// (seed, parameters) regardless of worker count.
class BridgeMc {
 public:
  explicit BridgeMc(const KernelSpec& spec);

  const KernelSpec& spec() const { return spec_; }
  const KernelEvaluator& kernel() const { return eval_; }

  // Free Levy increment over time dt (exact draw for every variant).
  std::vector<double> sample_increment(double dt, CounterRng& rng) const;

  BridgeSkeleton sample_free_skeleton(const std::vector<double>& x, double t, int k,
                                      CounterRng& rng) const;

  // E_{x,x}^t[e^{-int_0^t V(X_s) ds} - 1], left-endpoint Riemann sum on the
  // skeleton grid.
  McResult bridge_expectation(const PotentialSpec& V, const std::vector<double>& x,
                              double t, int k, size_t n, CounterRng rng) const;

  // Trace difference p_t(0) int E_{x,x}[...] dx with a Gaussian importance
  // proposal over x matched to V's mass profile.
  TraceEstimate trace_mc(const PotentialSpec& V, double t, int k, size_t n_paths,
                         size_t n_x, CounterRng rng) const;

  // MC estimate of int E_{x,x}[(int_0^t V ds)^power] dx, power in {1, 2}.
  McResult moment_of_time_integral(const PotentialSpec& V, double t, int power, int k,
                                   size_t n, CounterRng rng) const;

  // Single-time (bias-free) check of int E_{x,x}[int_0^t |V|] dx = t ||V||_1.
  OccupationCheck occupation_identity_check(const PotentialSpec& V, double t, size_t n,
                                            CounterRng rng) const;

  // Single-time estimator of E_{0,0}^t int_0^t |X_s|^gamma ds.
  McResult bridge_moment_estimate(double t, double gamma, size_t n, CounterRng rng) const;

  // Default skeleton resolution for a horizon t.
  static int default_k(double t);

 private:
  KernelSpec spec_;
  KernelEvaluator eval_;
};

// Direct Brownian-bridge moment via the B_s - (s/t) B_t construction (variance
// 2s per coordinate); independent alpha = 2 cross-check, no reweighting.
McResult brownian_bridge_moment(double t, double gamma, size_t n, CounterRng rng, int d = 1);

// Discretized Brownian bridge path on j t/k, j = 0..k (endpoint pinned at 0).
std::vector<std::vector<double>> brownian_bridge_path(double t, int k, CounterRng& rng,
                                                      int d = 1);

}  // namespace nht
