#pragma once

#include <string>
#include <vector>

#include "nht/common.hpp"
#include "nht/kernels.hpp"
#include "nht/potentials.hpp"
#include "nht/trace_types.hpp"

namespace nht {

// First-order term of the small-time expansion of Tr(e^{-tH} - e^{-tH_0}):
//   -t p_t(0) int V.
double duhamel_term1(const KernelSpec& spec, const PotentialSpec& V, double t,
                     const QuadratureConfig& cfg);

// Second-order term,
//   (1/2) t^2 p_t(0) int V^2  +  int_0^t (t - u) K(u) du,
// K(u) = int (g(z) - g(0)) p_{t-u}(z) p_u(z) dz with g the autocorrelation
// g(z) = int V(y + z) V(y) dy.  The g(0) piece reproduces the first summand,
// so only the correlation correction needs quadrature.
double duhamel_term2(const KernelSpec& spec, const PotentialSpec& V, double t,
                     const QuadratureConfig& cfg);

// Bound on the tail of the Duhamel series after N terms:
//   p_t(0) t^{N+1} ||V||_inf^N ||V||_1 e^{t ||V||_inf} / (N+1)!.
double series_remainder_bound(const KernelSpec& spec, const PotentialSpec& V, double t,
                              int terms_kept, const QuadratureConfig& cfg);

struct TraceSandwich {
  double lower;  // p_t(0) t ||V||_1
  double upper;  // lower + (1/2) p_t(0) t^2 ||V||_1 ||V||_inf e^{t ||V||_inf}
};

// Two-sided bracket for |Tr(e^{-tH} - e^{-tH_0})| valid for nonpositive V.
TraceSandwich theorem1_sandwich(const KernelSpec& spec, const PotentialSpec& V, double t,
                                const QuadratureConfig& cfg);

// Duhamel estimate term1 + term2 packaged with a rigorous remainder bound.
struct DuhamelResult {
  double term1;
  double term2;
  double remainder_bound;
  TraceEstimate estimate;  // value = term1 + term2
};

DuhamelResult duhamel_trace(const KernelSpec& spec, const PotentialSpec& V, double t,
                            const QuadratureConfig& cfg);

// Right-hand-side shape of the two-term remainder bounds,
//   ||V||_1 p_t(0) (||V||_inf^2 e^{t ||V||_inf} t^3 + M t^{gamma/alpha + 2}
//                   [+ M t^{gamma/beta + 2} for the sum family]),
// with the unknown theorem constant set to 1.  M is the Holder certificate of
// V at order gamma.  Only the t-exponent is meaningful; never compare in
// absolute terms.  bound_family selects which hypothesis set applies:
// 2 = stable, 3 = stable sum, 4 = relativistic (t <= 1 required).
double theorem_bound_rhs(const KernelSpec& spec, const PotentialSpec& V, double t,
                         double gamma, double holder_m, int bound_family,
                         const QuadratureConfig& cfg);

// Periodized finite-mode reference solution, d = 1 only.  The free operator is
// diagonal in the discrete Fourier basis on [-L, L] with modes xi_k = pi k / L;
// H = H_0 + diag(V) is diagonalized densely.
struct SpectralGrid {
  double half_width = 20.0;  // L
  int modes = 512;           // N, power of two, >= 32

  void validate() const;
};

// Holds the eigendecompositions of H and the free multipliers at (N, L), at
// the mode-refined (2N, L), and at the box-doubled (2N, 2L) grid, so traces at
// many t cost only exponential sums.  Reports the (2N, L) value; the budget
// field sums the mode-refinement and box-doubling differences, covering both
// frequency truncation and periodization error.
class SpectralOracle {
 public:
  SpectralOracle(const KernelSpec& spec, const PotentialSpec& V, const SpectralGrid& grid);

  TraceEstimate trace(double t) const;

 private:
  double trace_single(const std::vector<double>& eig, const std::vector<double>& free_psi,
                      double t) const;
  std::vector<double> eig_coarse_, free_coarse_;
  std::vector<double> eig_fine_, free_fine_;
  std::vector<double> eig_box_, free_box_;
  std::string spec_hash_, potential_hash_;
};

TraceEstimate spectral_oracle_trace(const KernelSpec& spec, const PotentialSpec& V,
                                    double t, const SpectralGrid& grid);

}  // namespace nht
