#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

namespace nht {

// A trace-difference value with its provenance.  std_error is meaningful for
// the mc method only; deterministic methods report a discretization budget
// instead (spectral) or nothing (duhamel).
struct TraceEstimate {
  double value = 0.0;
  double std_error = std::numeric_limits<double>::quiet_NaN();
  size_t n_samples = 0;
  std::string method;  // "mc", "duhamel", "spectral"
  int skeleton_k = 0;  // mc only
  double t = 0.0;
  std::string spec_hash;
  std::string potential_hash;
  double budget = 0.0;  // spectral discretization budget

  std::string to_json() const;
};

}  // namespace nht
