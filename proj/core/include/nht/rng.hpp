#pragma once

#include <cmath>
#include <cstdint>

namespace nht {

// Counter-based RNG.  Output i of a stream is a pure function of
// (seed, stream path, i), so results do not depend on thread count or on
// how work is split across workers.  Streams fork by index; forking is cheap
// and collision-resistant via splitmix-style finalizers.
namespace detail {
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

class CounterRng {
 public:
  explicit CounterRng(uint64_t seed) : key_(detail::mix64(seed ^ 0xa0761d6478bd642fULL)) {}

  // Independent substream for sample/worker index i.
  CounterRng fork(uint64_t i) const {
    CounterRng r(0);
    r.key_ = detail::mix64(key_ + 0x8bb84b93962eacc9ULL * (i + 1));
    r.counter_ = 0;
    return r;
  }

  uint64_t next_u64() { return detail::mix64(key_ ^ detail::mix64(counter_++ + key_)); }

  // Uniform on (0,1), endpoints excluded.
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double exponential() { return -std::log(uniform()); }

  // Box-Muller; consumes two uniforms per call, no cached spare.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace nht
