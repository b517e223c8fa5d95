#include "nht/bridge_mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "nht/parallel.hpp"
#include "nht/subordinator.hpp"

namespace nht {

std::string TraceEstimate::to_json() const {
  nlohmann::json j;
  j["value"] = value;
  if (std::isfinite(std_error)) j["std_error"] = std_error;
  j["n_samples"] = n_samples;
  j["method"] = method;
  if (method == "mc") j["k"] = skeleton_k;
  j["t"] = t;
  j["spec_hash"] = spec_hash;
  j["potential_hash"] = potential_hash;
  if (method == "spectral") j["budget"] = budget;
  return j.dump();
}

namespace {

struct MomentAcc {
  double sum = 0.0;
  double sum_sq = 0.0;
  size_t n = 0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  void merge(const MomentAcc& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    n += o.n;
  }
  McResult result() const {
    double mean = sum / static_cast<double>(n);
    double var = std::max(0.0, sum_sq / static_cast<double>(n) - mean * mean);
    return {mean, std::sqrt(var / static_cast<double>(n))};
  }
};

std::vector<double> gaussian_vec(int d, double scale, CounterRng& rng) {
  std::vector<double> z(d);
  for (int i = 0; i < d; ++i) z[i] = scale * rng.normal();
  return z;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// A StableSum with weight 0 is the plain stable process; normalizing here keeps
// the two parameterizations bit-for-bit identical downstream.
KernelSpec effective(const KernelSpec& spec) {
  if (const auto* s = std::get_if<StableSum>(&spec.variant); s && s->weight_a == 0.0)
    return KernelSpec{Stable{s->alpha}, spec.dimension};
  return spec;
}

// Moment exponent above which |X|^gamma has infinite mean for the family.
double moment_ceiling(const KernelSpec& spec) {
  if (spec.is_relativistic()) return std::numeric_limits<double>::infinity();
  if (const auto* s = std::get_if<StableSum>(&spec.variant)) return s->beta;
  double a = std::get<Stable>(spec.variant).alpha;
  return a == 2.0 ? std::numeric_limits<double>::infinity() : a;
}

}  // namespace

BridgeMc::BridgeMc(const KernelSpec& spec) : spec_(effective(spec)), eval_(spec_) {
  spec_.validate();
}

int BridgeMc::default_k(double t) {
  int k = static_cast<int>(std::ceil(t / 0.01));
  return std::clamp(k, 8, 64);
}

std::vector<double> BridgeMc::sample_increment(double dt, CounterRng& rng) const {
  const int d = spec_.dimension;
  if (const auto* st = std::get_if<Stable>(&spec_.variant)) {
    if (st->alpha == 2.0) return gaussian_vec(d, std::sqrt(2.0 * dt), rng);
    SubordinatorSpec sub{st->alpha / 2.0, std::nullopt};
    return subordinated_gaussian_sample(sub, dt, d, rng);
  }
  if (const auto* sum = std::get_if<StableSum>(&spec_.variant)) {
    SubordinatorSpec sub_a{sum->alpha / 2.0, std::nullopt};
    SubordinatorSpec sub_b{sum->beta / 2.0, std::nullopt};
    auto x = subordinated_gaussian_sample(sub_a, dt, d, rng);
    auto y = subordinated_gaussian_sample(sub_b, std::pow(sum->weight_a, sum->beta) * dt,
                                          d, rng);
    for (int i = 0; i < d; ++i) x[i] += y[i];
    return x;
  }
  const auto& rel = std::get<Relativistic>(spec_.variant);
  SubordinatorSpec sub{rel.alpha / 2.0, std::nullopt};
  const double temper = std::pow(rel.mass_m, 2.0 / rel.alpha);
  for (;;) {
    double s = sample_subordinator(sub, dt, rng);
    if (rng.uniform() < std::exp(-temper * s)) return gaussian_vec(d, std::sqrt(2.0 * s), rng);
  }
}

BridgeSkeleton BridgeMc::sample_free_skeleton(const std::vector<double>& x, double t,
                                              int k, CounterRng& rng) const {
  if (k < 1) throw ValidationError("skeleton needs at least one interior time");
  if (!(t > 0)) throw ValidationError("horizon must be positive");
  const double dt = t / (k + 1);
  BridgeSkeleton sk;
  sk.times.resize(k);
  sk.positions.resize(k);
  std::vector<double> pos = x;
  for (int j = 0; j < k; ++j) {
    auto inc = sample_increment(dt, rng);
    for (size_t i = 0; i < pos.size(); ++i) pos[i] += inc[i];
    sk.times[j] = (j + 1) * dt;
    sk.positions[j] = pos;
  }
  sk.endpoint = pos;
  sk.importance_weight = eval_(dt, dist(pos, x)) / eval_.at_zero(t);
  return sk;
}

McResult BridgeMc::bridge_expectation(const PotentialSpec& V, const std::vector<double>& x,
                                      double t, int k, size_t n, CounterRng rng) const {
  if (static_cast<int>(x.size()) != spec_.dimension)
    throw ValidationError("start point dimension mismatch");
  const double dt = t / (k + 1);
  const double vx = V(x);
  auto acc = chunked_reduce<MomentAcc>(
      n, MomentAcc{},
      [&](size_t lo, size_t hi) {
        MomentAcc a;
        for (size_t i = lo; i < hi; ++i) {
          CounterRng r = rng.fork(i);
          auto sk = sample_free_skeleton(x, t, k, r);
          double riemann = vx;
          for (const auto& y : sk.positions) riemann += V(y);
          riemann *= dt;
          a.add(sk.importance_weight * std::expm1(-riemann));
        }
        return a;
      },
      [](MomentAcc& a, const MomentAcc& b) { a.merge(b); });
  return acc.result();
}

TraceEstimate BridgeMc::trace_mc(const PotentialSpec& V, double t, int k, size_t n_paths,
                                 size_t n_x, CounterRng rng) const {
  if (V.dimension() != spec_.dimension) throw ValidationError("potential dimension mismatch");
  if (n_x < 2 || n_paths < 1) throw ValidationError("trace_mc needs n_x >= 2, n_paths >= 1");
  const int d = spec_.dimension;
  const double dt = t / (k + 1);
  const auto center = V.mass_center();
  const double scale = V.mass_scale();
  const double log_qnorm = -0.5 * d * std::log(2.0 * M_PI * scale * scale);
  const double pt0 = eval_.at_zero(t);

  struct Acc {
    MomentAcc blocks;
    double abs_sum = 0.0, abs_sq = 0.0;
    void merge(const Acc& o) {
      blocks.merge(o.blocks);
      abs_sum += o.abs_sum;
      abs_sq += o.abs_sq;
    }
  };
  auto acc = chunked_reduce<Acc>(
      n_x, Acc{},
      [&](size_t lo, size_t hi) {
        Acc a;
        for (size_t i = lo; i < hi; ++i) {
          CounterRng r = rng.fork(i);
          std::vector<double> x(d);
          double log_q = log_qnorm;
          for (int c = 0; c < d; ++c) {
            double z = r.normal();
            x[c] = center[c] + scale * z;
            log_q -= 0.5 * z * z;
          }
          const double vx = V(x);
          double block = 0.0;
          for (size_t p = 0; p < n_paths; ++p) {
            auto sk = sample_free_skeleton(x, t, k, r);
            double riemann = vx;
            for (const auto& y : sk.positions) riemann += V(y);
            riemann *= dt;
            block += sk.importance_weight * std::expm1(-riemann);
          }
          block /= static_cast<double>(n_paths);
          double u = pt0 * block * std::exp(-log_q);
          a.blocks.add(u);
          a.abs_sum += std::fabs(u);
          a.abs_sq += u * u;
        }
        return a;
      },
      [](Acc& a, const Acc& b) { a.merge(b); });

  if (acc.abs_sq > 0) {
    double ess = acc.abs_sum * acc.abs_sum / acc.abs_sq;
    if (ess < 0.01 * static_cast<double>(n_x)) {
      std::ostringstream os;
      os << "importance proposal collapsed: effective sample size " << ess << " of " << n_x;
      throw EstimatorError(os.str());
    }
  }

  McResult r = acc.blocks.result();
  TraceEstimate est;
  est.value = r.value;
  est.std_error = r.std_error;
  est.n_samples = n_x * n_paths;
  est.method = "mc";
  est.skeleton_k = k;
  est.t = t;
  est.spec_hash = spec_.hash();
  est.potential_hash = V.hash();
  return est;
}

McResult BridgeMc::moment_of_time_integral(const PotentialSpec& V, double t, int power,
                                           int k, size_t n, CounterRng rng) const {
  if (power != 1 && power != 2) throw ValidationError("power must be 1 or 2");
  const int d = spec_.dimension;
  const double dt = t / (k + 1);
  const auto center = V.mass_center();
  const double scale = V.mass_scale();
  const double log_qnorm = -0.5 * d * std::log(2.0 * M_PI * scale * scale);
  auto acc = chunked_reduce<MomentAcc>(
      n, MomentAcc{},
      [&](size_t lo, size_t hi) {
        MomentAcc a;
        for (size_t i = lo; i < hi; ++i) {
          CounterRng r = rng.fork(i);
          std::vector<double> x(d);
          double log_q = log_qnorm;
          for (int c = 0; c < d; ++c) {
            double z = r.normal();
            x[c] = center[c] + scale * z;
            log_q -= 0.5 * z * z;
          }
          auto sk = sample_free_skeleton(x, t, k, r);
          double riemann = V(x);
          for (const auto& y : sk.positions) riemann += V(y);
          riemann *= dt;
          double val = power == 1 ? riemann : riemann * riemann;
          a.add(sk.importance_weight * val * std::exp(-log_q));
        }
        return a;
      },
      [](MomentAcc& a, const MomentAcc& b) { a.merge(b); });
  return acc.result();
}

OccupationCheck BridgeMc::occupation_identity_check(const PotentialSpec& V, double t,
                                                    size_t n, CounterRng rng) const {
  const int d = spec_.dimension;
  const auto center = V.mass_center();
  const double scale = V.mass_scale();
  const double log_qnorm = -0.5 * d * std::log(2.0 * M_PI * scale * scale);
  const double pt0 = eval_.at_zero(t);
  auto acc = chunked_reduce<MomentAcc>(
      n, MomentAcc{},
      [&](size_t lo, size_t hi) {
        MomentAcc a;
        for (size_t i = lo; i < hi; ++i) {
          CounterRng r = rng.fork(i);
          std::vector<double> x(d);
          double log_q = log_qnorm;
          for (int c = 0; c < d; ++c) {
            double z = r.normal();
            x[c] = center[c] + scale * z;
            log_q -= 0.5 * z * z;
          }
          double s = r.uniform(0.0, t);
          std::vector<double> y = x;
          auto inc = sample_increment(s, r);
          for (int c = 0; c < d; ++c) y[c] += inc[c];
          double w = eval_(t - s, dist(y, x)) / pt0;
          a.add(t * std::fabs(V(y)) * w * std::exp(-log_q));
        }
        return a;
      },
      [](MomentAcc& a, const MomentAcc& b) { a.merge(b); });
  OccupationCheck out;
  out.lhs_estimate = acc.result();
  out.rhs_exact = t * V.exact_norms().l1;
  return out;
}

McResult BridgeMc::bridge_moment_estimate(double t, double gamma, size_t n,
                                          CounterRng rng) const {
  if (gamma < 0) throw ValidationError("moment exponent must be nonnegative");
  if (gamma == 0.0) return {t, 0.0};
  if (gamma >= moment_ceiling(spec_))
    throw ValidationError("moment exponent at or above the tail index: moment diverges");
  const int d = spec_.dimension;
  const double pt0 = eval_.at_zero(t);
  auto acc = chunked_reduce<MomentAcc>(
      n, MomentAcc{},
      [&](size_t lo, size_t hi) {
        MomentAcc a;
        for (size_t i = lo; i < hi; ++i) {
          CounterRng r = rng.fork(i);
          double s = r.uniform(0.0, t);
          auto y = sample_increment(s, r);
          double ry = norm2(y);
          double w = eval_(t - s, ry) / pt0;
          a.add(t * std::pow(ry, gamma) * w);
        }
        return a;
      },
      [](MomentAcc& a, const MomentAcc& b) { a.merge(b); });
  return acc.result();
}

McResult brownian_bridge_moment(double t, double gamma, size_t n, CounterRng rng, int d) {
  auto acc = chunked_reduce<MomentAcc>(
      n, MomentAcc{},
      [&](size_t lo, size_t hi) {
        MomentAcc a;
        for (size_t i = lo; i < hi; ++i) {
          CounterRng r = rng.fork(i);
          double s = r.uniform(0.0, t);
          double sd = std::sqrt(2.0 * s * (t - s) / t);
          double sq = 0.0;
          for (int c = 0; c < d; ++c) {
            double z = sd * r.normal();
            sq += z * z;
          }
          a.add(t * std::pow(std::sqrt(sq), gamma));
        }
        return a;
      },
      [](MomentAcc& a, const MomentAcc& b) { a.merge(b); });
  return acc.result();
}

std::vector<std::vector<double>> brownian_bridge_path(double t, int k, CounterRng& rng,
                                                      int d) {
  const double dt = t / k;
  std::vector<std::vector<double>> bm(k + 1, std::vector<double>(d, 0.0));
  for (int j = 1; j <= k; ++j)
    for (int c = 0; c < d; ++c)
      bm[j][c] = bm[j - 1][c] + std::sqrt(2.0 * dt) * rng.normal();
  for (int j = 0; j <= k; ++j)
    for (int c = 0; c < d; ++c)
      bm[j][c] -= (static_cast<double>(j) / k) * bm[k][c];
  return bm;
}

}  // namespace nht
