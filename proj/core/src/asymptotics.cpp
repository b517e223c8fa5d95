#include "nht/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nht/kernels.hpp"
#include "nht/rng.hpp"

namespace nht {

TraceSample to_sample(const TraceEstimate& est) {
  TraceSample s;
  s.t = est.t;
  s.value = est.value;
  s.method = est.method;
  if (est.method == "mc" && std::isfinite(est.std_error))
    s.error = est.std_error;
  else if (est.method == "spectral")
    s.error = est.budget;
  return s;
}

namespace {

void require_span(const std::vector<double>& t, size_t min_points, const char* who) {
  if (t.size() < min_points) {
    std::ostringstream os;
    os << who << " needs at least " << min_points << " samples";
    throw FitError(os.str());
  }
  auto [lo, hi] = std::minmax_element(t.begin(), t.end());
  if (!(*lo > 0) || *hi / *lo < 10.0) {
    std::ostringstream os;
    os << who << " needs positive t spanning at least a decade (got [" << *lo << ", "
       << *hi << "])";
    throw FitError(os.str());
  }
}

double theil_sen(const std::vector<std::array<double, 2>>& pts) {
  std::vector<double> slopes;
  slopes.reserve(pts.size() * (pts.size() - 1) / 2);
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      if (pts[j][0] != pts[i][0])
        slopes.push_back((pts[j][1] - pts[i][1]) / (pts[j][0] - pts[i][0]));
  if (slopes.empty()) throw FitError("degenerate abscissa for slope estimation");
  size_t mid = slopes.size() / 2;
  std::nth_element(slopes.begin(), slopes.begin() + mid, slopes.end());
  double hi = slopes[mid];
  if (slopes.size() % 2 == 0) {
    std::nth_element(slopes.begin(), slopes.begin() + mid - 1, slopes.begin() + mid);
    return 0.5 * (slopes[mid - 1] + hi);
  }
  return hi;
}

}  // namespace

ExponentFit log_log_slope(const std::vector<std::array<double, 2>>& points, uint64_t seed) {
  if (points.size() < 4) throw FitError("slope fit needs at least 4 points");
  std::vector<std::array<double, 2>> logs;
  for (const auto& p : points) {
    if (!(p[0] > 0) || !(p[1] > 0))
      throw FitError("log-log slope requires positive coordinates");
    logs.push_back({std::log(p[0]), std::log(p[1])});
  }
  ExponentFit fit;
  fit.exponent = theil_sen(logs);

  const int reps = 400;
  std::vector<double> boot;
  boot.reserve(reps);
  CounterRng rng(seed);
  for (int b = 0; b < reps; ++b) {
    CounterRng r = rng.fork(b);
    std::vector<std::array<double, 2>> sample(logs.size());
    for (auto& s : sample) s = logs[r.next_u64() % logs.size()];
    double lo = sample[0][0], hi = sample[0][0];
    for (const auto& s : sample) {
      lo = std::min(lo, s[0]);
      hi = std::max(hi, s[0]);
    }
    if (hi == lo) continue;
    boot.push_back(theil_sen(sample));
  }
  std::sort(boot.begin(), boot.end());
  fit.ci_low = boot[static_cast<size_t>(0.025 * boot.size())];
  fit.ci_high = boot[std::min(boot.size() - 1, static_cast<size_t>(0.975 * boot.size()))];
  fit.ci_low = std::min(fit.ci_low, fit.exponent);
  fit.ci_high = std::max(fit.ci_high, fit.exponent);
  return fit;
}

AsymptoticFit fit_expansion(const KernelSpec& spec, const std::vector<TraceSample>& samples,
                            const PotentialSpec& V, const QuadratureConfig& cfg) {
  std::vector<double> ts;
  for (const auto& s : samples) ts.push_back(s.t);
  require_span(ts, 5, "expansion fit");

  AsymptoticFit fit;
  const auto norms = V.exact_norms();
  fit.predicted_c1 = -norms.int_v;
  fit.predicted_c2 = 0.5 * norms.int_v2;

  struct Row {
    double t, r, w;
  };
  std::vector<Row> rows;
  for (const auto& s : samples) {
    double pt0 = kernel_at_zero(spec, s.t, cfg);
    double r = s.value / pt0;
    double sigma = s.error / pt0;
    rows.push_back({s.t, r, sigma});
    fit.normalized.push_back({s.t, r});
  }
  std::sort(fit.normalized.begin(), fit.normalized.end());
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.t < b.t; });

  double sigma_floor = 0.0;
  for (const auto& r : rows) sigma_floor = std::max(sigma_floor, r.w);
  for (auto& r : rows) {
    double sigma = r.w > 0 ? r.w : (sigma_floor > 0 ? sigma_floor : 1.0);
    r.w = 1.0 / (sigma * sigma);
  }

  double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
  for (const auto& r : rows) {
    double t2 = r.t * r.t;
    s11 += r.w * t2;
    s12 += r.w * t2 * r.t;
    s22 += r.w * t2 * t2;
    b1 += r.w * r.t * r.r;
    b2 += r.w * t2 * r.r;
  }
  double det = s11 * s22 - s12 * s12;
  if (!(std::fabs(det) > 1e-300 * std::max(s11 * s22, 1.0)))
    throw FitError("ill-conditioned design matrix: t-range too narrow");
  fit.fitted_c1 = (s22 * b1 - s12 * b2) / det;
  fit.fitted_c2 = (s11 * b2 - s12 * b1) / det;
  return fit;
}

ExponentFit remainder_exponent(const KernelSpec& spec, const std::vector<TraceSample>& samples,
                               const PotentialSpec& V, const QuadratureConfig& cfg,
                               uint64_t seed) {
  std::vector<double> ts;
  for (const auto& s : samples) ts.push_back(s.t);
  require_span(ts, 4, "remainder fit");

  const auto norms = V.exact_norms();
  const double c1 = -norms.int_v;
  const double c2 = 0.5 * norms.int_v2;

  std::vector<std::array<double, 2>> pts;
  size_t resolved = 0;
  for (const auto& s : samples) {
    double pt0 = kernel_at_zero(spec, s.t, cfg);
    double r = s.value / pt0;
    double rho = r - c1 * s.t - c2 * s.t * s.t;
    double floor = std::max({s.error / pt0, 1e-12 * std::fabs(r), 1e-14});
    if (std::fabs(rho) > 3.0 * floor) {
      pts.push_back({s.t, std::fabs(rho)});
      ++resolved;
    }
  }
  if (resolved < 4)
    throw FitError("remainder unresolvable: residual below the error floor");
  return log_log_slope(pts, seed);
}

ExponentFit moment_exponent_fit(const std::vector<std::array<double, 2>>& t_and_moment,
                                uint64_t seed) {
  std::vector<double> ts;
  for (const auto& p : t_and_moment) ts.push_back(p[0]);
  require_span(ts, 4, "moment exponent fit");
  return log_log_slope(t_and_moment, seed);
}

std::string samples_to_csv(const std::vector<TraceSample>& samples) {
  std::ostringstream os;
  os.precision(17);
  os << "t,method,value,error\n";
  for (const auto& s : samples)
    os << s.t << "," << s.method << "," << s.value << "," << s.error << "\n";
  return os.str();
}

std::vector<TraceSample> samples_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  do {
    if (!std::getline(is, line)) throw ValidationError("empty CSV input");
  } while (line.empty() || line[0] == '#');

  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string col;
    while (std::getline(hs, col, ',')) header.push_back(col);
  }
  auto col_index = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ValidationError("CSV missing column: " + name);
    return static_cast<size_t>(it - header.begin());
  };
  size_t it_ = col_index("t"), im = col_index("method"), iv = col_index("value"),
         ie = col_index("error");

  std::vector<TraceSample> out;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (fields.size() < header.size()) throw ValidationError("short CSV row: " + line);
    TraceSample s;
    s.t = std::stod(fields[it_]);
    s.method = fields[im];
    s.value = std::stod(fields[iv]);
    s.error = std::stod(fields[ie]);
    out.push_back(s);
  }
  return out;
}

}  // namespace nht
