#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nht/asymptotics.hpp"
#include "nht/bridge_mc.hpp"
#include "nht/inequalities.hpp"
#include "nht/kernels.hpp"
#include "nht/potentials.hpp"
#include "nht/trace_engine.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw nht::ValidationError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw nht::ValidationError("cannot write file: " + path);
  out << content;
}

// "a:b:logN" -> N log-spaced points on [a, b] inclusive; a bare number is a
// single point.
std::vector<double> parse_t_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::istringstream is(text);
  std::string p;
  while (std::getline(is, p, ':')) parts.push_back(p);
  if (parts.size() == 1) return {std::stod(parts[0])};
  if (parts.size() != 3 || parts[2].rfind("log", 0) != 0)
    throw nht::ValidationError("t-grid must be a single value or a:b:logN");
  double a = std::stod(parts[0]);
  double b = std::stod(parts[1]);
  int n = std::stoi(parts[2].substr(3));
  if (!(a > 0 && b > a) || n < 2)
    throw nht::ValidationError("t-grid needs 0 < a < b and N >= 2");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
  return out;
}

json config_block(const json& extra) {
  json cfg = extra;
  cfg["version"] = kVersion;
  return cfg;
}

struct KernelArgs {
  std::string spec_path;
  double t = 0.0;
  std::string r_list;
  std::string out;
};

int cmd_kernel(const KernelArgs& args) {
  nht::KernelSpec spec = nht::KernelSpec::from_json(slurp(args.spec_path));
  nht::QuadratureConfig qcfg;
  std::vector<double> radii;
  {
    std::istringstream is(args.r_list);
    std::string tok;
    while (std::getline(is, tok, ',')) radii.push_back(std::stod(tok));
  }
  if (radii.empty()) throw nht::ValidationError("empty radius list");
  std::sort(radii.begin(), radii.end());

  std::string method = "subordination";
  if (const auto* st = std::get_if<nht::Stable>(&spec.variant);
      st && (st->alpha == 1.0 || st->alpha == 2.0))
    method = "closed";

  std::ostringstream os;
  os.precision(10);
  os << "# " << config_block({{"spec", json::parse(spec.to_json())}, {"t", args.t}}).dump()
     << "\n";
  os << "t,r,density,method\n";
  for (double r : radii)
    os << args.t << "," << r << "," << nht::eval_kernel(spec, args.t, r, qcfg) << ","
       << method << "\n";
  emit(args.out, os.str());
  return 0;
}

struct TraceArgs {
  std::string spec_path, potential_path;
  std::string t_grid = "0.05:0.2:log3";
  std::string methods = "duhamel";
  uint64_t seed = 1;
  int k = 0;
  size_t n_paths = 100, n_x = 1000;
  int modes = 256;
  double half_width = 20.0;
  std::string out;
};

int cmd_trace(const TraceArgs& args) {
  nht::KernelSpec spec = nht::KernelSpec::from_json(slurp(args.spec_path));
  nht::PotentialSpec pot = nht::PotentialSpec::from_json(slurp(args.potential_path));
  nht::QuadratureConfig qcfg;
  std::vector<double> ts = parse_t_grid(args.t_grid);
  std::sort(ts.begin(), ts.end());

  std::vector<std::string> methods;
  {
    std::istringstream is(args.methods);
    std::string tok;
    while (std::getline(is, tok, ',')) methods.push_back(tok);
  }
  std::sort(methods.begin(), methods.end());

  std::unique_ptr<nht::BridgeMc> mc;
  std::unique_ptr<nht::SpectralOracle> oracle;

  std::ostringstream os;
  os.precision(12);
  os << "# "
     << config_block({{"spec", json::parse(spec.to_json())},
                      {"potential", json::parse(pot.to_json())},
                      {"seed", args.seed},
                      {"methods", methods},
                      {"t_grid", args.t_grid}})
            .dump()
     << "\n";
  os << "t,method,value,error,k,n,spec_hash,potential_hash\n";
  for (double t : ts) {
    for (const std::string& m : methods) {
      try {
        nht::TraceEstimate est;
        if (m == "duhamel") {
          auto r = nht::duhamel_trace(spec, pot, t, qcfg);
          est = r.estimate;
          est.budget = r.remainder_bound;
        } else if (m == "spectral") {
          if (!oracle)
            oracle = std::make_unique<nht::SpectralOracle>(
                spec, pot, nht::SpectralGrid{args.half_width, args.modes});
          est = oracle->trace(t);
        } else if (m == "mc") {
          if (!mc) mc = std::make_unique<nht::BridgeMc>(spec);
          int k = args.k > 0 ? args.k : nht::BridgeMc::default_k(t);
          est = mc->trace_mc(pot, t, k, args.n_paths, args.n_x,
                             nht::CounterRng(args.seed));
        } else {
          throw nht::ValidationError("unknown method: " + m);
        }
        double err = est.method == "mc" ? est.std_error : est.budget;
        os << t << "," << m << "," << est.value << "," << err << "," << est.skeleton_k
           << "," << est.n_samples << "," << spec.hash() << "," << pot.hash() << "\n";
      } catch (const std::exception& e) {
        std::cerr << "trace t=" << t << " method=" << m << " skipped: " << e.what()
                  << "\n";
      }
    }
  }
  emit(args.out, os.str());
  return 0;
}

struct FitArgs {
  std::string in_path, spec_path, potential_path;
  std::string method_filter;
  std::string out;
};

int cmd_fit(const FitArgs& args) {
  nht::KernelSpec spec = nht::KernelSpec::from_json(slurp(args.spec_path));
  nht::PotentialSpec pot = nht::PotentialSpec::from_json(slurp(args.potential_path));
  nht::QuadratureConfig qcfg;
  auto samples = nht::samples_from_csv(slurp(args.in_path));
  if (!args.method_filter.empty()) {
    std::erase_if(samples,
                  [&](const nht::TraceSample& s) { return s.method != args.method_filter; });
  }
  auto fit = nht::fit_expansion(spec, samples, pot, qcfg);

  json report;
  report["config"] = config_block({{"spec", json::parse(spec.to_json())},
                                   {"potential", json::parse(pot.to_json())},
                                   {"input", args.in_path}});
  report["fitted_c1"] = fit.fitted_c1;
  report["fitted_c2"] = fit.fitted_c2;
  report["predicted_c1"] = fit.predicted_c1;
  report["predicted_c2"] = fit.predicted_c2;
  try {
    auto rem = nht::remainder_exponent(spec, samples, pot, qcfg);
    report["remainder_exponent"] = rem.exponent;
    report["remainder_ci"] = {rem.ci_low, rem.ci_high};
  } catch (const nht::FitError& e) {
    report["remainder_error"] = e.what();
  }
  emit(args.out, report.dump(2) + "\n");
  return 0;
}

struct VerifyArgs {
  std::string only;
  std::string out;
};

bool run_3p5p(json* items) {
  nht::QuadratureConfig qcfg;
  bool ok = true;
  std::vector<nht::KernelSpec> specs;
  for (double alpha : {0.6, 1.0, 1.5})
    for (int d : {1, 2}) specs.push_back({nht::Stable{alpha}, d});
  specs.push_back({nht::StableSum{1.5, 0.8, 1.0}, 1});
  specs.push_back({nht::Relativistic{1.0, 1.0}, 1});

  for (const auto& spec : specs) {
    for (double t : {0.1, 0.5, 1.0}) {
      for (double s : {t / 2, t / 4}) {
        auto grid = [&](int n) {
          std::vector<double> g{0.0};
          double r_hi = 50.0 * std::pow(t, 1.0 / spec.alpha());
          for (int i = 0; i < n; ++i)
            g.push_back(r_hi * std::pow(1e-3, 1.0 - static_cast<double>(i) / (n - 1)));
          return g;
        };
        auto w3a = nht::check_3p(spec, t, s, grid(64), qcfg);
        auto w3b = nht::check_3p(spec, t, s, grid(128), qcfg);
        auto w5a = nht::check_5p(spec, t, s, grid(64), qcfg);
        auto w5b = nht::check_5p(spec, t, s, grid(128), qcfg);
        double drift3 = std::fabs(w3b.max_ratio - w3a.max_ratio) / w3a.max_ratio;
        double drift5 = std::fabs(w5b.max_ratio - w5a.max_ratio) / w5a.max_ratio;
        bool pass = drift3 < 0.01 && drift5 < 0.01;
        ok = ok && pass;
        items->push_back({{"check", "3p5p"},
                          {"spec", json::parse(spec.to_json())},
                          {"t", t},
                          {"s", s},
                          {"ratio_3p", w3b.max_ratio},
                          {"ratio_5p", w5b.max_ratio},
                          {"drift_3p", drift3},
                          {"drift_5p", drift5},
                          {"pass", pass}});
      }
    }
  }
  return ok;
}

bool run_scalar(json* items) {
  std::vector<double> a_grid, b_grid;
  for (int i = 0; i <= 100; ++i) a_grid.push_back(-5.0 * i / 100);
  for (int i = 0; i <= 100; ++i) b_grid.push_back(5.0 * i / 100);
  auto check = nht::check_scalar_inequality(a_grid, b_grid);
  bool pass = check.violations == 0;
  items->push_back({{"check", "scalar"},
                    {"points", check.points_checked},
                    {"violations", check.violations},
                    {"worst_margin", check.worst_margin},
                    {"pass", pass}});
  return pass;
}

bool run_moment(json* items) {
  nht::QuadratureConfig qcfg;
  bool ok = true;
  for (double alpha : {0.6, 1.0, 1.5}) {
    auto finite = nht::check_fractional_moment(alpha, alpha / 2, 1, qcfg);
    auto infinite = nht::check_fractional_moment(alpha, alpha, 1, qcfg);
    bool pass = finite.finite && !infinite.finite;
    ok = ok && pass;
    items->push_back({{"check", "moment"},
                      {"alpha", alpha},
                      {"value_at_half_alpha", finite.value},
                      {"diverges_at_alpha", !infinite.finite},
                      {"pass", pass}});
  }
  auto ref = nht::check_fractional_moment(1.0, 0.5, 1, qcfg);
  bool pass = ref.finite && std::fabs(ref.value - std::sqrt(2.0)) < 1e-4;
  ok = ok && pass;
  items->push_back(
      {{"check", "moment_reference"}, {"value", ref.value}, {"pass", pass}});
  return ok;
}

bool run_identity(json* items) {
  nht::QuadratureConfig qcfg;
  bool ok = true;
  for (double alpha : {0.6, 1.0, 1.5}) {
    for (int d : {1, 2}) {
      nht::KernelSpec spec{nht::Stable{alpha}, d};
      for (double t : {0.1, 0.5, 1.0}) {
        double closed = nht::kernel_at_zero(spec, t, qcfg);
        double quad = nht::kernel_at_zero_quadrature(spec, t, qcfg);
        double scaling = std::pow(t, -static_cast<double>(d) / alpha) *
                         nht::kernel_at_zero(spec, 1.0, qcfg);
        bool pass = std::fabs(closed - quad) < 1e-5 * closed &&
                    std::fabs(closed - scaling) < 1e-9 * closed;
        ok = ok && pass;
        items->push_back({{"check", "identity"},
                          {"alpha", alpha},
                          {"d", d},
                          {"t", t},
                          {"at_zero", closed},
                          {"pass", pass}});
      }
    }
  }
  return ok;
}

int cmd_verify(const VerifyArgs& args) {
  json report;
  report["config"] = config_block({{"only", args.only}});
  json items = json::array();
  bool ok = true;
  auto want = [&](const std::string& name) {
    return args.only.empty() || args.only == name;
  };
  if (want("3p") || want("5p")) ok = run_3p5p(&items) && ok;
  if (want("scalar")) ok = run_scalar(&items) && ok;
  if (want("moment")) ok = run_moment(&items) && ok;
  if (want("identity")) ok = run_identity(&items) && ok;
  report["witnesses"] = items;
  report["pass"] = ok;
  emit(args.out, report.dump(2) + "\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heat kernels of non-local operators: evaluation, traces, verification"};
  app.require_subcommand(1);

  KernelArgs ka;
  auto* kernel = app.add_subcommand("kernel", "evaluate a transition density");
  kernel->add_option("--spec", ka.spec_path, "kernel spec JSON file")->required();
  kernel->add_option("--t", ka.t, "time")->required()->check(CLI::PositiveNumber);
  kernel->add_option("--r", ka.r_list, "comma-separated radii")->required();
  kernel->add_option("--out", ka.out, "output CSV (stdout if absent)");

  TraceArgs ta;
  auto* trace = app.add_subcommand("trace", "heat-trace differences");
  trace->add_option("--spec", ta.spec_path)->required();
  trace->add_option("--potential", ta.potential_path)->required();
  trace->add_option("--t-grid", ta.t_grid, "a:b:logN or a single t");
  trace->add_option("--methods", ta.methods, "comma list of mc,duhamel,spectral");
  trace->add_option("--seed", ta.seed);
  trace->add_option("--k", ta.k, "skeleton times (0 = auto)");
  trace->add_option("--n-paths", ta.n_paths, "paths per start point (mc)");
  trace->add_option("--n-x", ta.n_x, "start points (mc)");
  trace->add_option("--modes", ta.modes, "spectral modes N");
  trace->add_option("--half-width", ta.half_width, "spectral box half width L");
  trace->add_option("--out", ta.out);

  FitArgs fa;
  auto* fit = app.add_subcommand("fit", "small-time expansion fit of a trace CSV");
  fit->add_option("--in", fa.in_path)->required();
  fit->add_option("--spec", fa.spec_path)->required();
  fit->add_option("--potential", fa.potential_path)->required();
  fit->add_option("--method", fa.method_filter, "use rows of this method only");
  fit->add_option("--out", fa.out);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run the property matrix");
  verify->add_option("--only", va.only, "subset: 3p, 5p, scalar, moment, identity");
  verify->add_option("--out", va.out, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (kernel->parsed()) return cmd_kernel(ka);
    if (trace->parsed()) return cmd_trace(ta);
    if (fit->parsed()) return cmd_fit(fa);
    if (verify->parsed()) return cmd_verify(va);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
