#include "nht/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <json.hpp>

namespace nht {

using nlohmann::json;

namespace {

double beta_fn(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double shape_eval(const PotentialSpec::Shape& shape, const std::vector<double>& x) {
  if (const auto* g = std::get_if<GaussianWell>(&shape)) {
    double r2 = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
      double dx = x[i] - g->center[i];
      r2 += dx * dx;
    }
    return -g->depth * std::exp(-r2 / (g->width * g->width));
  }
  const auto& b = std::get<CompactBump>(shape);
  double r2 = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - b.center[i];
    r2 += dx * dx;
  }
  double u2 = r2 / (b.radius * b.radius);
  if (u2 >= 1.0) return 0.0;
  double w = 1.0 - u2;
  return b.height * w * w;
}

double shape_integral(const PotentialSpec::Shape& shape, int d) {  // signed int V
  if (const auto* g = std::get_if<GaussianWell>(&shape))
    return -g->depth * std::pow(g->width * std::sqrt(M_PI), d);
  const auto& b = std::get<CompactBump>(shape);
  return b.height * std::pow(b.radius, d) * sphere_area(d) * 0.5 * beta_fn(0.5 * d, 3.0);
}

double shape_integral_sq(const PotentialSpec::Shape& shape, int d) {
  if (const auto* g = std::get_if<GaussianWell>(&shape))
    return g->depth * g->depth * std::pow(g->width * std::sqrt(0.5 * M_PI), d);
  const auto& b = std::get<CompactBump>(shape);
  return b.height * b.height * std::pow(b.radius, d) * sphere_area(d) * 0.5 *
         beta_fn(0.5 * d, 5.0);
}

double shape_sup(const PotentialSpec::Shape& shape) {
  if (const auto* g = std::get_if<GaussianWell>(&shape)) return std::abs(g->depth);
  return std::abs(std::get<CompactBump>(shape).height);
}

double shape_lipschitz(const PotentialSpec::Shape& shape) {
  if (const auto* g = std::get_if<GaussianWell>(&shape))
    return std::abs(g->depth) / g->width * std::sqrt(2.0 / M_E);
  const auto& b = std::get<CompactBump>(shape);
  return std::abs(b.height) * 8.0 / (3.0 * std::sqrt(3.0)) / b.radius;
}

double shape_scale(const PotentialSpec::Shape& shape) {
  if (const auto* g = std::get_if<GaussianWell>(&shape)) return g->width / std::sqrt(2.0);
  return 0.5 * std::get<CompactBump>(shape).radius;
}

const std::vector<double>& shape_center(const PotentialSpec::Shape& shape) {
  if (const auto* g = std::get_if<GaussianWell>(&shape)) return g->center;
  return std::get<CompactBump>(shape).center;
}

double shape_support_radius(const PotentialSpec::Shape& shape) {
  if (const auto* g = std::get_if<GaussianWell>(&shape)) return 8.0 * g->width;
  return std::get<CompactBump>(shape).radius;
}

// Composite-Simpson box quadrature for sum cross terms, d <= 3.
template <class F>
double box_quadrature(const F& f, const std::vector<double>& lo,
                      const std::vector<double>& hi, int n_per_axis) {
  int d = static_cast<int>(lo.size());
  if (n_per_axis % 2 == 0) ++n_per_axis;
  std::vector<double> h(d), x(d);
  for (int i = 0; i < d; ++i) h[i] = (hi[i] - lo[i]) / (n_per_axis - 1);
  auto wt = [n_per_axis](int i) {
    if (i == 0 || i == n_per_axis - 1) return 1.0;
    return i % 2 == 1 ? 4.0 : 2.0;
  };
  std::function<double(int)> rec = [&](int axis) -> double {
    double acc = 0.0;
    for (int i = 0; i < n_per_axis; ++i) {
      x[axis] = lo[axis] + i * h[axis];
      double v = axis + 1 == d ? f(x) : rec(axis + 1);
      acc += wt(i) * v;
    }
    return acc * h[axis] / 3.0;
  };
  return rec(0);
}

void validate_shape(const PotentialSpec::Shape& shape, int d) {
  if (const auto* g = std::get_if<GaussianWell>(&shape)) {
    if (!(g->width > 0)) throw ValidationError("GaussianWell width must be positive");
    if (static_cast<int>(g->center.size()) != d)
      throw ValidationError("GaussianWell center dimension mismatch");
  } else {
    const auto& b = std::get<CompactBump>(shape);
    if (!(b.radius > 0)) throw ValidationError("CompactBump radius must be positive");
    if (static_cast<int>(b.center.size()) != d)
      throw ValidationError("CompactBump center dimension mismatch");
  }
}

}  // namespace

PotentialSpec::PotentialSpec(Shape shape, int dimension)
    : shapes_{std::move(shape)}, dimension_(dimension) {
  if (dimension_ < 1) throw ValidationError("dimension must be >= 1");
  validate_shape(shapes_[0], dimension_);
}

PotentialSpec::PotentialSpec(std::vector<Shape> shapes, int dimension)
    : shapes_(std::move(shapes)), dimension_(dimension) {
  if (dimension_ < 1) throw ValidationError("dimension must be >= 1");
  if (shapes_.empty()) throw ValidationError("potential needs at least one shape");
  for (const auto& s : shapes_) validate_shape(s, dimension_);
}

double PotentialSpec::operator()(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dimension_)
    throw ValidationError("potential evaluation dimension mismatch");
  double v = 0.0;
  for (const auto& s : shapes_) v += shape_eval(s, x);
  return v;
}

double PotentialSpec::operator()(double x) const { return (*this)(std::vector<double>{x}); }

std::vector<double> PotentialSpec::mass_center() const {
  std::vector<double> c(static_cast<size_t>(dimension_), 0.0);
  double total = 0.0;
  for (const auto& s : shapes_) {
    double w = std::abs(shape_integral(s, dimension_));
    const auto& sc = shape_center(s);
    for (int i = 0; i < dimension_; ++i) c[static_cast<size_t>(i)] += w * sc[static_cast<size_t>(i)];
    total += w;
  }
  if (total > 0)
    for (auto& ci : c) ci /= total;
  return c;
}

double PotentialSpec::mass_scale() const {
  auto c = mass_center();
  double scale = 0.0;
  for (const auto& s : shapes_) {
    const auto& sc = shape_center(s);
    double off = 0.0;
    for (int i = 0; i < dimension_; ++i) {
      double dx = sc[static_cast<size_t>(i)] - c[static_cast<size_t>(i)];
      off += dx * dx;
    }
    scale = std::max(scale, std::sqrt(off) + shape_scale(s));
  }
  return 2.0 * scale;  // inflated proposal width
}

double PotentialSpec::lipschitz_constant() const {
  double l = 0.0;
  for (const auto& s : shapes_) l += shape_lipschitz(s);
  return l;
}

PotentialNorms PotentialSpec::exact_norms() const {
  PotentialNorms n{};
  if (shapes_.size() == 1) {
    const auto& s = shapes_[0];
    n.int_v = shape_integral(s, dimension_);
    n.l1 = std::abs(n.int_v);  // single shapes have one sign
    n.int_v2 = shape_integral_sq(s, dimension_);
    n.sup = shape_sup(s);
    return n;
  }
  n.quadrature_used = true;
  for (const auto& s : shapes_) n.int_v += shape_integral(s, dimension_);
  std::vector<double> lo(static_cast<size_t>(dimension_), 1e300),
      hi(static_cast<size_t>(dimension_), -1e300);
  for (const auto& s : shapes_) {
    const auto& c = shape_center(s);
    double r = shape_support_radius(s);
    for (int i = 0; i < dimension_; ++i) {
      lo[static_cast<size_t>(i)] = std::min(lo[static_cast<size_t>(i)], c[static_cast<size_t>(i)] - r);
      hi[static_cast<size_t>(i)] = std::max(hi[static_cast<size_t>(i)], c[static_cast<size_t>(i)] + r);
    }
  }
  int nodes = dimension_ == 1 ? 2001 : (dimension_ == 2 ? 301 : 101);
  n.l1 = box_quadrature([&](const std::vector<double>& x) { return std::abs((*this)(x)); },
                        lo, hi, nodes);
  n.int_v2 = box_quadrature([&](const std::vector<double>& x) {
                              double v = (*this)(x);
                              return v * v;
                            }, lo, hi, nodes);
  double sup = 0.0;
  box_quadrature([&](const std::vector<double>& x) {
                   sup = std::max(sup, std::abs((*this)(x)));
                   return 0.0;
                 }, lo, hi, nodes);
  n.sup = sup;
  return n;
}

bool PotentialSpec::is_nonpositive() const {
  for (const auto& s : shapes_) {
    if (const auto* g = std::get_if<GaussianWell>(&s)) {
      if (g->depth < 0) return false;
    } else if (std::get<CompactBump>(s).height > 0) {
      return false;
    }
  }
  return true;
}

double PotentialSpec::holder_certificate(double gamma) const {
  if (!(gamma > 0 && gamma <= 1)) throw ValidationError("holder exponent must be in (0, 1]");
  double lip = lipschitz_constant();
  double sup = exact_norms().sup;
  if (lip == 0.0 && sup == 0.0) return 0.0;
  // |dV| <= min(L h, 2 sup) <= L^gamma (2 sup)^{1-gamma} h^gamma
  double m = gamma == 1.0 ? lip : std::pow(lip, gamma) * std::pow(2.0 * sup, 1.0 - gamma);
  // Randomized verification over the effective support.
  CounterRng rng(0x5eedULL);
  auto c = mass_center();
  double span = 0.0;
  for (const auto& s : shapes_) span = std::max(span, shape_support_radius(s));
  span = std::max(span, mass_scale()) * 1.5;
  double worst = 0.0;
  std::vector<double> x(static_cast<size_t>(dimension_)), y(x);
  for (int it = 0; it < 100000; ++it) {
    for (int i = 0; i < dimension_; ++i) {
      x[static_cast<size_t>(i)] = c[static_cast<size_t>(i)] + rng.uniform(-span, span);
      y[static_cast<size_t>(i)] = c[static_cast<size_t>(i)] + rng.uniform(-span, span);
    }
    double h = 0.0;
    for (int i = 0; i < dimension_; ++i) {
      double dx = x[static_cast<size_t>(i)] - y[static_cast<size_t>(i)];
      h += dx * dx;
    }
    h = std::sqrt(h);
    if (h < 1e-12) continue;
    worst = std::max(worst, std::abs((*this)(x) - (*this)(y)) / std::pow(h, gamma));
  }
  return std::max(m, worst * 1.05);
}

std::string PotentialSpec::to_json() const {
  json j;
  auto shape_json = [](const Shape& s) {
    json js;
    if (const auto* g = std::get_if<GaussianWell>(&s)) {
      js["shape"] = "gaussian_well";
      js["depth"] = g->depth;
      js["width"] = g->width;
      js["center"] = g->center;
    } else {
      const auto& b = std::get<CompactBump>(s);
      js["shape"] = "compact_bump";
      js["height"] = b.height;
      js["radius"] = b.radius;
      js["center"] = b.center;
    }
    return js;
  };
  if (shapes_.size() == 1) {
    j = shape_json(shapes_[0]);
  } else {
    j["shape"] = "sum";
    json terms = json::array();
    for (const auto& s : shapes_) terms.push_back(shape_json(s));
    j["terms"] = terms;
  }
  j["d"] = dimension_;
  return j.dump();
}

namespace {

PotentialSpec::Shape shape_from_json(const json& j, int d) {
  auto require = [&](const char* k) {
    if (!j.contains(k)) throw ValidationError(std::string("potential missing field ") + k);
    return j.at(k);
  };
  std::string kind = require("shape").get<std::string>();
  std::vector<std::string> allowed = {"shape", "center", "d"};
  PotentialSpec::Shape out;
  if (kind == "gaussian_well") {
    out = GaussianWell{require("depth").get<double>(), require("width").get<double>(),
                       require("center").get<std::vector<double>>()};
    allowed.push_back("depth");
    allowed.push_back("width");
  } else if (kind == "compact_bump") {
    out = CompactBump{require("height").get<double>(), require("radius").get<double>(),
                      require("center").get<std::vector<double>>()};
    allowed.push_back("height");
    allowed.push_back("radius");
  } else {
    throw ValidationError("unknown potential shape: " + kind);
  }
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ValidationError("unknown field in potential spec: " + it.key());
  (void)d;
  return out;
}

}  // namespace

PotentialSpec PotentialSpec::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad potential JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("d"))
    throw ValidationError("potential spec must be an object with field d");
  int d = j.at("d").get<int>();
  std::string kind = j.value("shape", "");
  if (kind == "sum") {
    for (auto it = j.begin(); it != j.end(); ++it)
      if (it.key() != "shape" && it.key() != "terms" && it.key() != "d")
        throw ValidationError("unknown field in potential spec: " + it.key());
    std::vector<Shape> shapes;
    for (const auto& term : j.at("terms")) shapes.push_back(shape_from_json(term, d));
    return PotentialSpec(std::move(shapes), d);
  }
  return PotentialSpec(shape_from_json(j, d), d);
}

std::string PotentialSpec::hash() const {
  std::string s = to_json();
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace nht
