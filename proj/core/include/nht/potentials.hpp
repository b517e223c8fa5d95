#pragma once

#include <string>
#include <variant>
#include <vector>

#include "nht/common.hpp"
#include "nht/rng.hpp"

namespace nht {

// Gaussian well V(x) = -depth * exp(-|x - center|^2 / width^2).
struct GaussianWell {
  double depth;   // peak magnitude; positive depth means a well (V <= 0)
  double width;   // > 0
  std::vector<double> center;
};

// C^1 compact bump V(x) = height * (1 - |x - center|^2 / radius^2)^2 inside
// the ball |x - center| < radius, 0 outside.
struct CompactBump {
  double height;
  double radius;  // > 0
  std::vector<double> center;
};

struct PotentialNorms {
  double l1;      // ||V||_1
  double sup;     // ||V||_inf
  double int_v;   // integral of V (signed)
  double int_v2;  // integral of V^2
  bool quadrature_used = false;  // true when a sum required numeric cross terms
};

class PotentialSpec {
 public:
  using Shape = std::variant<GaussianWell, CompactBump>;

  PotentialSpec(Shape shape, int dimension);
  PotentialSpec(std::vector<Shape> shapes, int dimension);

  int dimension() const { return dimension_; }
  const std::vector<Shape>& shapes() const { return shapes_; }

  double operator()(const std::vector<double>& x) const;
  double operator()(double x) const;  // d = 1 convenience

  PotentialNorms exact_norms() const;

  // Global Holder constant M with |V(x)-V(y)| <= M |x-y|^gamma, verified by
  // randomized pair sampling.
  double holder_certificate(double gamma) const;

  bool is_nonpositive() const;

  // Componentwise center and scale of |V|'s mass, for proposal construction.
  std::vector<double> mass_center() const;
  double mass_scale() const;

  // Sum of the shapes' Lipschitz constants (a valid global bound).
  double lipschitz_constant() const;

  std::string to_json() const;
  static PotentialSpec from_json(const std::string& text);
  std::string hash() const;

 private:
  std::vector<Shape> shapes_;
  int dimension_;
};

}  // namespace nht
