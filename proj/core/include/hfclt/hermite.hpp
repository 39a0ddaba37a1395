#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hfclt/convolve.hpp"

namespace hfclt {

/// Probabilists' Hermite polynomial H_m(x).
double hermite_eval(int m, double x);

/// H_0(x) .. H_{max_order}(x).
std::vector<double> hermite_all(int max_order, double x);

struct HermiteTransform {
  int order = 1;
};

/// F(x) = sum_j monomial[j] x^j
struct PolynomialTransform {
  std::vector<double> monomial;
};

struct PointwiseTransform {
  std::string name;
  std::function<double(double)> fn;
};

using Transform = std::variant<HermiteTransform, PolynomialTransform, PointwiseTransform>;

/// Parses `hermite:m`, `poly:a0,a1,...`, `square`, `cube`, `abs`, `tanh`.
Transform parse_transform(const std::string& text);
std::string transform_name(const Transform& t);

/// F(x) for any variant.
double apply_transform(const Transform& t, double x);

/// Coefficients of F = sum_{m>=1} c_m / m! H_m (c_0 removed by centering).
struct HermiteExpansion {
  /// coeffs[m-1] = c_m(F), m = 1..max_order()
  std::vector<double> coeffs;
  /// Quadrature only: doubling the node count moved some c_m by > 1e-8 relative.
  bool converged = true;
  /// Polynomial only: the degree exceeded the truncation order.
  bool truncated = false;

  int max_order() const { return static_cast<int>(coeffs.size()); }
  double c(int m) const { return m >= 1 && m <= max_order() ? coeffs[m - 1] : 0.0; }
  /// sum c_m^2 / m!, the variance of F(Z) for Z ~ N(0,1).
  double l2_norm_sq() const;
  /// Highest m with c_m != 0, or 0.
  int highest_order() const;
};

struct ExpandOptions {
  int quadrature_nodes = 128;
  double zero_threshold = 1e-12;
  double convergence_tolerance = 1e-8;
};

HermiteExpansion expand(const Transform& transform, int max_order, const ExpandOptions& options = {});

/// Nodes and weights for int e^{-x^2} f(x) dx.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussHermiteRule gauss_hermite(int n);

/// E[g(Z)] for Z ~ N(0,1) by the n-node rule.
double gaussian_expectation(const std::function<double(double)>& g, int n);

/// Monomial coefficients of F = sum_m (c_m / m!) H_m; inverse of expand() on polynomials.
std::vector<double> reconstruct_monomial(const HermiteExpansion& e);

/// sum_m c_m^2 / m! * C_{k,m}, valid for a unit-mass base spectrum.
double variance_subordinated(const HermiteExpansion& expansion, const ConvolutionPowers& powers,
                             std::span<const int> k);

double factorial(int m);

}  // namespace hfclt
