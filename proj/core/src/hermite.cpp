#include "hfclt/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "hfclt/error.hpp"
#include "text_util.hpp"

namespace hfclt {

double factorial(int m) {
  if (m < 0) throw InvalidArgument("factorial of negative m = " + std::to_string(m));
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

double hermite_eval(int m, double x) {
  if (m < 0) throw InvalidArgument("Hermite order m must be >= 0, got " + std::to_string(m));
  if (m == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int j = 1; j < m; ++j) {
    const double next = x * cur - j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> hermite_all(int max_order, double x) {
  if (max_order < 0) throw InvalidArgument("Hermite order must be >= 0, got " + std::to_string(max_order));
  std::vector<double> h(max_order + 1);
  h[0] = 1.0;
  if (max_order >= 1) h[1] = x;
  for (int j = 1; j < max_order; ++j) h[j + 1] = x * h[j] - j * h[j - 1];
  return h;
}

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v))
      throw InvalidArgument("transform: bad polynomial coefficient '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument("transform: poly needs at least one coefficient");
  return out;
}

}  // namespace

Transform parse_transform(const std::string& text) {
  if (text == "square") return PolynomialTransform{{-1.0, 0.0, 1.0}};
  if (text == "cube") return PolynomialTransform{{0.0, 0.0, 0.0, 1.0}};
  if (text == "abs") return PointwiseTransform{"abs", [](double x) { return std::abs(x); }};
  if (text == "tanh") return PointwiseTransform{"tanh", [](double x) { return std::tanh(x); }};
  if (text.rfind("hermite:", 0) == 0) {
    const std::string arg = text.substr(8);
    std::size_t used = 0;
    int m = -1;
    try {
      m = std::stoi(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != arg.size() || m < 1)
      throw InvalidArgument("transform: hermite order must be an integer >= 1, got '" + arg + "'");
    return HermiteTransform{m};
  }
  if (text.rfind("poly:", 0) == 0) return PolynomialTransform{parse_list(text.substr(5))};
  throw InvalidArgument("transform: unknown '" + text +
                        "' (expected hermite:m, poly:a0,a1,..., square, cube, abs, tanh)");
}

std::string transform_name(const Transform& t) {
  struct {
    std::string operator()(const HermiteTransform& h) const { return "hermite:" + std::to_string(h.order); }
    std::string operator()(const PolynomialTransform& p) const {
      std::string s = "poly:";
      for (std::size_t i = 0; i < p.monomial.size(); ++i) s += (i ? "," : "") + detail::fmt_double(p.monomial[i]);
      return s;
    }
    std::string operator()(const PointwiseTransform& p) const { return p.name; }
  } visitor;
  return std::visit(visitor, t);
}

double apply_transform(const Transform& t, double x) {
  struct {
    double x;
    double operator()(const HermiteTransform& h) const { return hermite_eval(h.order, x); }
    double operator()(const PolynomialTransform& p) const {
      double v = 0.0;
      for (auto it = p.monomial.rbegin(); it != p.monomial.rend(); ++it) v = v * x + *it;
      return v;
    }
    double operator()(const PointwiseTransform& p) const { return p.fn(x); }
  } visitor{x};
  return std::visit(visitor, t);
}

double HermiteExpansion::l2_norm_sq() const {
  double s = 0.0;
  for (int m = 1; m <= max_order(); ++m) s += coeffs[m - 1] * coeffs[m - 1] / factorial(m);
  return s;
}

int HermiteExpansion::highest_order() const {
  for (int m = max_order(); m >= 1; --m)
    if (coeffs[m - 1] != 0.0) return m;
  return 0;
}

GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) throw InvalidArgument("quadrature node count must be >= 1, got " + std::to_string(n));
  // Jacobi matrix eigenvalues as starting points, then Newton on the orthonormal recurrence
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw Error("Gauss-Hermite eigenvalue solve failed for n = " + std::to_string(n));

  const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
  GaussHermiteRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // eigenvalues come sorted ascending; fill from the largest node down
    double z = eig.eigenvalues()[n - 1 - i];
    double pp = 0.0;
    for (int iter = 0; iter < 4; ++iter) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double step = p1 / pp;
      if (!std::isfinite(step)) break;
      z -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
    }
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = std::isfinite(pp) ? 2.0 / (pp * pp) : 0.0;
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

double gaussian_expectation(const std::function<double(double)>& g, int n) {
  const GaussHermiteRule rule = gauss_hermite(n);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += rule.weights[i] * g(std::numbers::sqrt2 * rule.nodes[i]);
  return s / std::sqrt(std::numbers::pi);
}

namespace {

// c_m = E[F(Z) H_m(Z)] for m = 1..M.
std::vector<double> quadrature_coeffs(const std::function<double(double)>& f, int max_order, int n) {
  const GaussHermiteRule rule = gauss_hermite(n);
  std::vector<double> c(max_order, 0.0);
  for (int i = 0; i < n; ++i) {
    const double x = std::numbers::sqrt2 * rule.nodes[i];
    const double w = rule.weights[i] * f(x);
    if (w == 0.0) continue;
    const auto h = hermite_all(max_order, x);
    for (int m = 1; m <= max_order; ++m) c[m - 1] += w * h[m];
  }
  for (double& v : c) v /= std::sqrt(std::numbers::pi);
  return c;
}

// F = sum_m b_m H_m, by Horner with x H_m = H_{m+1} + m H_{m-1}.
std::vector<double> monomial_to_hermite(const std::vector<double>& a) {
  std::vector<double> b;
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    std::vector<double> next(b.size() + 1, 0.0);
    for (std::size_t m = 0; m < b.size(); ++m) {
      next[m + 1] += b[m];
      if (m >= 1) next[m - 1] += static_cast<double>(m) * b[m];
    }
    next[0] += *it;
    b = std::move(next);
  }
  return b;
}

}  // namespace

HermiteExpansion expand(const Transform& transform, int max_order, const ExpandOptions& options) {
  if (max_order < 1) throw InvalidArgument("truncation order M must be >= 1, got " + std::to_string(max_order));
  HermiteExpansion e;
  e.coeffs.assign(max_order, 0.0);
  if (const auto* h = std::get_if<HermiteTransform>(&transform)) {
    if (h->order < 0) throw InvalidArgument("Hermite order must be >= 0, got " + std::to_string(h->order));
    if (h->order > max_order)
      e.truncated = true;
    else if (h->order >= 1)
      e.coeffs[h->order - 1] = factorial(h->order);
  } else if (const auto* p = std::get_if<PolynomialTransform>(&transform)) {
    for (double a : p->monomial)
      if (!std::isfinite(a)) throw InvalidArgument("transform: polynomial coefficients must be finite");
    const auto b = monomial_to_hermite(p->monomial);
    for (std::size_t m = 1; m < b.size(); ++m) {
      if (static_cast<int>(m) <= max_order)
        e.coeffs[m - 1] = factorial(static_cast<int>(m)) * b[m];
      else if (b[m] != 0.0)
        e.truncated = true;
    }
  } else {
    const auto& pw = std::get<PointwiseTransform>(transform);
    if (options.quadrature_nodes < 1)
      throw InvalidArgument("quadrature_nodes must be >= 1, got " + std::to_string(options.quadrature_nodes));
    const auto coarse = quadrature_coeffs(pw.fn, max_order, options.quadrature_nodes);
    const auto fine = quadrature_coeffs(pw.fn, max_order, 2 * options.quadrature_nodes);
    double scale = 0.0;
    for (double v : fine) scale = std::max(scale, std::abs(v));
    for (int m = 0; m < max_order; ++m) {
      if (!std::isfinite(fine[m])) throw InvalidArgument("transform " + pw.name + " is not finite under quadrature");
      if (std::abs(fine[m] - coarse[m]) > options.convergence_tolerance * scale) e.converged = false;
    }
    e.coeffs = fine;
  }
  double scale = 0.0;
  for (double v : e.coeffs) scale = std::max(scale, std::abs(v));
  for (double& v : e.coeffs)
    if (std::abs(v) < options.zero_threshold * scale) v = 0.0;
  return e;
}

std::vector<double> reconstruct_monomial(const HermiteExpansion& e) {
  const int M = e.max_order();
  std::vector<double> out(M + 1, 0.0);
  std::vector<double> prev{1.0}, cur{0.0, 1.0};  // H_0, H_1 monomial coefficients
  for (int m = 1; m <= M; ++m) {
    const double w = e.c(m) / factorial(m);
    for (std::size_t j = 0; j < cur.size(); ++j) out[j] += w * cur[j];
    std::vector<double> next(cur.size() + 1, 0.0);
    for (std::size_t j = 0; j < cur.size(); ++j) next[j + 1] += cur[j];
    for (std::size_t j = 0; j < prev.size(); ++j) next[j] -= m * prev[j];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return out;
}

double variance_subordinated(const HermiteExpansion& expansion, const ConvolutionPowers& powers,
                             std::span<const int> k) {
  double v = 0.0;
  for (int m = 1; m <= expansion.max_order(); ++m) {
    const double c = expansion.c(m);
    if (c == 0.0) continue;
    if (!powers.has_order(m))
      throw InvalidArgument("convolution order " + std::to_string(m) + " missing (have 1.." +
                            std::to_string(powers.max_order()) + ")");
    v += c * c / factorial(m) * powers.order(m).at(k);
  }
  return v;
}

}  // namespace hfclt
