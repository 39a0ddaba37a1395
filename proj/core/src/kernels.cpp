#include "hfclt/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "hfclt/cltcheck.hpp"
#include "hfclt/convolve.hpp"
#include "hfclt/error.hpp"
#include "hfclt/hermite.hpp"

namespace hfclt {

namespace {

std::size_t checked_power(std::size_t base, int exponent) {
  std::size_t out = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && out > kKernelBudget / base)
      throw BudgetExceeded("kernel with " + std::to_string(base) + "^" + std::to_string(exponent) +
                           " entries exceeds the budget of " + std::to_string(kKernelBudget));
    out *= base;
  }
  if (out > kKernelBudget)
    throw BudgetExceeded("kernel with " + std::to_string(out) + " entries exceeds the budget of " +
                         std::to_string(kKernelBudget));
  return out;
}

void require_same_measure(const DiscreteKernel& f, const DiscreteKernel& g) {
  if (!(f.measure() == g.measure())) throw InvalidArgument("kernels live on different measures");
}

// Flat index of the argument tuple permuted by perm: out digit i = in digit perm[i].
std::size_t permute_flat(std::size_t flat, const std::vector<int>& perm, std::size_t n,
                         std::vector<std::size_t>& digits) {
  const int d = static_cast<int>(perm.size());
  for (int i = d - 1; i >= 0; --i) {
    digits[i] = flat % n;
    flat /= n;
  }
  std::size_t out = 0;
  for (int i = 0; i < d; ++i) out = out * n + digits[perm[i]];
  return out;
}

}  // namespace

AtomicMeasure::AtomicMeasure(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidArgument("measure needs at least one atom");
  for (double w : weights_)
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("atom weights must be finite and > 0");
}

AtomicMeasure AtomicMeasure::uniform(std::size_t atoms, double weight) {
  return AtomicMeasure(std::vector<double>(atoms, weight));
}

double AtomicMeasure::total_mass() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

DiscreteKernel::DiscreteKernel(int order, AtomicMeasure measure)
    : order_(order), measure_(std::move(measure)) {
  if (order < 1) throw InvalidArgument("kernel order d must be >= 1, got " + std::to_string(order));
  values_.assign(checked_power(measure_.atoms(), order), Complex{});
}

DiscreteKernel::DiscreteKernel(int order, AtomicMeasure measure, std::vector<Complex> values)
    : DiscreteKernel(order, std::move(measure)) {
  if (values.size() != values_.size())
    throw InvalidArgument("kernel needs " + std::to_string(values_.size()) + " values, got " +
                          std::to_string(values.size()));
  values_ = std::move(values);
}

Complex& DiscreteKernel::operator()(std::span<const std::size_t> idx) {
  std::size_t flat = 0;
  for (std::size_t i : idx) flat = flat * atoms() + i;
  return values_[flat];
}

Complex DiscreteKernel::operator()(std::span<const std::size_t> idx) const {
  std::size_t flat = 0;
  for (std::size_t i : idx) flat = flat * atoms() + i;
  return values_[flat];
}

double DiscreteKernel::weight_of(std::size_t flat) const {
  double w = 1.0;
  for (int i = 0; i < order_; ++i) {
    w *= measure_.weight(flat % atoms());
    flat /= atoms();
  }
  return w;
}

DiscreteKernel DiscreteKernel::conj() const {
  DiscreteKernel out(*this);
  for (auto& v : out.values_) v = std::conj(v);
  return out;
}

DiscreteKernel DiscreteKernel::real_part() const {
  DiscreteKernel out(*this);
  for (auto& v : out.values_) v = v.real();
  return out;
}

DiscreteKernel DiscreteKernel::imag_part() const {
  DiscreteKernel out(*this);
  for (auto& v : out.values_) v = v.imag();
  return out;
}

DiscreteKernel DiscreteKernel::scaled(Complex factor) const {
  DiscreteKernel out(*this);
  for (auto& v : out.values_) v *= factor;
  return out;
}

bool DiscreteKernel::is_real() const {
  return std::all_of(values_.begin(), values_.end(), [](Complex v) { return v.imag() == 0.0; });
}

double DiscreteKernel::symmetry_defect() const {
  std::vector<int> perm(order_);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> digits(order_);
  double worst = 0.0;
  while (std::next_permutation(perm.begin(), perm.end()))
    for (std::size_t i = 0; i < values_.size(); ++i)
      worst = std::max(worst, std::abs(values_[i] - values_[permute_flat(i, perm, atoms(), digits)]));
  return worst;
}

DiscreteKernel contract(const DiscreteKernel& f, const DiscreteKernel& g, int q) {
  require_same_measure(f, g);
  if (f.order() != g.order())
    throw InvalidArgument("contraction needs equal orders, got " + std::to_string(f.order()) + " and " +
                          std::to_string(g.order()));
  const int d = f.order();
  if (q < 1 || q > d - 1)
    throw InvalidArgument("contraction index q must lie in 1..d-1, got q = " + std::to_string(q) +
                          ", d = " + std::to_string(d));
  const std::size_t n = f.atoms();
  DiscreteKernel out(2 * (d - q), f.measure());
  const std::size_t na = checked_power(n, q);
  const std::size_t nr = checked_power(n, d - q);
  const auto fv = f.values();
  const auto gv = g.values();
  auto ov = out.values();
  for (std::size_t a = 0; a < na; ++a) {
    double w = 1.0;
    for (std::size_t rest = a, i = 0; i < static_cast<std::size_t>(q); ++i, rest /= n)
      w *= f.measure().weight(rest % n);
    const Complex* frow = fv.data() + a * nr;
    const Complex* grow = gv.data() + a * nr;
    for (std::size_t x = 0; x < nr; ++x) {
      const Complex fx = frow[x] * w;
      if (fx == Complex{}) continue;
      Complex* orow = ov.data() + x * nr;
      for (std::size_t y = 0; y < nr; ++y) orow[y] += fx * grow[y];
    }
  }
  return out;
}

DiscreteKernel contract_by_parts(const DiscreteKernel& f, const DiscreteKernel& g, int q) {
  const DiscreteKernel a1 = f.real_part(), b1 = f.imag_part();
  const DiscreteKernel a2 = g.real_part(), b2 = g.imag_part();
  const DiscreteKernel aa = contract(a1, a2, q), bb = contract(b1, b2, q);
  const DiscreteKernel ab = contract(a1, b2, q), ba = contract(b1, a2, q);
  DiscreteKernel out(aa);
  const Complex i{0.0, 1.0};
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = aa[x] - bb[x] + i * (ab[x] + ba[x]);
  return out;
}

Complex inner(const DiscreteKernel& f, const DiscreteKernel& g) {
  require_same_measure(f, g);
  if (f.order() != g.order()) throw InvalidArgument("inner product needs equal orders");
  Complex s{};
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(g[i]) * f.weight_of(i);
  return s;
}

double kernel_norm(const DiscreteKernel& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::norm(f[i]) * f.weight_of(i);
  return std::sqrt(s);
}

DiscreteKernel symmetrize(const DiscreteKernel& f) {
  const int d = f.order();
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> digits(d);
  DiscreteKernel out(d, f.measure());
  double count = 0.0;
  do {
    for (std::size_t i = 0; i < f.size(); ++i) out[i] += f[permute_flat(i, perm, f.atoms(), digits)];
    count += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (auto& v : out.values()) v /= count;
  return out;
}

DiscreteKernel tensor_product(const DiscreteKernel& f, const DiscreteKernel& g) {
  require_same_measure(f, g);
  DiscreteKernel out(f.order() + g.order(), f.measure());
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) out[i * g.size() + j] = f[i] * g[j];
  return out;
}

DiscreteKernel tensor_power(const DiscreteKernel& h, int m) {
  if (m < 1) throw InvalidArgument("tensor power m must be >= 1, got " + std::to_string(m));
  DiscreteKernel out = h;
  for (int j = 2; j <= m; ++j) out = tensor_product(out, h);
  return out;
}

ComplexInequality check_complex_inequality(const DiscreteKernel& g, int q) {
  ComplexInequality r;
  const double a = kernel_norm(contract(g, g.conj(), q));
  const double b = kernel_norm(contract(g, g, q));
  r.lhs = a * a;
  r.rhs = b * b;
  r.holds = r.lhs + 1e-12 * std::max({1.0, r.lhs, r.rhs}) >= r.rhs;
  return r;
}

SpectralBasis spectral_basis(const Spectrum& s) {
  const LatticeBox& box = s.box();
  const std::size_t n = box.size();
  const std::size_t center = n / 2;
  SpectralBasis b;
  b.measure = AtomicMeasure::uniform(n, 1.0);
  b.f.resize(n);
  const auto v = s.values();
  if (v[center] > 0.0) b.f[center].emplace_back(center, Complex(std::sqrt(v[center]), 0.0));
  for (std::size_t i = center + 1; i < n; ++i) {
    const std::size_t j = box.mirror(i);
    if (!(v[i] > 0.0)) continue;
    const double r = std::sqrt(v[i] / 2.0);
    b.f[i] = {{i, Complex(r, 0.0)}, {j, Complex(0.0, r)}};
    b.f[j] = {{i, Complex(r, 0.0)}, {j, Complex(0.0, -r)}};
  }
  return b;
}

DiscreteKernel build_spectral_kernel(const Spectrum& s, int m, std::span<const int> k) {
  if (m < 1) throw InvalidArgument("kernel order m must be >= 1, got " + std::to_string(m));
  if (static_cast<int>(k.size()) != s.dim())
    throw InvalidArgument("frequency has " + std::to_string(k.size()) + " coordinates, spectrum has " +
                          std::to_string(s.dim()));
  const SpectralBasis basis = spectral_basis(s);
  DiscreteKernel h(m, basis.measure);
  const LatticeBox& box = s.box();
  const int n = box.dim();
  const std::size_t atoms = box.size();
  const auto coords = box.coordinate_table();
  auto ov = h.values();
  std::vector<int> remaining(k.begin(), k.end());
  std::function<void(int, std::size_t, Complex)> rec = [&](int j, std::size_t prefix, Complex prod) {
    if (j == m - 1) {
      if (!box.contains(remaining)) return;
      for (const auto& [atom, val] : basis.f[box.index(remaining)]) ov[prefix * atoms + atom] += prod * val;
      return;
    }
    for (std::size_t sigma = 0; sigma < atoms; ++sigma) {
      if (basis.f[sigma].empty()) continue;
      for (int d = 0; d < n; ++d) remaining[d] -= coords[sigma * n + d];
      for (const auto& [atom, val] : basis.f[sigma]) rec(j + 1, prefix * atoms + atom, prod * val);
      for (int d = 0; d < n; ++d) remaining[d] += coords[sigma * n + d];
    }
  };
  rec(0, 0, Complex(1.0, 0.0));
  return h;
}

double ContractionNormCheck::relative_error() const {
  return std::abs(bruteforce - formula) / std::max(std::abs(formula), std::numeric_limits<double>::min());
}

ContractionNormCheck verify_contraction_norm(const Spectrum& s, int m, std::span<const int> k, int q) {
  if (m < 2 || q < 1 || q > m - 1)
    throw InvalidArgument("need m >= 2 and 1 <= q <= m-1, got m = " + std::to_string(m) + ", q = " +
                          std::to_string(q));
  ConvolveOptions opts;
  opts.method = ConvolveMethod::kDirect;
  const ConvolutionPowers powers = convolve_power(s, m, opts);
  ContractionNormCheck r;
  const double mf = factorial(m);
  r.formula = cond2_sum(powers, k, m, q) / (mf * mf);
  const double c = powers.order(m).at(k);
  const DiscreteKernel h = build_spectral_kernel(s, m, k).scaled(1.0 / std::sqrt(mf * c));
  const double norm = kernel_norm(contract(h, h.conj(), q));
  r.bruteforce = norm * norm;
  return r;
}

}  // namespace hfclt
