#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <span>
#include <vector>

#include "hfclt/spectrum.hpp"

namespace hfclt {

using Complex = std::complex<double>;

/// Finitely many atoms with strictly positive weights.
///
/// Stand-in for the non-atomic measure space of Wiener chaos: it carries the
/// Hilbert-space identities of kernels exactly, not the distribution theory of
/// multiple integrals.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  explicit AtomicMeasure(std::vector<double> weights);
  static AtomicMeasure uniform(std::size_t atoms, double weight = 1.0);

  std::size_t atoms() const { return weights_.size(); }
  double weight(std::size_t a) const { return weights_[a]; }
  std::span<const double> weights() const { return weights_; }
  double total_mass() const;

  bool operator==(const AtomicMeasure&) const = default;

 private:
  std::vector<double> weights_;
};

/// Complex order-d tensor over the d-fold atom grid, row-major (first argument slowest).
class DiscreteKernel {
 public:
  DiscreteKernel() = default;
  DiscreteKernel(int order, AtomicMeasure measure);
  DiscreteKernel(int order, AtomicMeasure measure, std::vector<Complex> values);

  int order() const { return order_; }
  std::size_t atoms() const { return measure_.atoms(); }
  const AtomicMeasure& measure() const { return measure_; }
  std::size_t size() const { return values_.size(); }
  std::span<const Complex> values() const { return values_; }
  std::span<Complex> values() { return values_; }

  Complex& operator()(std::span<const std::size_t> idx);
  Complex operator()(std::span<const std::size_t> idx) const;
  Complex& operator[](std::size_t flat) { return values_[flat]; }
  Complex operator[](std::size_t flat) const { return values_[flat]; }

  /// Product of the weights of the atoms addressed by a flat index.
  double weight_of(std::size_t flat) const;

  DiscreteKernel conj() const;
  DiscreteKernel real_part() const;
  DiscreteKernel imag_part() const;
  DiscreteKernel scaled(Complex factor) const;

  bool is_real() const;
  /// Largest |f(x) - f(sigma x)| over all permutations (d <= 4 exhaustive).
  double symmetry_defect() const;

 private:
  int order_ = 0;
  AtomicMeasure measure_;
  std::vector<Complex> values_;
};

/// Entries allowed in any kernel before BudgetExceeded is raised.
inline constexpr std::size_t kKernelBudget = std::size_t{1} << 24;

/// (f (x)_q g)(x, y) = sum_a f(a, x) g(a, y) prod mu(a_i), order 2(d-q).
DiscreteKernel contract(const DiscreteKernel& f, const DiscreteKernel& g, int q);

/// The same contraction assembled from the real parts:
/// a1(x)a2 - b1(x)b2 + i (a1(x)b2 + b1(x)a2).
DiscreteKernel contract_by_parts(const DiscreteKernel& f, const DiscreteKernel& g, int q);

/// (f, g) = sum f conj(g) prod mu.
Complex inner(const DiscreteKernel& f, const DiscreteKernel& g);

/// Plain L2 norm; callers apply the d! factor of the chaos isometry.
double kernel_norm(const DiscreteKernel& f);

/// Average over all permutations of the arguments.
DiscreteKernel symmetrize(const DiscreteKernel& f);

DiscreteKernel tensor_product(const DiscreteKernel& f, const DiscreteKernel& g);
DiscreteKernel tensor_power(const DiscreteKernel& h, int m);

struct ComplexInequality {
  double lhs = 0.0;  ///< |g (x)_q conj(g)|^2
  double rhs = 0.0;  ///< |g (x)_q g|^2
  bool holds = false;
};

ComplexInequality check_complex_inequality(const DiscreteKernel& g, int q);

/// Random symmetric complex kernel with i.i.d. Gaussian entries before symmetrization.
template <class Rng>
DiscreteKernel random_symmetric_kernel(int order, const AtomicMeasure& measure, Rng& rng);

/// Atom space realising the basis f_k of the spectral construction: one atom
/// per lattice point of the spectrum box, unit weights.
struct SpectralBasis {
  AtomicMeasure measure;
  /// f_k as a sparse vector: at most two (atom, value) entries per lattice point.
  std::vector<std::vector<std::pair<std::size_t, Complex>>> f;
};

/// f_0 = sqrt(C_0) e_0, f_k = sqrt(C_k/2) (e_k + i e_{-k}) for k in the
/// positive half (lexicographic), f_{-k} = conj(f_k).
SpectralBasis spectral_basis(const Spectrum& s);

/// h_{m,k}(x_1..x_m) = sum over sigma_1 + ... + sigma_m = k of f_{sigma_1}(x_1) ... f_{sigma_m}(x_m).
DiscreteKernel build_spectral_kernel(const Spectrum& s, int m, std::span<const int> k);

struct ContractionNormCheck {
  double bruteforce = 0.0;
  double formula = 0.0;
  double relative_error() const;
};

/// Compares |hh (x)_q conj(hh)|^2 computed by explicit contraction of the
/// normalised kernel hh = h / sqrt(m! C_{k,m}) against
/// (m! C_{k,m})^-2 sum_lambda C_{lambda,q}^2 C_{k-lambda,m-q}^2 from the convolution powers.
ContractionNormCheck verify_contraction_norm(const Spectrum& s, int m, std::span<const int> k, int q);

// ---------------------------------------------------------------------------

template <class Rng>
DiscreteKernel random_symmetric_kernel(int order, const AtomicMeasure& measure, Rng& rng) {
  DiscreteKernel k(order, measure);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& v : k.values()) {
    const double re = normal(rng);
    const double im = normal(rng);
    v = Complex(re, im);
  }
  return symmetrize(k);
}

}  // namespace hfclt
