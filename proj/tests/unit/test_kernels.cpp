#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "hfclt/cltcheck.hpp"
#include "hfclt/error.hpp"
#include "hfclt/kernels.hpp"

using namespace hfclt;
using testing::rel;

namespace {

DiscreteKernel two_atom() {
  // f(a,a)=1, f(a,b)=f(b,a)=2, f(b,b)=0
  return DiscreteKernel(2, AtomicMeasure({0.5, 0.5}), {1.0, 2.0, 2.0, 0.0});
}

double max_abs_diff(const DiscreteKernel& a, const DiscreteKernel& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("two-atom contraction by hand") {
  const auto f = two_atom();
  const auto c = contract(f, f, 1);
  REQUIRE(c.order() == 2);
  CHECK(c[0] == Complex(2.5, 0.0));
  CHECK(c[1] == Complex(1.0, 0.0));
  CHECK(c[2] == Complex(1.0, 0.0));
  CHECK(c[3] == Complex(2.0, 0.0));
  CHECK(kernel_norm(f) * kernel_norm(f) == doctest::Approx(2.25).epsilon(1e-15));
  const DiscreteKernel zero(2, f.measure());
  CHECK(kernel_norm(zero) == 0.0);
  const auto fz = contract(f, zero, 1);
  for (const auto& v : fz.values()) CHECK(v == Complex(0.0, 0.0));
}

TEST_CASE("measures and shapes") {
  CHECK_THROWS_AS(AtomicMeasure({1.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(AtomicMeasure(std::vector<double>{}), InvalidArgument);
  CHECK_THROWS_AS(DiscreteKernel(0, AtomicMeasure::uniform(3)), InvalidArgument);
  CHECK_THROWS_AS(DiscreteKernel(2, AtomicMeasure::uniform(3), std::vector<Complex>(8)), InvalidArgument);
  CHECK_THROWS_AS(DiscreteKernel(5, AtomicMeasure::uniform(64)), BudgetExceeded);
  const auto f = two_atom();
  CHECK_THROWS_AS(contract(f, f, 2), InvalidArgument);
  CHECK_THROWS_AS(contract(f, f, 0), InvalidArgument);
  CHECK_THROWS_AS(contract(f, DiscreteKernel(2, AtomicMeasure::uniform(2)), 1), InvalidArgument);
  CHECK_THROWS_AS(contract(f, DiscreteKernel(3, f.measure()), 1), InvalidArgument);
  CHECK(AtomicMeasure({0.5, 0.25}).total_mass() == 0.75);
}

TEST_CASE("conjugation, polarization and symmetry") {
  std::mt19937_64 rng(21);
  const AtomicMeasure mu({0.3, 1.1, 0.7, 2.0});
  for (int d = 2; d <= 3; ++d)
    for (int q = 1; q < d; ++q) {
      const auto f = random_symmetric_kernel(d, mu, rng);
      const auto g = random_symmetric_kernel(d, mu, rng);
      CHECK(f.symmetry_defect() < 1e-15);
      const auto fg = contract(f, g, q);
      CHECK(max_abs_diff(fg.conj(), contract(f.conj(), g.conj(), q)) == 0.0);
      CHECK(max_abs_diff(fg, contract_by_parts(f, g, q)) < 1e-13);
    }
  DiscreteKernel h(3, AtomicMeasure::uniform(3));
  h[1] = Complex(1.0, 2.0);
  CHECK(h.symmetry_defect() > 0.0);
  const auto s = symmetrize(h);
  CHECK(s.symmetry_defect() < 1e-16);
  CHECK(std::abs(s[1] - Complex(1.0, 2.0) / 3.0) < 1e-16);
}

TEST_CASE("pairing identity for contractions") {
  // <f (x)_2 g, u (x) v> = sum_a mu(a) F(a) G(a) with F = sum_x f(a, x) conj u(x) mu(x)
  std::mt19937_64 rng(8);
  const AtomicMeasure mu({0.5, 1.5, 1.0, 0.25});
  const std::size_t N = 4;
  const auto f = random_symmetric_kernel(3, mu, rng);
  const auto g = random_symmetric_kernel(3, mu, rng);
  const auto u = random_symmetric_kernel(1, mu, rng);
  const auto v = random_symmetric_kernel(1, mu, rng);
  const Complex lhs = inner(contract(f, g, 2), tensor_product(u, v));
  Complex rhs = 0.0;
  for (std::size_t a1 = 0; a1 < N; ++a1)
    for (std::size_t a2 = 0; a2 < N; ++a2) {
      Complex F = 0.0, G = 0.0;
      for (std::size_t x = 0; x < N; ++x) {
        F += f[(a1 * N + a2) * N + x] * std::conj(u[x]) * mu.weight(x);
        G += g[(a1 * N + a2) * N + x] * std::conj(v[x]) * mu.weight(x);
      }
      rhs += F * G * mu.weight(a1) * mu.weight(a2);
    }
  CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs));
}

TEST_CASE("complex contraction inequality") {
  std::mt19937_64 rng(1);
  const auto real = random_symmetric_kernel(3, AtomicMeasure::uniform(4), rng).real_part();
  const auto r = check_complex_inequality(real, 1);
  CHECK(r.lhs == r.rhs);
  CHECK(r.holds);
  const auto imag = random_symmetric_kernel(2, AtomicMeasure::uniform(4), rng).imag_part().scaled(Complex(0.0, 1.0));
  const auto i = check_complex_inequality(imag, 1);
  CHECK(rel(i.lhs, i.rhs) < 1e-14);
  CHECK(i.holds);
  int fails = 0;
  for (int t = 0; t < 60; ++t) {
    const int d = 2 + t % 2;
    const auto g = random_symmetric_kernel(d, AtomicMeasure::uniform(3 + t % 3), rng);
    for (int q = 1; q < d; ++q) fails += check_complex_inequality(g, q).holds ? 0 : 1;
  }
  CHECK(fails == 0);
}

TEST_CASE("tensor powers of a unit vector") {
  std::mt19937_64 rng(2);
  auto h = random_symmetric_kernel(1, AtomicMeasure({0.5, 2.0, 1.0}), rng);
  h = h.scaled(1.0 / kernel_norm(h));
  for (int m = 1; m <= 4; ++m) {
    const auto p = tensor_power(h, m);
    CHECK(p.order() == m);
    CHECK(kernel_norm(p) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(p.symmetry_defect() < 1e-15);
  }
}

TEST_CASE("spectral kernels carry the convolution powers") {
  const auto two = testing::two_point();
  auto n2 = [](const DiscreteKernel& k) { return kernel_norm(k) * kernel_norm(k); };
  CHECK(n2(build_spectral_kernel(two, 2, LatticePoint{0})) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(n2(build_spectral_kernel(two, 2, LatticePoint{2})) == doctest::Approx(0.25).epsilon(1e-15));

  const auto basis = spectral_basis(two);
  CHECK(basis.measure.atoms() == 3);
  for (const auto& fk : basis.f) CHECK(fk.size() <= 2);

  const Spectrum s = build_spectrum(AlgebraicModel{2.0, 1.0}, LatticeBox(1, 3));
  const auto p = convolve_power(s, 3, ConvolveOptions{ConvolveMethod::kDirect});
  for (int k = -9; k <= 9; ++k) {
    const auto h = build_spectral_kernel(s, 3, LatticePoint{k});
    CHECK(h.symmetry_defect() < 1e-15);
    CHECK(std::abs(n2(h) - p.order(3).at(LatticePoint{k})) <= 1e-12 * std::max(1e-300, p.order(3).at(LatticePoint{k})) + 1e-300);
  }

  const Spectrum s2 = build_spectrum(ExponentialModel{{0.7}, {1.0}}, LatticeBox(2, 1));
  const auto p2 = convolve_power(s2, 2, ConvolveOptions{ConvolveMethod::kDirect});
  const LatticePoint k2{1, -1};
  CHECK(rel(n2(build_spectral_kernel(s2, 2, k2)), p2.order(2).at(k2)) < 1e-12);
}

TEST_CASE("contraction norm formula") {
  const auto two = testing::two_point();
  for (int k : {0, 2}) {
    const auto c = verify_contraction_norm(two, 2, LatticePoint{k}, 1);
    CHECK(c.relative_error() < 1e-12);
    const auto p = convolve_power(two, 2);
    CHECK(rel(c.formula * 4.0, cond2_sum(p, LatticePoint{k}, 2, 1)) < 1e-14);
  }
  CHECK(verify_contraction_norm(two, 2, LatticePoint{2}, 1).formula == doctest::Approx(0.25));

  const Spectrum s = build_spectrum(AlgebraicModel{2.0, 1.0}, LatticeBox(1, 3));
  for (int m = 2; m <= 3; ++m)
    for (int q = 1; q < m; ++q)
      for (int k = 0; k <= 3; ++k) CHECK(verify_contraction_norm(s, m, LatticePoint{k}, q).relative_error() <= 1e-10);
  CHECK_THROWS_AS(verify_contraction_norm(s, 2, LatticePoint{0}, 2), InvalidArgument);
  CHECK_THROWS_AS(verify_contraction_norm(two, 2, LatticePoint{1}, 1), UnachievableFrequency);
}

}
