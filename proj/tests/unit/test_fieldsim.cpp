#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "hfclt/convolve.hpp"
#include "hfclt/error.hpp"
#include "hfclt/fieldsim.hpp"

using namespace hfclt;
using testing::rel;

namespace {

CoefficientDraw one_mode(Complex a1) {
  CoefficientDraw d;
  d.box = LatticeBox(1, 1);
  d.a = {std::conj(a1), 0.0, a1};
  return d;
}

double estimate(const MomentReport& r, int k, const std::string& order, const std::string& stat) {
  const auto* e = r.find(LatticePoint{k}, order, stat);
  REQUIRE(e != nullptr);
  return e->estimate;
}

double se(const MomentReport& r, int k, const std::string& order, const std::string& stat) {
  return r.find(LatticePoint{k}, order, stat)->stderr_;
}

}  // namespace

TEST_SUITE("fieldsim") {

TEST_CASE("efficient lengths") {
  CHECK(efficient_length(1) == 1);
  CHECK(efficient_length(11) == 12);
  CHECK(efficient_length(129) == 135);
  CHECK(efficient_length(257) == 270);
  CHECK(efficient_length(4096) == 4096);
}

TEST_CASE("two-mode synthesis by hand") {
  const auto f = synthesize(one_mode(Complex(0.5, -0.5)), 8);
  REQUIRE(f.values.size() == 8);
  for (int j = 0; j < 8; ++j) {
    const double t = 2.0 * std::numbers::pi * j / 8.0;
    CHECK(f.values[j] == doctest::Approx(std::cos(t) + std::sin(t)).epsilon(1e-14));
  }
  CHECK(f.imag_residue < 1e-14);
  const auto z = synthesize(one_mode(0.0), 16);
  for (double v : z.values) CHECK(v == 0.0);
  CHECK_THROWS_AS(synthesize(one_mode(1.0), 2), InvalidArgument);
}

TEST_CASE("draws are conjugate symmetric with the right variances") {
  const Spectrum s = build_spectrum(ExponentialModel{{0.3}, {1.0}}, LatticeBox(2, 3));
  auto rng = replication_stream(4, 0);
  for (int t = 0; t < 20; ++t) {
    const auto d = draw_coefficients(s, rng);
    for (std::size_t i = 0; i < d.a.size(); ++i) CHECK(d.a[i] == std::conj(d.a[d.box.mirror(i)]));
    CHECK(d.a[d.box.size() / 2] == Complex(0.0, 0.0));
  }

  const auto two = testing::two_point();
  const int n = 100000;
  double s1 = 0, s2 = 0, c1 = 0, c2 = 0;
  for (int i = 0; i < n; ++i) {
    auto r = replication_stream(77, i);
    const Complex a = draw_coefficients(two, r).at(LatticePoint{1});
    const double x = std::norm(a), y = a.real() * a.imag();
    s1 += x;
    s2 += x * x;
    c1 += y;
    c2 += y * y;
  }
  const double m = s1 / n, v = s2 / n - m * m;
  CHECK(std::abs(m - 0.5) < 5.0 * std::sqrt(v / n));
  const double mc = c1 / n, vc = c2 / n - mc * mc;
  CHECK(std::abs(mc) < 5.0 * std::sqrt(vc / n));
}

TEST_CASE("streams depend only on seed and index") {
  auto a = replication_stream(10, 3);
  auto b = replication_stream(10, 3);
  auto c = replication_stream(10, 4);
  auto d = replication_stream(11, 3);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());
}

TEST_CASE("H1 recovers the Gaussian coefficients") {
  const Spectrum s = build_spectrum(AlgebraicModel{1.5, 1.0}, LatticeBox(2, 4));
  auto rng = replication_stream(1, 0);
  const auto d = draw_coefficients(s, rng);
  const auto f = synthesize(d, 9);
  std::vector<LatticePoint> freqs;
  for (std::size_t i = 0; i < s.box().size(); ++i) freqs.push_back(s.box().point(i));
  const auto c = subordinated_coefficients(f, parse_transform("hermite:1"), freqs);
  CHECK(c.exact);
  for (std::size_t i = 0; i < freqs.size(); ++i) CHECK(std::abs(c.values[i] - d.a[i]) < 1e-13);
}

TEST_CASE("H2 on the two-point spectrum") {
  const Complex a1(0.3, -1.2);
  const auto f = synthesize(one_mode(a1), 5);
  const auto c = subordinated_coefficients(f, parse_transform("square"), {LatticePoint{2}, LatticePoint{-2}, LatticePoint{0}});
  CHECK(c.exact);
  CHECK(std::abs(c.values[0] - a1 * a1) < 1e-14);
  CHECK(c.values[1] == std::conj(c.values[0]));
  // H_2 mean is 2|a_1|^2 - 1
  CHECK(std::abs(c.values[2] - (2.0 * std::norm(a1) - 1.0)) < 1e-14);
  const auto coarse = synthesize(one_mode(a1), 4);
  CHECK_FALSE(subordinated_coefficients(coarse, parse_transform("square"), {LatticePoint{1}}).exact);
  CHECK_FALSE(subordinated_coefficients(f, parse_transform("tanh"), {LatticePoint{1}}).exact);
  CHECK_THROWS_AS(subordinated_coefficients(f, parse_transform("square"), {LatticePoint{3}}), InvalidArgument);
}

TEST_CASE("exact grids agree") {
  const Spectrum s = build_spectrum(ExponentialModel{{0.4}, {1.0}}, LatticeBox(1, 6));
  auto rng = replication_stream(2, 5);
  const auto d = draw_coefficients(s, rng);
  const auto t = parse_transform("poly:0.5,-1,0.25,1");
  std::vector<LatticePoint> freqs;
  for (int k = -18; k <= 18; ++k) freqs.push_back(LatticePoint{k});
  const auto a = subordinated_coefficients(synthesize(d, 37), t, freqs);
  const auto b = subordinated_coefficients(synthesize(d, 64), t, freqs);
  CHECK(a.exact);
  CHECK(b.exact);
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    CHECK(std::abs(a.values[i] - b.values[i]) < 1e-10);
    CHECK(a.values[i] == std::conj(a.values[freqs.size() - 1 - i]));
  }
}

TEST_CASE("grid variance matches the total mass") {
  const Spectrum s = build_spectrum(ExponentialModel{{0.5}, {1.0}}, LatticeBox(1, 8));
  const int n = 10000;
  double s1 = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    auto rng = replication_stream(9, i);
    const auto f = synthesize(draw_coefficients(s, rng), 17);
    double v = 0;
    for (double x : f.values) v += x * x;
    v /= f.values.size();
    s1 += v;
    s2 += v * v;
  }
  const double m = s1 / n;
  CHECK(std::abs(m - s.total_mass()) < 5.0 * std::sqrt((s2 / n - m * m) / n));
}

TEST_CASE("moment report: variance identity and symmetries") {
  const Spectrum s = build_spectrum(ExponentialModel{{0.5}, {1.0}}, LatticeBox(1, 8));
  McConfig cfg;
  cfg.freqs = {LatticePoint{1}, LatticePoint{4}, LatticePoint{8}};
  cfg.orders = {1, 2, 3};
  cfg.reps = 4000;
  cfg.seed = 17;
  const auto r = mc_moments(s, cfg);
  CHECK(r.exact);
  CHECK(r.grid >= 49);
  CHECK(r.max_imag_residue < 1e-10);
  const auto p = convolve_power(s.normalized(), 3);
  for (const auto& k : cfg.freqs)
    for (int m = 1; m <= 3; ++m) {
      const std::string o = std::to_string(m);
      const double want = factorial(m) * p.order(m).at(k);
      const auto* e = r.find(k, o, "abs2");
      REQUIRE(e != nullptr);
      CHECK(std::abs(e->estimate - want) < 5.0 * e->stderr_);
      CHECK(std::abs(estimate(r, k[0], o, "abs2_ratio") - 1.0) < 5.0 * se(r, k[0], o, "abs2_ratio"));
      CHECK(std::abs(estimate(r, k[0], o, "re_im_norm")) < 5.0 * se(r, k[0], o, "re_im_norm"));
      CHECK(std::abs(estimate(r, k[0], o, "re2_norm") - estimate(r, k[0], o, "im2_norm")) <
            5.0 * (se(r, k[0], o, "re2_norm") + se(r, k[0], o, "im2_norm")));
    }
  for (const char* stat : {"cross_re", "cross_im"})
    CHECK(std::abs(estimate(r, 4, "2x3", stat)) < 5.0 * se(r, 4, "2x3", stat));
  // Gaussian layer
  CHECK(std::abs(estimate(r, 4, "1", "re4_norm") - 0.75) < 5.0 * se(r, 4, "1", "re4_norm"));
  CHECK(moment_report_csv(r).rfind("freq,order,stat,estimate,stderr,reps\n", 0) == 0);
}

TEST_CASE("moment report is bit-identical across worker counts") {
  const Spectrum s = build_spectrum(AlgebraicModel{2.0, 1.0}, LatticeBox(1, 6));
  McConfig cfg;
  cfg.freqs = {LatticePoint{3}, LatticePoint{6}};
  cfg.orders = {2};
  cfg.transform = parse_transform("cube");
  cfg.reps = 700;
  cfg.seed = 99;
  cfg.block_size = 64;
  cfg.workers = 1;
  const auto a = moment_report_csv(mc_moments(s, cfg));
  cfg.workers = 5;
  const auto b = moment_report_csv(mc_moments(s, cfg));
  CHECK(a == b);
  cfg.seed = 100;
  CHECK(moment_report_csv(mc_moments(s, cfg)) != a);
}

TEST_CASE("moment report validation") {
  const Spectrum s = build_spectrum(AlgebraicModel{2.0, 1.0}, LatticeBox(1, 6));
  McConfig cfg;
  cfg.freqs = {LatticePoint{3}};
  cfg.orders = {2};
  cfg.reps = 99;
  CHECK_THROWS_AS(mc_moments(s, cfg), InvalidArgument);
  cfg.reps = 200;
  cfg.grid = 20;
  CHECK_THROWS_AS(mc_moments(s, cfg), InvalidArgument);
  cfg.grid = 0;
  cfg.max_work = 1000;
  CHECK_THROWS_AS(mc_moments(s, cfg), BudgetExceeded);
  cfg.max_work = 2e11;
  cfg.orders = {0};
  CHECK_THROWS_AS(mc_moments(s, cfg), InvalidArgument);
  cfg.orders = {2};
  cfg.freqs = {LatticePoint{1}};
  CHECK_THROWS_AS(mc_moments(testing::two_point(), cfg), UnachievableFrequency);
}

}
