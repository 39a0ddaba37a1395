#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "hfclt/cltcheck.hpp"
#include "hfclt/error.hpp"

using namespace hfclt;
using testing::rel;

namespace {

// brute force sums over the boxes, no shared code with the library
struct Brute {
  std::vector<double> cq, cr;
  int kq = 0, kr = 0;
  double sup = 0.0, sum = 0.0, sq = 0.0;
  void run(int k) {
    sup = sum = sq = 0.0;
    for (int l = -kq; l <= kq; ++l) {
      const int j = k - l;
      if (j < -kr || j > kr) continue;
      const double t = cq[l + kq] * cr[j + kr];
      sup = std::max(sup, t);
      sum += t;
      sq += t * t;
    }
  }
};

std::vector<double> exp_table(double theta, int K) {
  std::vector<double> v(2 * K + 1);
  for (int k = -K; k <= K; ++k) v[k + K] = k == 0 ? 0.0 : std::exp(-theta * std::abs(k));
  return v;
}

Spectrum random_spectrum(std::mt19937_64& rng, int dim, int K) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const LatticeBox box(dim, K);
  std::vector<double> v(box.size(), 0.0);
  for (std::size_t i = box.size() / 2 + 1; i < box.size(); ++i) {
    const double x = u(rng) < 0.2 ? 0.0 : std::exp(-8.0 * u(rng));
    v[i] = x;
    v[box.mirror(i)] = x;
  }
  v[box.size() / 2] = u(rng) < 0.5 ? 0.0 : u(rng);
  v.back() = v.front() = 0.3;
  return build_spectrum(TableModel{v}, box);
}

}  // namespace

TEST_SUITE("cltcheck") {

TEST_CASE("two-point conditions") {
  const auto p = convolve_power(testing::two_point(), 2);
  CHECK(cond2_sum(p, LatticePoint{2}, 2, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cond2_sum(p, LatticePoint{0}, 2, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cond3_ratio(p, LatticePoint{2}, 2, 1) == 1.0);
  CHECK(cond3_ratio(p, LatticePoint{0}, 2, 1) == 0.5);

  const auto b0 = bridge_distribution(p, LatticePoint{0}, 2, 1);
  REQUIRE(b0.probabilities.size() == 2);
  CHECK(b0.probabilities[0].first == LatticePoint{-1});
  CHECK(b0.probabilities[0].second == 0.5);
  CHECK(b0.probabilities[1].first == LatticePoint{1});
  CHECK(b0.probabilities[1].second == 0.5);
  const auto b2 = bridge_distribution(p, LatticePoint{2}, 2, 1);
  REQUIRE(b2.probabilities.size() == 1);
  CHECK(b2.probabilities[0].first == LatticePoint{1});
  CHECK(b2.probabilities[0].second == 1.0);
}

TEST_CASE("unachievable and underflowed frequencies are told apart") {
  const auto p = convolve_power(testing::two_point(), 3);
  CHECK_THROWS_AS(cond2_sum(p, LatticePoint{1}, 2, 1), UnachievableFrequency);
  CHECK_THROWS_AS(cond3_ratio(p, LatticePoint{2}, 3, 1), UnachievableFrequency);
  CHECK_THROWS_AS(bridge_distribution(p, LatticePoint{5}, 2, 1), UnachievableFrequency);
  CHECK_THROWS_AS(cond3_ratio(p, LatticePoint{0}, 2, 2), InvalidArgument);
  CHECK_THROWS_AS(cond3_ratio(p, LatticePoint{0}, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(cond3_ratio(p, LatticePoint{0, 0}, 2, 1), InvalidArgument);

  const Spectrum s = build_spectrum(ExponentialModel{{5.0}, {1.0}}, LatticeBox(1, 256));
  const auto q = convolve_power(s, 2);
  CHECK_THROWS_AS(cond3_ratio(q, LatticePoint{256}, 2, 1), NumericalUnderflow);
}

TEST_CASE("algebraic cond2 against a double loop") {
  const Spectrum s = build_spectrum(AlgebraicModel{2.0, 1.0}, LatticeBox(1, 256));
  const auto p = convolve_power(s, 2);
  CHECK(rel(cond2_sum(p, LatticePoint{64}, 2, 1), 0.10042321068920851) < 1e-12);
  CHECK(rel(cond3_ratio(p, LatticePoint{64}, 2, 1), 0.1568857110180978) < 1e-12);
}

TEST_CASE("exponential ratios decay like 1/k") {
  const int K = 512;
  const Spectrum s = build_spectrum(ExponentialModel{{0.5}, {1.0}}, LatticeBox(1, K));
  const auto p = convolve_power(s, 3);
  // numpy direct sums at K = 512
  const std::vector<std::pair<int, double>> m2 = {
      {16, 0.06186605308760937}, {32, 0.03109070539733016}, {64, 0.015585074590897672},
      {128, 0.007802505879104727}, {256, 0.0039037498706340932}};
  const std::vector<std::pair<int, double>> m3 = {
      {16, 0.1123529922646989}, {32, 0.059598082777839345}, {64, 0.030561649909068987},
      {128, 0.015457822855146724}, {256, 0.007771335471045608}};
  for (const auto& [k, want] : m2) CHECK(rel(cond3_ratio(p, LatticePoint{k}, 2, 1), want) < 1e-12);
  for (const auto& [k, want] : m3) {
    CHECK(rel(cond3_ratio(p, LatticePoint{k}, 3, 1), want) < 1e-12);
    CHECK(rel(cond3_ratio(p, LatticePoint{k}, 3, 2), want) < 1e-12);
  }
  const double e = std::exp(-1.0);
  CHECK(rel(cond3_ratio(p, LatticePoint{256}, 2, 1), 1.0 / (256 + 2 * e / (1 - e) - 1)) < 1e-10);
}

TEST_CASE("algebraic ratios stay bounded away from zero") {
  const Spectrum s = build_spectrum(AlgebraicModel{2.0, 1.0}, LatticeBox(1, 2048));
  const auto p = convolve_power(s, 2);
  // numpy direct sums at K = 2048
  CHECK(rel(cond3_ratio(p, LatticePoint{8}, 2, 1), 0.20137607391358145) < 1e-12);
  CHECK(rel(cond3_ratio(p, LatticePoint{64}, 2, 1), 0.15687981996762698) < 1e-12);
  CHECK(rel(cond3_ratio(p, LatticePoint{512}, 2, 1), 0.15257845012085522) < 1e-12);
  CHECK(rel(cond2_sum(p, LatticePoint{512}, 2, 1), 0.10000743887653908) < 1e-12);
}

TEST_CASE("brute force agreement on exponential powers") {
  const int K = 40;
  const Spectrum s = build_spectrum(ExponentialModel{{0.5}, {1.0}}, LatticeBox(1, K));
  const auto p = convolve_power(s, 3);
  Brute b;
  b.cq = exp_table(0.5, K);
  b.kq = K;
  const auto c2 = p.order(2).values();
  b.cr.assign(c2.begin(), c2.end());
  b.kr = 2 * K;
  for (int k = -3 * K + 1; k < 3 * K; k += 7) {
    b.run(k);
    CHECK(rel(cond3_ratio(p, LatticePoint{k}, 3, 1), b.sup / b.sum) < 1e-12);
    CHECK(rel(cond2_sum(p, LatticePoint{k}, 3, 1), b.sq / (b.sum * b.sum)) < 1e-12);
  }
}

TEST_CASE("sandwich and bridge identities on random spectra") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 12; ++trial) {
    const int dim = 1 + trial % 2;
    const Spectrum s = random_spectrum(rng, dim, dim == 1 ? 5 : 2);
    const auto p = convolve_power(s, 4);
    for (int m = 2; m <= 4; ++m) {
      const auto& box = p.order(m).box();
      for (std::size_t i = 0; i < box.size(); i += 3) {
        if (!(p.order(m)[i] > 0.0)) continue;
        const auto k = box.point(i);
        double max2 = 0.0, max3 = 0.0;
        for (int q = 1; q < m; ++q) {
          const double c2 = cond2_sum(p, k, m, q);
          const double c3 = cond3_ratio(p, k, m, q);
          CHECK(c3 > 0.0);
          CHECK(c3 <= 1.0 + 1e-12);
          CHECK(c2 <= c3 + 1e-12);
          max2 = std::max(max2, c2);
          max3 = std::max(max3, c3);
          const auto br = bridge_distribution(p, k, m, q);
          CHECK(std::abs(br.max_probability() - c3) <= 1e-14);
          CHECK(std::abs(br.total() - 1.0) <= 1e-10);
        }
        CHECK(max2 + 1e-12 >= max3 * max3);
      }
    }
  }
}

TEST_CASE("bridge at an exponential frequency") {
  const Spectrum s = build_spectrum(ExponentialModel{{0.5}, {1.0}}, LatticeBox(1, 32));
  const auto p = convolve_power(s, 3);
  const auto b = bridge_distribution(p, LatticePoint{20}, 3, 2);
  CHECK(std::abs(b.max_probability() - cond3_ratio(p, LatticePoint{20}, 3, 2)) <= 1e-14);
  for (const auto& [lam, prob] : b.probabilities) CHECK(prob > 0.0);
}

TEST_CASE("report rows and csv") {
  const auto p = convolve_power(testing::two_point(), 3);
  const auto r = clt_report(p, {LatticePoint{1}, LatticePoint{2}, LatticePoint{3}}, 3, 2);
  REQUIRE(r.size() == 3);
  CHECK(r[0].achievable);
  CHECK(r[0].rows.size() == 2);
  CHECK(r[0].variance == doctest::Approx(6 * 0.375));
  for (const auto& row : r[0].rows) CHECK(row.cond2_sum <= row.cond3_ratio + 1e-12);
  CHECK_FALSE(r[1].achievable);
  CHECK(r[1].rows.empty());
  CHECK(r[2].rows[0].cond3_ratio == doctest::Approx(1.0));
  const std::string csv = clt_report_csv(r);
  CHECK(csv.rfind("freq,m,q,cond2_sum,cond3_ratio,variance\n", 0) == 0);
  CHECK(csv.find("2,3,,unachievable,unachievable,0") != std::string::npos);

  const auto serial = clt_report(p, {LatticePoint{1}, LatticePoint{3}, LatticePoint{-1}}, 3, 1);
  const auto threaded = clt_report(p, {LatticePoint{1}, LatticePoint{3}, LatticePoint{-1}}, 3, 4);
  CHECK(clt_report_csv(serial) == clt_report_csv(threaded));
}

TEST_CASE("general transform: single Hermite order") {
  const Spectrum s = build_spectrum(ExponentialModel{{0.5}, {1.0}}, LatticeBox(1, 16));
  const auto p = convolve_power(s.normalized(), 3);
  const HermiteExpansion h3{{0.0, 0.0, 6.0}};
  const std::vector<LatticePoint> freqs{LatticePoint{4}, LatticePoint{8}, LatticePoint{16}};
  const auto r = general_transform_report(p, h3, freqs, 3, 3);
  for (std::size_t f = 0; f < freqs.size(); ++f) {
    CHECK(rel(r.variance[f], 6.0 * p.order(3).at(freqs[f])) < 1e-14);
    CHECK(r.ratios[f][2] == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(r.tail == 0.0);
  CHECK(r.sigma_sq_f == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("general transform: H1 + H2 on the two-point spectrum") {
  const auto p = convolve_power(testing::two_point(), 2);
  const HermiteExpansion e{{1.0, 2.0}};
  const auto r = general_transform_report(p, e, {LatticePoint{0}}, 2, 1);
  CHECK(r.variance[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.tail == doctest::Approx(1.0));
  CHECK(r.tail_grid[1][0] == 0.0);
}

TEST_CASE("general transform: cube on the exponential spectrum") {
  const Spectrum s = build_spectrum(ExponentialModel{{0.5}, {1.0}}, LatticeBox(1, 256)).normalized();
  const auto p = convolve_power(s, 3);
  const HermiteExpansion e = expand(parse_transform("cube"), 3);
  std::vector<LatticePoint> freqs;
  for (int k = 16; k <= 256; k *= 2) freqs.push_back(LatticePoint{k});
  const auto r = general_transform_report(p, e, freqs, 3, 1);
  for (std::size_t f = 0; f < freqs.size(); ++f) {
    const int k = freqs[f][0];
    const double c1 = s.values()[k + 256];
    const double c3 = p.order(3).values()[k + 768];
    const double var = 9.0 * c1 + 6.0 * c3;
    CHECK(rel(r.variance[f], var) < 1e-13);
    CHECK(rel(r.ratios[f][0], c1 / var) < 1e-13);
    CHECK(rel(r.ratios[f][2], 6.0 * c3 / var) < 1e-13);
    CHECK(rel(r.tail_grid[0][f], 6.0 * c3) < 1e-13);
  }
  // a_k(x^3) is dominated by the third chaos at high k
  CHECK(r.ratios.back()[2] > r.ratios.front()[2]);
  double sum = 0.0;
  for (int m = 1; m <= 3; ++m) sum += std::pow(e.c(m) / factorial(m), 2) * r.ratios.back()[m - 1];
  CHECK(rel(r.sigma_sq_f, sum) < 1e-14);
  CHECK(general_transform_report_json(r).find("\"sigmaSqF\"") != std::string::npos);
}

TEST_CASE("general transform errors") {
  const auto p = convolve_power(testing::two_point(), 2);
  CHECK_THROWS_AS(general_transform_report(p, HermiteExpansion{{0.0, 0.0}}, {LatticePoint{0}}, 2, 1),
                  InvalidArgument);
  CHECK_THROWS_AS(general_transform_report(p, HermiteExpansion{{1.0, 1.0, 1.0}}, {LatticePoint{0}}, 3, 1),
                  InvalidArgument);
  CHECK_THROWS_AS(general_transform_report(p, HermiteExpansion{{0.0, 1.0}}, {LatticePoint{1}}, 2, 1),
                  UnachievableFrequency);
}

}
