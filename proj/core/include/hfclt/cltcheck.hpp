#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hfclt/convolve.hpp"
#include "hfclt/hermite.hpp"
#include "hfclt/lattice.hpp"

namespace hfclt {

/// C_{k,m}^-2 * sum_lambda C_{lambda,q}^2 C_{k-lambda,m-q}^2.
double cond2_sum(const ConvolutionPowers& powers, std::span<const int> k, int m, int q);

/// sup_lambda C_{lambda,q} C_{k-lambda,m-q} / sum_mu C_{mu,q} C_{k-mu,m-q}, in (0, 1].
double cond3_ratio(const ConvolutionPowers& powers, std::span<const int> k, int m, int q);

/// P[Z_q = lambda | Z_m = k] for the walk with steps distributed as C / sum(C).
struct BridgeDistribution {
  int order = 0;
  int step = 0;
  LatticePoint endpoint;
  /// Only lambdas with positive probability, in increasing flat index.
  std::vector<std::pair<LatticePoint, double>> probabilities;

  double max_probability() const;
  double total() const;
};

BridgeDistribution bridge_distribution(const ConvolutionPowers& powers, std::span<const int> k,
                                       int m, int q);

struct CltRow {
  int q = 0;
  double cond2_sum = 0.0;
  double cond3_ratio = 0.0;
};

struct CltDiagnostic {
  LatticePoint freq;
  int order = 0;
  /// False when k lies outside the m-fold support; rows are then empty.
  bool achievable = true;
  std::vector<CltRow> rows;
  /// m! * C_{k,m}
  double variance = 0.0;

  double max_cond2() const;
  double max_cond3() const;
};

/// One diagnostic per frequency, in input order. `workers` = 0 picks the
/// hardware concurrency.
std::vector<CltDiagnostic> clt_report(const ConvolutionPowers& powers,
                                      const std::vector<LatticePoint>& freqs, int m,
                                      unsigned workers = 0);

/// CSV with header freq,m,q,cond2_sum,cond3_ratio,variance.
std::string clt_report_csv(const std::vector<CltDiagnostic>& report);

struct GeneralTransformReport {
  std::vector<LatticePoint> freqs;
  int max_order = 0;
  int split_order = 0;
  /// E|a_k(F)|^2 per frequency, truncated at max_order.
  std::vector<double> variance;
  /// ratios[f][m-1] = m! C_{k_f,m} / variance[f]
  std::vector<std::vector<double>> ratios;
  /// sum_m (c_m/m!)^2 ratio_m at the last frequency.
  double sigma_sq_f = 0.0;
  /// sum_{m > split_order} c_m^2/m! C_{k,m} at the last frequency.
  double tail = 0.0;
  /// tail_grid[p-1][f]: the same tail for every split p = 1..max_order.
  std::vector<std::vector<double>> tail_grid;
};

GeneralTransformReport general_transform_report(const ConvolutionPowers& powers,
                                                const HermiteExpansion& expansion,
                                                const std::vector<LatticePoint>& freqs,
                                                int max_order, int split_order);

std::string general_transform_report_json(const GeneralTransformReport& report);

}  // namespace hfclt
