#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hfclt/hermite.hpp"
#include "hfclt/lattice.hpp"
#include "hfclt/spectrum.hpp"

namespace hfclt {

using Complex = std::complex<double>;

/// Generator for replication `index` of a run seeded with `seed`. Streams are
/// a pure function of (seed, index), so serial and parallel runs draw the
/// same numbers.
std::mt19937_64 replication_stream(std::uint64_t seed, std::uint64_t index);

/// Gaussian Fourier coefficients a_k over the spectrum box.
struct CoefficientDraw {
  LatticeBox box;
  std::vector<Complex> a;

  Complex at(std::span<const int> k) const { return a[box.index(k)]; }
};

/// Positive-half coefficients (lexicographic) get independent real and
/// imaginary parts of variance C_k/2; the negative half is their conjugate;
/// a_0 is real with variance C_0.
CoefficientDraw draw_coefficients(const Spectrum& s, std::mt19937_64& rng);

/// Real field values at the G^n equispaced torus points theta_j = 2 pi j / G.
struct FieldSample {
  int dim = 1;
  std::size_t grid = 0;
  /// Cutoff of the Gaussian layer that produced the sample.
  int source_cutoff = 0;
  std::vector<double> values;
  /// max |Im| / max(|Re|, tiny) left by the synthesis transform.
  double imag_residue = 0.0;
};

/// Smallest transform length >= n whose only prime factors are 2, 3, 5, 7.
std::size_t efficient_length(std::size_t n);

/// T(theta_j) = sum_k a_k exp(i k . theta_j). Requires G >= 2K+1.
FieldSample synthesize(const CoefficientDraw& draw, std::size_t grid);

struct SubordinatedCoefficients {
  std::vector<LatticePoint> freqs;
  std::vector<Complex> values;
  /// The grid recovers the integral exactly (polynomial F with G >= 2 deg K + 1).
  bool exact = true;
};

/// a_k(F) = G^-n sum_j F(T(theta_j)) exp(-i k . theta_j). Coefficients at k
/// and -k are exact conjugates.
SubordinatedCoefficients subordinated_coefficients(const FieldSample& sample,
                                                   const Transform& transform,
                                                   const std::vector<LatticePoint>& freqs);

struct McConfig {
  std::vector<LatticePoint> freqs;
  /// Hermite orders m whose coefficients a_k(H_m) are tracked.
  std::vector<int> orders{1, 2};
  /// Optional general transform tracked alongside the Hermite orders.
  std::optional<Transform> transform;
  std::size_t reps = 1000;
  std::uint64_t seed = 0;
  /// 0 selects the smallest efficient length >= m_max (2K + 1).
  std::size_t grid = 0;
  unsigned workers = 0;
  std::size_t block_size = 256;
  /// Guard on reps * G^n.
  double max_work = 2e11;
  /// Truncation order used to normalise the general transform.
  int transform_max_order = 12;
};

struct MomentEstimate {
  LatticePoint freq;
  /// "m" for H_m, "m1x m2" for cross-order pairs, "F" for the general transform.
  std::string order;
  std::string stat;
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::size_t reps = 0;
};

struct MomentReport {
  std::size_t grid = 0;
  std::size_t reps = 0;
  /// Worst imaginary residue seen during synthesis.
  double max_imag_residue = 0.0;
  bool exact = true;
  std::vector<MomentEstimate> rows;

  const MomentEstimate* find(std::span<const int> freq, const std::string& order,
                             const std::string& stat) const;
};

/// Replication-averaged moments of the subordinated coefficients.
///
/// The field is synthesised from the unit-mass rescaling of `s`, the setting
/// in which H_m(T) sits in the m-th chaos. Normalised statistics divide by the
/// analytic variance m! C_{k,m} of that rescaled spectrum. Stats per (freq, m):
/// abs2, abs2_ratio, re2_norm, im2_norm, re4_norm, im4_norm, re_im_norm; per
/// pair of orders: cross_re, cross_im (normalised covariance). Results are
/// bit-identical for a fixed (seed, reps, freqs) regardless of `workers`.
MomentReport mc_moments(const Spectrum& s, const McConfig& config);

/// CSV with header freq,order,stat,estimate,stderr,reps.
std::string moment_report_csv(const MomentReport& report);

}  // namespace hfclt
