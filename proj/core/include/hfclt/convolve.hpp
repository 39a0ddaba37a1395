#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hfclt/lattice.hpp"
#include "hfclt/spectrum.hpp"

namespace hfclt {

enum class ConvolveMethod { kAuto, kDirect, kFft };

/// How hard the FFT path works for accuracy.
///
/// kNormwise is a single zero-padded transform: errors are of order
/// eps * max|result| at every point, so tiny tail values carry large relative
/// error. kPointwise adds exponentially tilted passes (saddle-point shifts of
/// the mass toward unresolved points) and finishes any remaining points by
/// direct summation, so every value meets `pointwise_tolerance` relative to
/// itself.
enum class FftAccuracy { kPointwise, kNormwise };

struct ConvolveOptions {
  ConvolveMethod method = ConvolveMethod::kAuto;
  FftAccuracy accuracy = FftAccuracy::kPointwise;
  /// kAuto switches to FFT when the output box has more points than this.
  std::size_t auto_fft_threshold = 10000;
  int max_order = 32;
  /// Upper bound on the number of stored values of any convolution power.
  std::size_t max_points = std::size_t{1} << 27;
  int max_tilt_passes = 24;
  double pointwise_tolerance = 1e-13;
  /// Multiply-adds allowed for the direct finishing step of kPointwise.
  double max_direct_work = 4e9;
};

struct ConvolveStats {
  ConvolveMethod method = ConvolveMethod::kDirect;
  int fft_passes = 0;
  std::size_t direct_points = 0;
  /// Points left at plain FFT accuracy because the direct budget ran out.
  std::size_t unresolved_points = 0;
};

/// The m-fold convolution power of a base spectrum with cutoff K, stored on
/// the box of cutoff m*K.
class ConvolvedSpectrum {
 public:
  ConvolvedSpectrum() = default;
  ConvolvedSpectrum(int order, int base_cutoff, LatticeBox box,
                    std::vector<double> values, std::vector<std::uint8_t> support);

  /// Order-1 power: the spectrum itself.
  static ConvolvedSpectrum from_spectrum(const Spectrum& s);

  int order() const { return order_; }
  int base_cutoff() const { return base_cutoff_; }
  int dim() const { return box_.dim(); }
  const LatticeBox& box() const { return box_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t index) const { return values_[index]; }

  /// Value at k, zero outside the box.
  double at(std::span<const int> k) const;

  /// Structural support: nonzero for k reachable as a sum of `order` points
  /// where the base model is positive, whether or not the value underflowed.
  std::span<const std::uint8_t> support() const { return support_; }
  bool in_support(std::span<const int> k) const;

  double total_mass() const;

 private:
  int order_ = 0;
  int base_cutoff_ = 0;
  LatticeBox box_;
  std::vector<double> values_;
  std::vector<std::uint8_t> support_;
};

/// Convolution powers of orders 1..max_order(); order(m) is the m-fold power.
class ConvolutionPowers {
 public:
  ConvolutionPowers() = default;
  explicit ConvolutionPowers(std::vector<ConvolvedSpectrum> powers);

  int max_order() const { return static_cast<int>(powers_.size()); }
  int dim() const { return powers_.front().dim(); }
  int base_cutoff() const { return powers_.front().base_cutoff(); }
  const ConvolvedSpectrum& order(int m) const;
  bool has_order(int m) const { return m >= 1 && m <= max_order(); }

 private:
  std::vector<ConvolvedSpectrum> powers_;
};

/// result[k] = sum_j a[j] * b[k - j]; the orders add.
ConvolvedSpectrum convolve_pair(const ConvolvedSpectrum& a, const ConvolvedSpectrum& b,
                                const ConvolveOptions& options = {},
                                ConvolveStats* stats = nullptr);

/// Orders 1..m by iterated convolution with the base spectrum.
ConvolutionPowers convolve_power(const Spectrum& s, int m, const ConvolveOptions& options = {});

/// Relative residual of the splitting identity
/// C_{k,m} = sum_mu C_{mu,q} C_{k-mu,m-q} at lattice point k.
double verify_recursion(const ConvolutionPowers& powers, std::span<const int> k, int m, int q);

/// Calls fn(lambda_index_in_a, a[lambda], b[k - lambda]) for every lambda in
/// a's box with k - lambda inside b's box, in increasing flat index of lambda.
template <class Fn>
void for_each_split(const ConvolvedSpectrum& a, const ConvolvedSpectrum& b,
                    std::span<const int> k, Fn&& fn);

/// Plain direct sum at a single point, the oracle for one entry.
double convolution_at(const ConvolvedSpectrum& a, const ConvolvedSpectrum& b,
                      std::span<const int> k);

// Cache dumps: header (dim, base cutoff, order) then the flat values.
std::string convolved_to_json(const ConvolvedSpectrum& c);
ConvolvedSpectrum convolved_from_json(const std::string& text);
void write_convolved_binary(const ConvolvedSpectrum& c, const std::filesystem::path& path);
ConvolvedSpectrum read_convolved_binary(const std::filesystem::path& path);

// ---------------------------------------------------------------------------

template <class Fn>
void for_each_split(const ConvolvedSpectrum& a, const ConvolvedSpectrum& b,
                    std::span<const int> k, Fn&& fn) {
  const int n = a.dim();
  const int ka = a.box().cutoff();
  const int kb = b.box().cutoff();
  std::vector<int> lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    lo[i] = std::max(-ka, k[i] - kb);
    hi[i] = std::min(ka, k[i] + kb);
    if (lo[i] > hi[i]) return;
  }
  const auto sa = a.box().strides();
  const auto sb = b.box().strides();
  const auto av = a.values();
  const auto bv = b.values();
  // odometer over the intersection, innermost axis contiguous
  std::vector<int> lam(lo);
  const int last = n - 1;
  for (;;) {
    std::size_t ia = 0, ib = 0;
    for (int i = 0; i < last; ++i) {
      ia += static_cast<std::size_t>(lam[i] + ka) * sa[i];
      ib += static_cast<std::size_t>(k[i] - lam[i] + kb) * sb[i];
    }
    std::size_t ja = ia + static_cast<std::size_t>(lo[last] + ka);
    std::size_t jb = ib + static_cast<std::size_t>(k[last] - lo[last] + kb);
    for (int l = lo[last]; l <= hi[last]; ++l, ++ja, --jb) fn(ja, av[ja], bv[jb]);
    int axis = last - 1;
    while (axis >= 0) {
      if (++lam[axis] <= hi[axis]) break;
      lam[axis] = lo[axis];
      --axis;
    }
    if (axis < 0) return;
  }
}

}  // namespace hfclt
