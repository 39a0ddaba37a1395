#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace hfclt::detail {

/// FFTW's planner is not re-entrant; plan creation and destruction lock this.
std::mutex& fftw_planner_mutex();

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

RealBuffer alloc_real(std::size_t n);
ComplexBuffer alloc_complex(std::size_t n);

class Plan {
 public:
  Plan() = default;
  explicit Plan(fftw_plan p) : plan_(p) {}
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  Plan(Plan&& o) noexcept : plan_(o.plan_) { o.plan_ = nullptr; }
  Plan& operator=(Plan&& o) noexcept;
  ~Plan();

  void execute() const { fftw_execute(plan_); }
  fftw_plan get() const { return plan_; }

 private:
  fftw_plan plan_ = nullptr;
};

Plan plan_r2c(std::span<const int> dims, double* in, fftw_complex* out);
Plan plan_c2r(std::span<const int> dims, fftw_complex* in, double* out);
Plan plan_c2c(std::span<const int> dims, fftw_complex* in, fftw_complex* out, int sign);

/// Linear (non-cyclic) convolution of two real n-D arrays by zero-padded FFT.
///
/// Arrays are row-major with the given per-axis sides; the result has sides
/// side_a + side_b - 1. Padded lengths are efficient FFT sizes. One instance
/// owns its buffers and plans and is reused across calls.
class LinearConvolver {
 public:
  LinearConvolver(std::vector<int> sides_a, std::vector<int> sides_b);

  void run(std::span<const double> a, std::span<const double> b, std::span<double> out);

  std::size_t padded_size() const { return padded_total_; }
  const std::vector<int>& result_sides() const { return sides_c_; }

 private:
  void load(std::span<const double> src, const std::vector<int>& sides, double* dst);

  std::vector<int> sides_a_, sides_b_, sides_c_, padded_;
  std::size_t padded_total_ = 0;
  std::size_t spectral_total_ = 0;
  RealBuffer real_a_, real_b_;
  ComplexBuffer spec_a_, spec_b_;
  Plan fwd_a_, fwd_b_, inv_;
};

std::size_t next_efficient_length(std::size_t n);

}  // namespace hfclt::detail
