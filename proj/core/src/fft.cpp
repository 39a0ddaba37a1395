#include "fft.hpp"

#include <algorithm>
#include <cstring>

#include "hfclt/error.hpp"

namespace hfclt::detail {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

RealBuffer alloc_real(std::size_t n) {
  auto* p = static_cast<double*>(fftw_malloc(sizeof(double) * std::max<std::size_t>(n, 1)));
  if (!p) throw BudgetExceeded("fftw_malloc failed for " + std::to_string(n) + " doubles");
  return RealBuffer(p);
}

ComplexBuffer alloc_complex(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * std::max<std::size_t>(n, 1)));
  if (!p) throw BudgetExceeded("fftw_malloc failed for " + std::to_string(n) + " complex values");
  return ComplexBuffer(p);
}

Plan& Plan::operator=(Plan&& o) noexcept {
  if (this != &o) {
    if (plan_) {
      std::lock_guard lock(fftw_planner_mutex());
      fftw_destroy_plan(plan_);
    }
    plan_ = o.plan_;
    o.plan_ = nullptr;
  }
  return *this;
}

Plan::~Plan() {
  if (plan_) {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
  }
}

namespace {

Plan checked(fftw_plan p) {
  if (!p) throw Error("FFTW failed to create a plan");
  return Plan(p);
}

}  // namespace

Plan plan_r2c(std::span<const int> dims, double* in, fftw_complex* out) {
  std::lock_guard lock(fftw_planner_mutex());
  return checked(fftw_plan_dft_r2c(static_cast<int>(dims.size()), dims.data(), in, out, FFTW_ESTIMATE));
}

Plan plan_c2r(std::span<const int> dims, fftw_complex* in, double* out) {
  std::lock_guard lock(fftw_planner_mutex());
  return checked(fftw_plan_dft_c2r(static_cast<int>(dims.size()), dims.data(), in, out,
                                   FFTW_ESTIMATE | FFTW_DESTROY_INPUT));
}

Plan plan_c2c(std::span<const int> dims, fftw_complex* in, fftw_complex* out, int sign) {
  std::lock_guard lock(fftw_planner_mutex());
  return checked(fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), in, out, sign, FFTW_ESTIMATE));
}

std::size_t next_efficient_length(std::size_t n) {
  if (n <= 1) return 1;
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

LinearConvolver::LinearConvolver(std::vector<int> sides_a, std::vector<int> sides_b)
    : sides_a_(std::move(sides_a)), sides_b_(std::move(sides_b)) {
  const std::size_t n = sides_a_.size();
  sides_c_.resize(n);
  padded_.resize(n);
  padded_total_ = 1;
  for (std::size_t i = 0; i < n; ++i) {
    sides_c_[i] = sides_a_[i] + sides_b_[i] - 1;
    padded_[i] = static_cast<int>(next_efficient_length(static_cast<std::size_t>(sides_c_[i])));
    padded_total_ *= static_cast<std::size_t>(padded_[i]);
  }
  spectral_total_ = padded_total_ / static_cast<std::size_t>(padded_.back()) *
                    (static_cast<std::size_t>(padded_.back()) / 2 + 1);
  real_a_ = alloc_real(padded_total_);
  real_b_ = alloc_real(padded_total_);
  spec_a_ = alloc_complex(spectral_total_);
  spec_b_ = alloc_complex(spectral_total_);
  fwd_a_ = plan_r2c(padded_, real_a_.get(), spec_a_.get());
  fwd_b_ = plan_r2c(padded_, real_b_.get(), spec_b_.get());
  inv_ = plan_c2r(padded_, spec_a_.get(), real_a_.get());
}

void LinearConvolver::load(std::span<const double> src, const std::vector<int>& sides, double* dst) {
  std::memset(dst, 0, sizeof(double) * padded_total_);
  const std::size_t n = sides.size();
  const std::size_t row = static_cast<std::size_t>(sides.back());
  const std::size_t rows = src.size() / row;
  std::vector<int> idx(n, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t off = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) off = off * static_cast<std::size_t>(padded_[i]) + idx[i];
    off *= static_cast<std::size_t>(padded_.back());
    std::copy_n(src.data() + r * row, row, dst + off);
    for (int i = static_cast<int>(n) - 2; i >= 0; --i) {
      if (++idx[i] < sides[i]) break;
      idx[i] = 0;
    }
  }
}

void LinearConvolver::run(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  load(a, sides_a_, real_a_.get());
  load(b, sides_b_, real_b_.get());
  fwd_a_.execute();
  fwd_b_.execute();
  const double scale = 1.0 / static_cast<double>(padded_total_);
  for (std::size_t i = 0; i < spectral_total_; ++i) {
    const double ar = spec_a_[i][0], ai = spec_a_[i][1];
    const double br = spec_b_[i][0], bi = spec_b_[i][1];
    spec_a_[i][0] = (ar * br - ai * bi) * scale;
    spec_a_[i][1] = (ar * bi + ai * br) * scale;
  }
  inv_.execute();
  // gather the linear-convolution window out of the padded array
  const std::size_t n = sides_c_.size();
  const std::size_t row = static_cast<std::size_t>(sides_c_.back());
  const std::size_t rows = out.size() / row;
  std::vector<int> idx(n, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t off = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) off = off * static_cast<std::size_t>(padded_[i]) + idx[i];
    off *= static_cast<std::size_t>(padded_.back());
    std::copy_n(real_a_.get() + off, row, out.data() + r * row);
    for (int i = static_cast<int>(n) - 2; i >= 0; --i) {
      if (++idx[i] < sides_c_[i]) break;
      idx[i] = 0;
    }
  }
}

}  // namespace hfclt::detail
