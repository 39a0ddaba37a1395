#include "hfclt/fieldsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "fft.hpp"
#include "hfclt/convolve.hpp"
#include "hfclt/error.hpp"
#include "text_util.hpp"

namespace hfclt {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::size_t ipow(std::size_t base, int exp) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

bool lex_positive(std::span<const int> k) {
  for (int v : k)
    if (v != 0) return v > 0;
  return false;
}

/// Polynomial degree of a transform, or -1 when it is not a polynomial.
int transform_degree(const Transform& t) {
  if (const auto* h = std::get_if<HermiteTransform>(&t)) return h->order;
  if (const auto* p = std::get_if<PolynomialTransform>(&t)) {
    int d = static_cast<int>(p->monomial.size()) - 1;
    while (d > 0 && p->monomial[d] == 0.0) --d;
    return std::max(d, 0);
  }
  return -1;
}

// Per-thread FFT scratch: one c2c synthesis plan and one r2c analysis plan.
class Workspace {
 public:
  Workspace(int dim, std::size_t grid)
      : dim_(dim), grid_(grid), dims_(dim, static_cast<int>(grid)), total_(ipow(grid, dim)),
        half_(total_ / grid * (grid / 2 + 1)), field_(detail::alloc_complex(total_)),
        real_(detail::alloc_real(total_)), spec_(detail::alloc_complex(half_)) {
    synth_ = detail::plan_c2c(dims_, field_.get(), field_.get(), FFTW_BACKWARD);
    analyse_ = detail::plan_r2c(dims_, real_.get(), spec_.get());
  }

  std::size_t total() const { return total_; }
  double* real() { return real_.get(); }

  /// Fills real() with the field; returns the imaginary residue.
  double synthesize(const CoefficientDraw& draw) {
    std::fill_n(reinterpret_cast<double*>(field_.get()), 2 * total_, 0.0);
    const auto coords = draw.box.coordinate_table();
    for (std::size_t i = 0; i < draw.a.size(); ++i) {
      std::size_t idx = 0;
      for (int d = 0; d < dim_; ++d) idx = idx * grid_ + wrap(coords[i * dim_ + d]);
      field_[idx][0] += draw.a[i].real();
      field_[idx][1] += draw.a[i].imag();
    }
    synth_.execute();
    double re_max = 0.0, im_max = 0.0;
    for (std::size_t j = 0; j < total_; ++j) {
      real_[j] = field_[j][0];
      re_max = std::max(re_max, std::abs(field_[j][0]));
      im_max = std::max(im_max, std::abs(field_[j][1]));
    }
    return im_max / std::max(re_max, std::numeric_limits<double>::min());
  }

  /// Forward transform of real(); afterwards coefficient() reads a_k.
  void analyse() { analyse_.execute(); }

  Complex coefficient(std::span<const int> k) const {
    const int last = k.back();
    const bool direct = last > 0 || (last == 0 && (lex_positive(k) || is_zero(k)));
    std::size_t idx = 0;
    for (int d = 0; d < dim_; ++d) {
      const int v = direct ? k[d] : -k[d];
      idx = idx * (d + 1 == dim_ ? grid_ / 2 + 1 : grid_) + wrap(v);
    }
    const double scale = 1.0 / static_cast<double>(total_);
    const Complex c(spec_[idx][0] * scale, spec_[idx][1] * scale);
    return direct ? c : std::conj(c);
  }

 private:
  static bool is_zero(std::span<const int> k) {
    return std::all_of(k.begin(), k.end(), [](int v) { return v == 0; });
  }
  std::size_t wrap(int v) const {
    const long g = static_cast<long>(grid_);
    return static_cast<std::size_t>(((v % g) + g) % g);
  }

  int dim_;
  std::size_t grid_;
  std::vector<int> dims_;
  std::size_t total_, half_;
  detail::ComplexBuffer field_;
  detail::RealBuffer real_;
  detail::ComplexBuffer spec_;
  detail::Plan synth_, analyse_;
};

void check_grid(int cutoff, std::size_t grid) {
  if (grid < static_cast<std::size_t>(2 * cutoff + 1))
    throw InvalidArgument("grid G = " + std::to_string(grid) + " aliases the Gaussian layer; need G >= 2K+1 = " +
                          std::to_string(2 * cutoff + 1));
}

void check_freq(std::span<const int> k, int dim, std::size_t grid) {
  if (static_cast<int>(k.size()) != dim)
    throw InvalidArgument("frequency " + format_point(k) + " does not match dimension " + std::to_string(dim));
  for (int v : k)
    if (2 * static_cast<std::size_t>(std::abs(v)) >= grid)
      throw InvalidArgument("frequency " + format_point(k) + " is not resolved by grid G = " + std::to_string(grid));
}

}  // namespace

std::mt19937_64 replication_stream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed;
  const std::uint64_t a = splitmix64(state);
  state = a ^ (index * 0xD1B54A32D192ED03ULL);
  const std::uint64_t b = splitmix64(state);
  const std::uint64_t c = splitmix64(state);
  std::seed_seq seq{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
  return std::mt19937_64(seq);
}

CoefficientDraw draw_coefficients(const Spectrum& s, std::mt19937_64& rng) {
  CoefficientDraw d;
  d.box = s.box();
  d.a.assign(d.box.size(), Complex{});
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t n = d.box.size();
  const std::size_t center = n / 2;
  const auto v = s.values();
  d.a[center] = Complex(std::sqrt(v[center]) * normal(rng), 0.0);
  for (std::size_t i = center + 1; i < n; ++i) {
    const double r = std::sqrt(v[i] / 2.0);
    const double re = normal(rng);
    const double im = normal(rng);
    d.a[i] = Complex(r * re, r * im);
    d.a[n - 1 - i] = std::conj(d.a[i]);
  }
  return d;
}

std::size_t efficient_length(std::size_t n) { return detail::next_efficient_length(n); }

FieldSample synthesize(const CoefficientDraw& draw, std::size_t grid) {
  check_grid(draw.box.cutoff(), grid);
  Workspace ws(draw.box.dim(), grid);
  FieldSample out;
  out.dim = draw.box.dim();
  out.grid = grid;
  out.source_cutoff = draw.box.cutoff();
  out.imag_residue = ws.synthesize(draw);
  out.values.assign(ws.real(), ws.real() + ws.total());
  return out;
}

SubordinatedCoefficients subordinated_coefficients(const FieldSample& sample, const Transform& transform,
                                                   const std::vector<LatticePoint>& freqs) {
  for (const auto& k : freqs) check_freq(k, sample.dim, sample.grid);
  Workspace ws(sample.dim, sample.grid);
  for (std::size_t j = 0; j < sample.values.size(); ++j) ws.real()[j] = apply_transform(transform, sample.values[j]);
  ws.analyse();
  SubordinatedCoefficients out;
  out.freqs = freqs;
  for (const auto& k : freqs) out.values.push_back(ws.coefficient(k));
  const int degree = transform_degree(transform);
  out.exact = degree >= 0 && sample.grid >= static_cast<std::size_t>(2 * degree * sample.source_cutoff + 1);
  return out;
}

const MomentEstimate* MomentReport::find(std::span<const int> freq, const std::string& order,
                                         const std::string& stat) const {
  for (const auto& r : rows)
    if (std::equal(r.freq.begin(), r.freq.end(), freq.begin(), freq.end()) && r.order == order && r.stat == stat)
      return &r;
  return nullptr;
}

namespace {

const std::vector<std::string> kSingleStats = {"abs2",     "abs2_ratio", "re2_norm", "im2_norm",
                                               "re4_norm", "im4_norm",   "re_im_norm"};
const std::vector<std::string> kCrossStats = {"cross_re", "cross_im"};

// One tracked coefficient: a Hermite order or the general transform.
struct Channel {
  std::string label;
  int hermite = 0;  // 0 for the general transform
  std::vector<double> variance;  // analytic E|a_k|^2 per frequency
};

void single_samples(Complex a, double v, double* out) {
  const double re = a.real(), im = a.imag();
  const double abs2 = re * re + im * im;
  out[0] = abs2;
  out[1] = abs2 / v;
  out[2] = re * re / v;
  out[3] = im * im / v;
  out[4] = re * re * re * re / (v * v);
  out[5] = im * im * im * im / (v * v);
  out[6] = re * im / v;
}

}  // namespace

MomentReport mc_moments(const Spectrum& s, const McConfig& config) {
  if (config.freqs.empty()) throw InvalidArgument("at least one frequency is required");
  if (config.orders.empty() && !config.transform) throw InvalidArgument("no Hermite order or transform to track");
  if (config.reps < 100) throw InvalidArgument("reps must be >= 100, got " + std::to_string(config.reps));
  if (config.block_size < 1) throw InvalidArgument("block_size must be >= 1");
  for (int m : config.orders)
    if (m < 1) throw InvalidArgument("Hermite orders must be >= 1, got " + std::to_string(m));
  const int dim = s.dim();
  const int cutoff = s.cutoff();
  int m_max = 0;
  for (int m : config.orders) m_max = std::max(m_max, m);
  int f_degree = -1;
  HermiteExpansion expansion;
  if (config.transform) {
    f_degree = transform_degree(*config.transform);
    expansion = expand(*config.transform, f_degree > 0 ? std::max(f_degree, 1) : config.transform_max_order);
    if (expansion.highest_order() == 0) throw InvalidArgument("transform has no non-constant Hermite component");
  }
  const int m_grid = std::max({m_max, f_degree, 1});
  const std::size_t min_grid = static_cast<std::size_t>(2 * m_grid * cutoff + 1);
  std::size_t grid = config.grid;
  if (grid == 0) grid = efficient_length(std::max<std::size_t>(m_grid * (2 * cutoff + 1), min_grid));
  if (m_max > 0 && grid < static_cast<std::size_t>(2 * m_max * cutoff + 1))
    throw InvalidArgument("grid G = " + std::to_string(grid) + " is below the exactness bound 2 m K + 1 = " +
                          std::to_string(2 * m_max * cutoff + 1));
  check_grid(cutoff, grid);
  for (const auto& k : config.freqs) check_freq(k, dim, grid);
  const double work = static_cast<double>(config.reps) * std::pow(static_cast<double>(grid), dim);
  if (work > config.max_work)
    throw BudgetExceeded("reps * G^n = " + detail::fmt_double(work) + " exceeds the budget " +
                         detail::fmt_double(config.max_work));

  // analytic variances under the unit-mass spectrum
  const Spectrum unit = s.normalized();
  const int pow_order = std::max(m_max, expansion.highest_order());
  const ConvolutionPowers powers = convolve_power(unit, pow_order);
  std::vector<Channel> channels;
  for (int m : config.orders) {
    Channel c{std::to_string(m), m, {}};
    for (const auto& k : config.freqs) {
      const ConvolvedSpectrum& p = powers.order(m);
      if (!p.in_support(k))
        throw UnachievableFrequency("frequency " + format_point(k) + " is outside the support of order " +
                                    std::to_string(m));
      const double v = factorial(m) * p.at(k);
      if (!(v > 0.0)) throw NumericalUnderflow("variance at " + format_point(k) + " underflowed to zero");
      c.variance.push_back(v);
    }
    channels.push_back(std::move(c));
  }
  if (config.transform) {
    Channel c{"F", 0, {}};
    for (const auto& k : config.freqs) {
      const double v = variance_subordinated(expansion, powers, k);
      if (!(v > 0.0))
        throw UnachievableFrequency("transform has zero variance at frequency " + format_point(k));
      c.variance.push_back(v);
    }
    channels.push_back(std::move(c));
  }
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t a = 0; a < config.orders.size(); ++a)
    for (std::size_t b = a + 1; b < config.orders.size(); ++b)
      if (config.orders[a] != config.orders[b]) pairs.emplace_back(static_cast<int>(a), static_cast<int>(b));

  const std::size_t nf = config.freqs.size();
  const std::size_t n_single = kSingleStats.size();
  const std::size_t n_stats = nf * (channels.size() * n_single + pairs.size() * kCrossStats.size());
  const std::size_t n_blocks = (config.reps + config.block_size - 1) / config.block_size;
  std::vector<std::vector<double>> sum1(n_blocks), sum2(n_blocks);
  std::vector<double> residues(n_blocks, 0.0);
  std::vector<std::exception_ptr> errors(n_blocks);
  const bool need_f = static_cast<bool>(config.transform);
  const int h_max = m_max;

  auto run_block = [&](Workspace& ws, std::size_t block) {
    std::vector<double>& s1 = sum1[block];
    std::vector<double>& s2 = sum2[block];
    s1.assign(n_stats, 0.0);
    s2.assign(n_stats, 0.0);
    std::vector<double> field(ws.total());
    std::vector<std::vector<double>> herm(h_max + 1);
    std::vector<std::vector<Complex>> coeff(channels.size(), std::vector<Complex>(nf));
    std::vector<double> sample(n_stats);
    const std::size_t begin = block * config.block_size;
    const std::size_t end = std::min(config.reps, begin + config.block_size);
    for (std::size_t rep = begin; rep < end; ++rep) {
      auto rng = replication_stream(config.seed, rep);
      const CoefficientDraw draw = draw_coefficients(unit, rng);
      residues[block] = std::max(residues[block], ws.synthesize(draw));
      std::copy_n(ws.real(), ws.total(), field.begin());
      if (h_max >= 1) {
        for (auto& h : herm) h.resize(ws.total());
        for (std::size_t j = 0; j < ws.total(); ++j) {
          const double x = field[j];
          double prev = 1.0, cur = x;
          herm[1][j] = x;
          for (int m = 1; m < h_max; ++m) {
            const double next = x * cur - m * prev;
            prev = cur;
            cur = next;
            herm[m + 1][j] = cur;
          }
        }
      }
      for (std::size_t c = 0; c < channels.size(); ++c) {
        if (channels[c].hermite > 0) {
          std::copy(herm[channels[c].hermite].begin(), herm[channels[c].hermite].end(), ws.real());
        } else if (need_f) {
          for (std::size_t j = 0; j < ws.total(); ++j) ws.real()[j] = apply_transform(*config.transform, field[j]);
        }
        ws.analyse();
        for (std::size_t f = 0; f < nf; ++f) coeff[c][f] = ws.coefficient(config.freqs[f]);
      }
      std::size_t at = 0;
      for (std::size_t f = 0; f < nf; ++f) {
        for (std::size_t c = 0; c < channels.size(); ++c, at += n_single)
          single_samples(coeff[c][f], channels[c].variance[f], sample.data() + at);
        for (const auto& [a, b] : pairs) {
          const double norm = std::sqrt(channels[a].variance[f] * channels[b].variance[f]);
          sample[at++] = coeff[a][f].real() * coeff[b][f].real() / norm;
          sample[at++] = coeff[a][f].imag() * coeff[b][f].imag() / norm;
        }
      }
      for (std::size_t i = 0; i < n_stats; ++i) {
        s1[i] += sample[i];
        s2[i] += sample[i] * sample[i];
      }
    }
  };

  unsigned workers = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_blocks));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    std::unique_ptr<Workspace> ws;
    try {
      ws = std::make_unique<Workspace>(dim, grid);
    } catch (...) {
      const std::size_t b = next.fetch_add(1);
      if (b < n_blocks) errors[b] = std::current_exception();
      return;
    }
    for (std::size_t b; (b = next.fetch_add(1)) < n_blocks;) {
      try {
        run_block(*ws, b);
      } catch (...) {
        errors[b] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  // fixed block order keeps the sums independent of scheduling
  std::vector<double> t1(n_stats, 0.0), t2(n_stats, 0.0);
  MomentReport report;
  for (std::size_t b = 0; b < n_blocks; ++b) {
    for (std::size_t i = 0; i < n_stats; ++i) {
      t1[i] += sum1[b][i];
      t2[i] += sum2[b][i];
    }
    report.max_imag_residue = std::max(report.max_imag_residue, residues[b]);
  }
  const double n = static_cast<double>(config.reps);
  report.grid = grid;
  report.reps = config.reps;
  report.exact = !config.transform || (f_degree >= 0 && grid >= static_cast<std::size_t>(2 * f_degree * cutoff + 1));
  std::size_t at = 0;
  auto emit = [&](const LatticePoint& k, const std::string& order, const std::string& stat) {
    const double mean = t1[at] / n;
    const double var = std::max(0.0, (t2[at] - t1[at] * t1[at] / n) / (n - 1.0));
    report.rows.push_back(MomentEstimate{k, order, stat, mean, std::sqrt(var / n), config.reps});
    ++at;
  };
  for (std::size_t f = 0; f < nf; ++f) {
    for (const auto& c : channels)
      for (const auto& stat : kSingleStats) emit(config.freqs[f], c.label, stat);
    for (const auto& [a, b] : pairs)
      for (const auto& stat : kCrossStats)
        emit(config.freqs[f], channels[a].label + "x" + channels[b].label, stat);
  }
  return report;
}

std::string moment_report_csv(const MomentReport& report) {
  std::ostringstream os;
  os << "freq,order,stat,estimate,stderr,reps\n";
  for (const auto& r : report.rows)
    os << format_point(r.freq) << "," << r.order << "," << r.stat << "," << detail::fmt_double(r.estimate) << ","
       << detail::fmt_double(r.stderr_) << "," << r.reps << "\n";
  return os.str();
}

}  // namespace hfclt
