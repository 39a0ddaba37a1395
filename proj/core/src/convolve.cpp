#include "hfclt/convolve.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "fft.hpp"
#include "hfclt/error.hpp"
#include "json_util.hpp"

namespace hfclt {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Safety factor on the eps * log2(L) * |a|_2 |b|_2 error model of one FFT pass.
constexpr double kFftErrorFactor = 4.0;
constexpr double kMaxTilt = 50.0;

bool exactly_symmetric(std::span<const double> v) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n / 2; ++i)
    if (v[i] != v[n - 1 - i]) return false;
  return true;
}

double box_points(int dim, int cutoff) {
  return std::pow(2.0 * cutoff + 1.0, dim);
}

/// Offset of every index of `src` inside `dst` when the uncentered coordinates add.
std::vector<std::size_t> offsets_in(const LatticeBox& src, const LatticeBox& dst) {
  const auto coords = src.coordinate_table();
  const auto strides = dst.strides();
  const int n = src.dim();
  std::vector<std::size_t> off(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    std::size_t o = 0;
    for (int d = 0; d < n; ++d)
      o += static_cast<std::size_t>(coords[i * n + d] + src.cutoff()) * strides[d];
    off[i] = o;
  }
  return off;
}

std::vector<int> sides_of(const LatticeBox& box) {
  return std::vector<int>(box.dim(), static_cast<int>(box.side()));
}

std::vector<double> direct_full(const ConvolvedSpectrum& a, const ConvolvedSpectrum& b,
                                const LatticeBox& out_box) {
  std::vector<double> out(out_box.size(), 0.0);
  const auto off_a = offsets_in(a.box(), out_box);
  const auto off_b = offsets_in(b.box(), out_box);
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    const double x = av[i];
    if (x == 0.0) continue;
    double* row = out.data() + off_a[i];
    for (std::size_t j = 0; j < bv.size(); ++j) row[off_b[j]] += x * bv[j];
  }
  return out;
}

std::vector<std::uint8_t> direct_support(const ConvolvedSpectrum& a, const ConvolvedSpectrum& b,
                                         const LatticeBox& out_box) {
  std::vector<std::uint8_t> out(out_box.size(), 0);
  const auto off_a = offsets_in(a.box(), out_box);
  const auto off_b = offsets_in(b.box(), out_box);
  const auto sa = a.support();
  const auto sb = b.support();
  std::vector<std::size_t> nz_b;
  for (std::size_t j = 0; j < sb.size(); ++j)
    if (sb[j]) nz_b.push_back(off_b[j]);
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (!sa[i]) continue;
    std::uint8_t* row = out.data() + off_a[i];
    for (std::size_t o : nz_b) row[o] = 1;
  }
  return out;
}

std::vector<std::uint8_t> fft_support(const ConvolvedSpectrum& a, const ConvolvedSpectrum& b,
                                      const LatticeBox& out_box, detail::LinearConvolver& conv) {
  std::vector<double> ia(a.support().begin(), a.support().end());
  std::vector<double> ib(b.support().begin(), b.support().end());
  std::vector<double> counts(out_box.size());
  conv.run(ia, ib, counts);
  std::vector<std::uint8_t> out(out_box.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = counts[i] > 0.5 ? 1 : 0;
  return out;
}

// Exponential tilting: log sum_i w_i exp(t . x_i) and its first two moments.
struct TiltFamily {
  int dim = 1;
  std::vector<double> coords;  // positive entries only, flattened
  std::vector<double> logw;

  TiltFamily(const ConvolvedSpectrum& c) : dim(c.dim()) {
    const auto table = c.box().coordinate_table();
    const auto v = c.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!(v[i] > 0.0)) continue;
      for (int d = 0; d < dim; ++d) coords.push_back(table[i * dim + d]);
      logw.push_back(std::log(v[i]));
    }
  }

  std::size_t count() const { return logw.size(); }

  // returns log-partition; fills mean (dim) and cov (dim x dim)
  double moments(const std::vector<double>& t, std::vector<double>& mean,
                 std::vector<double>& cov) const {
    const std::size_t n = count();
    std::vector<double> e(n);
    double emax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      double s = logw[i];
      for (int d = 0; d < dim; ++d) s += t[d] * coords[i * dim + d];
      e[i] = s;
      emax = std::max(emax, s);
    }
    double z = 0.0;
    mean.assign(dim, 0.0);
    cov.assign(dim * dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = std::exp(e[i] - emax);
      z += w;
      for (int d = 0; d < dim; ++d) mean[d] += w * coords[i * dim + d];
    }
    for (int d = 0; d < dim; ++d) mean[d] /= z;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = std::exp(e[i] - emax) / z;
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
          cov[r * dim + c] += w * (coords[i * dim + r] - mean[r]) * (coords[i * dim + c] - mean[c]);
    }
    return emax + std::log(z);
  }
};

// Solves H x = g for a small symmetric positive definite H (Gaussian elimination).
std::vector<double> solve_small(std::vector<double> h, std::vector<double> g, int n) {
  for (int i = 0; i < n; ++i) h[i * n + i] += 1e-12;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(h[r * n + col]) > std::abs(h[piv * n + col])) piv = r;
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(h[col * n + c], h[piv * n + c]);
      std::swap(g[col], g[piv]);
    }
    const double d = h[col * n + col];
    if (d == 0.0) continue;
    for (int r = col + 1; r < n; ++r) {
      const double f = h[r * n + col] / d;
      for (int c = col; c < n; ++c) h[r * n + c] -= f * h[col * n + c];
      g[r] -= f * g[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = g[r];
    for (int c = r + 1; c < n; ++c) s -= h[r * n + c] * x[c];
    x[r] = h[r * n + r] != 0.0 ? s / h[r * n + r] : 0.0;
  }
  return x;
}

// Saddle point: the tilt t at which the tilted means of a and b add up to target.
std::vector<double> saddle_tilt(const TiltFamily& fa, const TiltFamily& fb,
                                std::span<const int> target) {
  const int n = fa.dim;
  std::vector<double> t(n, 0.0), ma, ca, mb, cb;
  auto objective = [&](const std::vector<double>& tt) {
    std::vector<double> m1, c1, m2, c2;
    double v = fa.moments(tt, m1, c1) + fb.moments(tt, m2, c2);
    for (int d = 0; d < n; ++d) v -= tt[d] * target[d];
    return v;
  };
  double phi = objective(t);
  for (int iter = 0; iter < 80; ++iter) {
    fa.moments(t, ma, ca);
    fb.moments(t, mb, cb);
    std::vector<double> g(n), h(n * n);
    double gnorm = 0.0;
    for (int d = 0; d < n; ++d) {
      g[d] = ma[d] + mb[d] - target[d];
      gnorm = std::max(gnorm, std::abs(g[d]));
    }
    if (gnorm < 1e-3) break;
    for (int i = 0; i < n * n; ++i) h[i] = ca[i] + cb[i];
    auto step = solve_small(h, g, n);
    double scale = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls, scale *= 0.5) {
      std::vector<double> tn(n);
      for (int d = 0; d < n; ++d) tn[d] = std::clamp(t[d] - scale * step[d], -kMaxTilt, kMaxTilt);
      const double pn = objective(tn);
      if (pn <= phi) {
        moved = tn != t;
        t = tn;
        phi = pn;
        break;
      }
    }
    if (!moved) break;
  }
  return t;
}

class PointwiseFft {
 public:
  PointwiseFft(const ConvolvedSpectrum& a, const ConvolvedSpectrum& b, const LatticeBox& out_box,
               std::span<const std::uint8_t> support, detail::LinearConvolver& conv,
               const ConvolveOptions& options, ConvolveStats& stats)
      : a_(a), b_(b), box_(out_box), support_(support), conv_(conv), options_(options), stats_(stats),
        symmetric_(exactly_symmetric(a.values()) && exactly_symmetric(b.values())),
        coords_a_(a.box().coordinate_table()), coords_b_(b.box().coordinate_table()),
        coords_c_(out_box.coordinate_table()) {}

  std::vector<double> run(bool pointwise) {
    const std::size_t nc = box_.size();
    best_.assign(nc, 0.0);
    rel_.assign(nc, std::numeric_limits<double>::infinity());
    pass(std::vector<double>(box_.dim(), 0.0));
    if (!pointwise) {
      // single pass: accept everything, clamp round-off negatives
      for (std::size_t i = 0; i < nc; ++i) {
        if (!support_[i]) best_[i] = 0.0;
        best_[i] = std::max(best_[i], 0.0);
      }
      return std::move(best_);
    }
    refine();
    finish_direct();
    for (std::size_t i = 0; i < nc; ++i)
      if (!support_[i]) best_[i] = 0.0;
    return std::move(best_);
  }

 private:
  bool unresolved(std::size_t i) const { return support_[i] && !(rel_[i] <= options_.pointwise_tolerance); }

  void pass(const std::vector<double>& t) {
    ++stats_.fft_passes;
    const int n = box_.dim();
    auto tilt = [&](const ConvolvedSpectrum& c, const std::vector<int>& coords, std::vector<double>& out) {
      const auto v = c.values();
      out.assign(v.size(), 0.0);
      double smax = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) continue;
        double s = std::log(v[i]);
        for (int d = 0; d < n; ++d) s += t[d] * coords[i * n + d];
        out[i] = s;
        smax = std::max(smax, s);
      }
      double norm2 = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = v[i] > 0.0 ? std::exp(out[i] - smax) : 0.0;
        norm2 += out[i] * out[i];
      }
      return std::pair{smax, std::sqrt(norm2)};
    };
    std::vector<double> ta, tb, tc(box_.size());
    const auto [sa, na] = tilt(a_, coords_a_, ta);
    const auto [sb, nb] = tilt(b_, coords_b_, tb);
    conv_.run(ta, tb, tc);
    const double bound = kFftErrorFactor * kEps *
                         std::max(1.0, std::log2(static_cast<double>(conv_.padded_size()))) * na * nb;
    for (std::size_t i = 0; i < tc.size(); ++i) {
      if (!support_[i] || !(tc[i] > 0.0)) continue;
      const double rel = bound / tc[i];
      if (rel < rel_[i]) {
        double shift = sa + sb;
        for (int d = 0; d < n; ++d) shift -= t[d] * coords_c_[i * n + d];
        rel_[i] = rel;
        best_[i] = std::exp(std::log(tc[i]) + shift);
      }
    }
    if (symmetric_) mirror_merge();
  }

  void mirror_merge() {
    const std::size_t nc = box_.size();
    for (std::size_t i = nc / 2; i < nc; ++i) {
      const std::size_t j = nc - 1 - i;
      if (rel_[j] < rel_[i]) {
        rel_[i] = rel_[j];
        best_[i] = best_[j];
      } else {
        rel_[j] = rel_[i];
        best_[j] = best_[i];
      }
    }
  }

  void refine() {
    const TiltFamily fa(a_), fb(b_);
    if (fa.count() == 0 || fb.count() == 0) return;
    std::vector<std::uint8_t> tried(box_.size(), 0);
    const int n = box_.dim();
    while (stats_.fft_passes < options_.max_tilt_passes) {
      // target: the unresolved point closest to being resolved
      std::size_t target = box_.size();
      double best_rel = std::numeric_limits<double>::infinity();
      const std::size_t first = symmetric_ ? box_.size() / 2 : 0;
      for (std::size_t i = first; i < box_.size(); ++i) {
        if (!unresolved(i) || tried[i]) continue;
        if (target == box_.size() || rel_[i] < best_rel) {
          target = i;
          best_rel = rel_[i];
        }
      }
      if (target == box_.size()) return;
      tried[target] = 1;
      const std::span<const int> k(coords_c_.data() + target * n, static_cast<std::size_t>(n));
      pass(saddle_tilt(fa, fb, k));
    }
  }

  void finish_direct() {
    const std::size_t nc = box_.size();
    const std::size_t first = symmetric_ ? nc / 2 : 0;
    std::vector<std::size_t> todo;
    for (std::size_t i = first; i < nc; ++i)
      if (unresolved(i)) todo.push_back(i);
    const double per_point = static_cast<double>(std::min(a_.box().size(), b_.box().size()));
    if (static_cast<double>(todo.size()) * per_point > options_.max_direct_work) {
      stats_.unresolved_points = todo.size() * (symmetric_ ? 2 : 1);
      for (std::size_t i = 0; i < nc; ++i) best_[i] = std::max(best_[i], 0.0);
      return;
    }
    const int n = box_.dim();
    for (std::size_t i : todo) {
      const std::span<const int> k(coords_c_.data() + i * n, static_cast<std::size_t>(n));
      const double v = convolution_at(a_, b_, k);
      best_[i] = v;
      rel_[i] = 0.0;
      if (symmetric_) best_[nc - 1 - i] = v;
      ++stats_.direct_points;
    }
  }

  const ConvolvedSpectrum& a_;
  const ConvolvedSpectrum& b_;
  const LatticeBox& box_;
  std::span<const std::uint8_t> support_;
  detail::LinearConvolver& conv_;
  const ConvolveOptions& options_;
  ConvolveStats& stats_;
  bool symmetric_;
  std::vector<int> coords_a_, coords_b_, coords_c_;
  std::vector<double> best_, rel_;
};

}  // namespace

ConvolvedSpectrum::ConvolvedSpectrum(int order, int base_cutoff, LatticeBox box,
                                     std::vector<double> values, std::vector<std::uint8_t> support)
    : order_(order), base_cutoff_(base_cutoff), box_(box), values_(std::move(values)),
      support_(std::move(support)) {
  if (values_.size() != box_.size() || support_.size() != box_.size())
    throw InvalidArgument("convolved spectrum: value count does not match the box");
}

ConvolvedSpectrum ConvolvedSpectrum::from_spectrum(const Spectrum& s) {
  return ConvolvedSpectrum(1, s.cutoff(), s.box(),
                           std::vector<double>(s.values().begin(), s.values().end()),
                           std::vector<std::uint8_t>(s.positivity().begin(), s.positivity().end()));
}

double ConvolvedSpectrum::at(std::span<const int> k) const {
  return box_.contains(k) ? values_[box_.index(k)] : 0.0;
}

bool ConvolvedSpectrum::in_support(std::span<const int> k) const {
  return box_.contains(k) && support_[box_.index(k)] != 0;
}

double ConvolvedSpectrum::total_mass() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

ConvolutionPowers::ConvolutionPowers(std::vector<ConvolvedSpectrum> powers)
    : powers_(std::move(powers)) {
  if (powers_.empty()) throw InvalidArgument("convolution powers: need at least order 1");
  for (std::size_t i = 0; i < powers_.size(); ++i)
    if (powers_[i].order() != static_cast<int>(i) + 1)
      throw InvalidArgument("convolution powers: orders must run 1..m");
}

const ConvolvedSpectrum& ConvolutionPowers::order(int m) const {
  if (!has_order(m))
    throw InvalidArgument("convolution order " + std::to_string(m) + " not available (have 1.." +
                          std::to_string(max_order()) + ")");
  return powers_[m - 1];
}

double convolution_at(const ConvolvedSpectrum& a, const ConvolvedSpectrum& b, std::span<const int> k) {
  double s = 0.0;
  for_each_split(a, b, k, [&](std::size_t, double x, double y) { s += x * y; });
  return s;
}

ConvolvedSpectrum convolve_pair(const ConvolvedSpectrum& a, const ConvolvedSpectrum& b,
                                const ConvolveOptions& options, ConvolveStats* stats) {
  if (a.dim() != b.dim())
    throw InvalidArgument("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()));
  if (a.base_cutoff() != b.base_cutoff())
    throw InvalidArgument("base cutoff mismatch: inputs derive from different spectra");
  const int order = a.order() + b.order();
  if (order > options.max_order)
    throw BudgetExceeded("order " + std::to_string(order) + " exceeds the configured maximum " +
                         std::to_string(options.max_order));
  const int cutoff = a.box().cutoff() + b.box().cutoff();
  if (box_points(a.dim(), cutoff) > static_cast<double>(options.max_points))
    throw BudgetExceeded("order " + std::to_string(order) + " needs a box of " +
                         std::to_string(box_points(a.dim(), cutoff)) + " points, budget is " +
                         std::to_string(options.max_points));
  const LatticeBox out_box(a.dim(), cutoff);

  ConvolveStats local;
  ConvolveStats& st = stats ? *stats : local;
  st = ConvolveStats{};
  ConvolveMethod method = options.method;
  if (method == ConvolveMethod::kAuto)
    method = out_box.size() > options.auto_fft_threshold ? ConvolveMethod::kFft : ConvolveMethod::kDirect;
  st.method = method;

  std::vector<double> values;
  std::vector<std::uint8_t> support;
  if (method == ConvolveMethod::kDirect) {
    values = direct_full(a, b, out_box);
    support = direct_support(a, b, out_box);
    for (std::size_t i = 0; i < values.size(); ++i)
      if (!support[i]) values[i] = 0.0;
  } else {
    detail::LinearConvolver conv(sides_of(a.box()), sides_of(b.box()));
    support = fft_support(a, b, out_box, conv);
    PointwiseFft engine(a, b, out_box, support, conv, options, st);
    values = engine.run(options.accuracy == FftAccuracy::kPointwise);
  }
  if (exactly_symmetric(a.values()) && exactly_symmetric(b.values())) {
    // the true result is symmetric; make the stored one bit-symmetric too
    const std::size_t n = values.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
      const double v = method == ConvolveMethod::kDirect ? values[n - 1 - i]
                                                        : 0.5 * (values[i] + values[n - 1 - i]);
      values[i] = v;
      values[n - 1 - i] = v;
    }
  }
  return ConvolvedSpectrum(order, a.base_cutoff(), out_box, std::move(values), std::move(support));
}

ConvolutionPowers convolve_power(const Spectrum& s, int m, const ConvolveOptions& options) {
  if (m < 1) throw InvalidArgument("order m must be >= 1, got " + std::to_string(m));
  if (m > options.max_order)
    throw BudgetExceeded("order " + std::to_string(m) + " exceeds the configured maximum " +
                         std::to_string(options.max_order));
  if (box_points(s.dim(), m * s.cutoff()) > static_cast<double>(options.max_points))
    throw BudgetExceeded("order " + std::to_string(m) + " needs a box of " +
                         std::to_string(box_points(s.dim(), m * s.cutoff())) +
                         " points, budget is " + std::to_string(options.max_points));
  std::vector<ConvolvedSpectrum> powers;
  powers.reserve(m);
  powers.push_back(ConvolvedSpectrum::from_spectrum(s));
  for (int j = 2; j <= m; ++j) powers.push_back(convolve_pair(powers.back(), powers.front(), options));
  return ConvolutionPowers(std::move(powers));
}

double verify_recursion(const ConvolutionPowers& powers, std::span<const int> k, int m, int q) {
  if (m < 2 || q < 1 || q > m - 1)
    throw InvalidArgument("q must lie in 1..m-1, got q = " + std::to_string(q) + ", m = " +
                          std::to_string(m));
  const double lhs = powers.order(m).at(k);
  const double rhs = convolution_at(powers.order(q), powers.order(m - q), k);
  return std::abs(lhs - rhs) / std::max(lhs, std::numeric_limits<double>::min());
}

// --- dumps -----------------------------------------------------------------

using detail::json;

std::string convolved_to_json(const ConvolvedSpectrum& c) {
  json j;
  j["dim"] = c.dim();
  j["base_cutoff"] = c.base_cutoff();
  j["order"] = c.order();
  j["values"] = std::vector<double>(c.values().begin(), c.values().end());
  j["support"] = std::vector<int>(c.support().begin(), c.support().end());
  return j.dump();
}

ConvolvedSpectrum convolved_from_json(const std::string& text) {
  const json j = detail::parse_json(text);
  const int dim = detail::require_as<int>(j, "dim");
  const int base = detail::require_as<int>(j, "base_cutoff");
  const int order = detail::require_as<int>(j, "order");
  if (dim < 1 || base < 0 || order < 1) throw SchemaError("convolved dump: invalid header");
  auto values = detail::require_as<std::vector<double>>(j, "values");
  const LatticeBox box(dim, base * order);
  if (values.size() != box.size()) throw SchemaError("convolved dump: value count does not match header");
  std::vector<std::uint8_t> support(values.size());
  if (j.contains("support")) {
    const auto s = detail::require_as<std::vector<int>>(j, "support");
    if (s.size() != values.size()) throw SchemaError("convolved dump: support length mismatch");
    for (std::size_t i = 0; i < s.size(); ++i) support[i] = s[i] ? 1 : 0;
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) support[i] = values[i] > 0.0;
  }
  return ConvolvedSpectrum(order, base, box, std::move(values), std::move(support));
}

namespace {
constexpr char kMagic[4] = {'H', 'F', 'C', 'S'};
constexpr std::uint32_t kBinaryVersion = 1;
}  // namespace

void write_convolved_binary(const ConvolvedSpectrum& c, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  const std::int32_t header[3] = {c.dim(), c.base_cutoff(), c.order()};
  const std::uint64_t count = c.values().size();
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&kBinaryVersion), sizeof kBinaryVersion);
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  out.write(reinterpret_cast<const char*>(c.values().data()), static_cast<std::streamsize>(count * sizeof(double)));
  out.write(reinterpret_cast<const char*>(c.support().data()), static_cast<std::streamsize>(count));
  if (!out) throw Error("failed writing " + path.string());
}

ConvolvedSpectrum read_convolved_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  char magic[4];
  std::uint32_t version = 0;
  std::int32_t header[3];
  std::uint64_t count = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(header), sizeof header);
  in.read(reinterpret_cast<char*>(&count), sizeof count);
  if (!in || std::memcmp(magic, kMagic, 4) != 0 || version != kBinaryVersion)
    throw SchemaError(path.string() + ": not a convolved-spectrum dump");
  if (header[0] < 1 || header[1] < 0 || header[2] < 1) throw SchemaError("convolved dump: invalid header");
  const LatticeBox box(header[0], header[1] * header[2]);
  if (count != box.size()) throw SchemaError("convolved dump: value count does not match header");
  std::vector<double> values(count);
  std::vector<std::uint8_t> support(count);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(count * sizeof(double)));
  in.read(reinterpret_cast<char*>(support.data()), static_cast<std::streamsize>(count));
  if (!in) throw SchemaError(path.string() + ": truncated dump");
  return ConvolvedSpectrum(header[2], header[1], box, std::move(values), std::move(support));
}

}  // namespace hfclt
