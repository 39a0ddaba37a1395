#include "hfclt/cltcheck.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "hfclt/error.hpp"
#include "json_util.hpp"
#include "text_util.hpp"

namespace hfclt {

namespace {

void check_split(const ConvolutionPowers& powers, int m, int q) {
  if (m < 2) throw InvalidArgument("order m must be >= 2 for a split, got " + std::to_string(m));
  if (q < 1 || q > m - 1)
    throw InvalidArgument("q must lie in 1..m-1, got q = " + std::to_string(q) + ", m = " +
                          std::to_string(m));
  if (!powers.has_order(m))
    throw InvalidArgument("convolution order " + std::to_string(m) + " not available (have 1.." +
                          std::to_string(powers.max_order()) + ")");
}

/// C_{k,m}, distinguishing an empty support from an underflowed value.
double conditioning_mass(const ConvolutionPowers& powers, std::span<const int> k, int m) {
  const ConvolvedSpectrum& c = powers.order(m);
  if (static_cast<int>(k.size()) != c.dim())
    throw InvalidArgument("frequency has " + std::to_string(k.size()) + " coordinates, spectrum has " +
                          std::to_string(c.dim()));
  if (!c.in_support(k))
    throw UnachievableFrequency("frequency " + format_point(k) + " is outside the support of the " +
                                std::to_string(m) + "-fold convolution (|k_i| <= " +
                                std::to_string(c.box().cutoff()) + " and base positivity)");
  const double v = c.at(k);
  if (!(v > 0.0))
    throw NumericalUnderflow("C_{k,m} at " + format_point(k) + ", m = " + std::to_string(m) +
                             " underflowed to zero");
  return v;
}

}  // namespace

double cond2_sum(const ConvolutionPowers& powers, std::span<const int> k, int m, int q) {
  check_split(powers, m, q);
  const double c = conditioning_mass(powers, k, m);
  double s = 0.0;
  for_each_split(powers.order(q), powers.order(m - q), k, [&](std::size_t, double a, double b) {
    const double t = a * b / c;
    s += t * t;
  });
  return s;
}

double cond3_ratio(const ConvolutionPowers& powers, std::span<const int> k, int m, int q) {
  check_split(powers, m, q);
  conditioning_mass(powers, k, m);
  double sup = 0.0, sum = 0.0;
  for_each_split(powers.order(q), powers.order(m - q), k, [&](std::size_t, double a, double b) {
    const double t = a * b;
    sup = std::max(sup, t);
    sum += t;
  });
  if (!(sum > 0.0))
    throw NumericalUnderflow("split sum at " + format_point(k) + " underflowed to zero");
  return sup / sum;
}

double BridgeDistribution::max_probability() const {
  double best = 0.0;
  for (const auto& [lam, p] : probabilities) best = std::max(best, p);
  return best;
}

double BridgeDistribution::total() const {
  double s = 0.0;
  for (const auto& [lam, p] : probabilities) s += p;
  return s;
}

BridgeDistribution bridge_distribution(const ConvolutionPowers& powers, std::span<const int> k,
                                       int m, int q) {
  check_split(powers, m, q);
  const double c = conditioning_mass(powers, k, m);
  BridgeDistribution out;
  out.order = m;
  out.step = q;
  out.endpoint.assign(k.begin(), k.end());
  const ConvolvedSpectrum& a = powers.order(q);
  for_each_split(a, powers.order(m - q), k, [&](std::size_t ia, double x, double y) {
    const double p = x * y / c;
    if (p > 0.0) out.probabilities.emplace_back(a.box().point(ia), p);
  });
  return out;
}

double CltDiagnostic::max_cond2() const {
  double v = 0.0;
  for (const auto& r : rows) v = std::max(v, r.cond2_sum);
  return v;
}

double CltDiagnostic::max_cond3() const {
  double v = 0.0;
  for (const auto& r : rows) v = std::max(v, r.cond3_ratio);
  return v;
}

namespace {

CltDiagnostic diagnose(const ConvolutionPowers& powers, const LatticePoint& k, int m) {
  CltDiagnostic d;
  d.freq = k;
  d.order = m;
  if (!powers.order(m).in_support(k)) {
    d.achievable = false;
    return d;
  }
  d.variance = factorial(m) * conditioning_mass(powers, k, m);
  for (int q = 1; q < m; ++q)
    d.rows.push_back(CltRow{q, cond2_sum(powers, k, m, q), cond3_ratio(powers, k, m, q)});
  return d;
}

}  // namespace

std::vector<CltDiagnostic> clt_report(const ConvolutionPowers& powers,
                                      const std::vector<LatticePoint>& freqs, int m,
                                      unsigned workers) {
  if (m < 1) throw InvalidArgument("order m must be >= 1, got " + std::to_string(m));
  powers.order(m);
  for (const auto& k : freqs)
    if (static_cast<int>(k.size()) != powers.dim())
      throw InvalidArgument("frequency " + format_point(k) + " does not match dimension " +
                            std::to_string(powers.dim()));
  std::vector<CltDiagnostic> out(freqs.size());
  std::vector<std::exception_ptr> errors(freqs.size());
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, std::max<std::size_t>(1, freqs.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < freqs.size();) {
      try {
        out[i] = diagnose(powers, freqs[i], m);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::string clt_report_csv(const std::vector<CltDiagnostic>& report) {
  using detail::fmt_double;
  std::ostringstream os;
  os << "freq,m,q,cond2_sum,cond3_ratio,variance\n";
  for (const auto& d : report) {
    const std::string head = format_point(d.freq) + "," + std::to_string(d.order) + ",";
    if (!d.achievable) {
      os << head << ",unachievable,unachievable,0\n";
      continue;
    }
    if (d.rows.empty()) os << head << ",,," << fmt_double(d.variance) << "\n";
    for (const auto& r : d.rows)
      os << head << r.q << "," << fmt_double(r.cond2_sum) << "," << fmt_double(r.cond3_ratio) << ","
         << fmt_double(d.variance) << "\n";
  }
  return os.str();
}

GeneralTransformReport general_transform_report(const ConvolutionPowers& powers,
                                                const HermiteExpansion& expansion,
                                                const std::vector<LatticePoint>& freqs,
                                                int max_order, int split_order) {
  if (max_order < 1) throw InvalidArgument("max_order must be >= 1, got " + std::to_string(max_order));
  if (split_order < 0 || split_order > max_order)
    throw InvalidArgument("split order p must lie in 0..max_order, got " + std::to_string(split_order));
  if (freqs.empty()) throw InvalidArgument("general transform report needs at least one frequency");
  bool any = false;
  for (int m = 1; m <= max_order; ++m) any = any || expansion.c(m) != 0.0;
  if (!any) throw InvalidArgument("all Hermite coefficients c_1..c_M are zero");
  if (powers.max_order() < max_order)
    throw InvalidArgument("convolution order " + std::to_string(max_order) + " not available (have 1.." +
                          std::to_string(powers.max_order()) + ")");

  GeneralTransformReport r;
  r.freqs = freqs;
  r.max_order = max_order;
  r.split_order = split_order;
  r.tail_grid.assign(max_order, std::vector<double>(freqs.size(), 0.0));
  for (std::size_t f = 0; f < freqs.size(); ++f) {
    const auto& k = freqs[f];
    if (static_cast<int>(k.size()) != powers.dim())
      throw InvalidArgument("frequency " + format_point(k) + " does not match dimension " +
                            std::to_string(powers.dim()));
    std::vector<double> terms(max_order);
    bool reachable = false;
    double var = 0.0;
    for (int m = 1; m <= max_order; ++m) {
      const double c = expansion.c(m);
      terms[m - 1] = c * c / factorial(m) * powers.order(m).at(k);
      if (c != 0.0 && powers.order(m).in_support(k)) reachable = true;
      var += terms[m - 1];
    }
    if (!reachable)
      throw UnachievableFrequency("frequency " + format_point(k) +
                                  " is outside the support of every order with c_m != 0");
    if (!(var > 0.0)) throw NumericalUnderflow("variance at " + format_point(k) + " underflowed to zero");
    r.variance.push_back(var);
    std::vector<double> ratio(max_order);
    for (int m = 1; m <= max_order; ++m) ratio[m - 1] = factorial(m) * powers.order(m).at(k) / var;
    r.ratios.push_back(std::move(ratio));
    for (int p = 1; p <= max_order; ++p) {
      double t = 0.0;
      for (int m = p + 1; m <= max_order; ++m) t += terms[m - 1];
      r.tail_grid[p - 1][f] = t;
    }
    if (f + 1 == freqs.size()) {
      double s = 0.0;
      for (int m = 1; m <= max_order; ++m) {
        const double w = expansion.c(m) / factorial(m);
        s += w * w * r.ratios.back()[m - 1];
      }
      r.sigma_sq_f = s;
      double t = 0.0;
      for (int m = split_order + 1; m <= max_order; ++m) t += terms[m - 1];
      r.tail = t;
    }
  }
  return r;
}

std::string general_transform_report_json(const GeneralTransformReport& r) {
  detail::json j;
  std::vector<std::string> freqs;
  for (const auto& k : r.freqs) freqs.push_back(format_point(k));
  j["freqs"] = freqs;
  j["max_order"] = r.max_order;
  j["split_order"] = r.split_order;
  j["variance"] = r.variance;
  j["ratios"] = r.ratios;
  j["sigmaSqF"] = r.sigma_sq_f;
  j["tail"] = r.tail;
  j["tail_grid"] = r.tail_grid;
  return j.dump(2);
}

}  // namespace hfclt
