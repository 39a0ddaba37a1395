#include "hfclt/experiments.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "hfclt/cltcheck.hpp"
#include "hfclt/error.hpp"
#include "hfclt/fieldsim.hpp"
#include "hfclt/version.hpp"
#include "json_util.hpp"
#include "text_util.hpp"

namespace hfclt {

using detail::json;

std::vector<int> FrequencyLadder::magnitudes() const {
  if (start < 0) throw InvalidArgument("ladder start must be >= 0, got " + std::to_string(start));
  if (stop < start) throw InvalidArgument("ladder stop must be >= start");
  std::vector<int> out;
  if (kind == LadderKind::kGeometric) {
    if (start < 1) throw InvalidArgument("geometric ladder start must be >= 1");
    if (factor < 2) throw InvalidArgument("ladder factor must be >= 2, got " + std::to_string(factor));
    for (long v = start; v <= stop; v *= factor) out.push_back(static_cast<int>(v));
  } else {
    if (step < 1) throw InvalidArgument("ladder step must be >= 1, got " + std::to_string(step));
    for (long v = start; v <= stop; v += step) out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<LatticePoint> FrequencyLadder::points() const {
  if (direction.empty() || std::all_of(direction.begin(), direction.end(), [](int v) { return v == 0; }))
    throw InvalidArgument("ladder direction must be a nonzero lattice vector");
  std::vector<LatticePoint> out;
  for (int k : magnitudes()) out.push_back(along(direction, k));
  return out;
}

void ExperimentConfig::validate() const {
  if (dim < 1) throw InvalidArgument("dim must be >= 1, got " + std::to_string(dim));
  if (cutoff < 1) throw InvalidArgument("cutoff K must be >= 1, got " + std::to_string(cutoff));
  if (orders.empty()) throw InvalidArgument("at least one order m is required");
  for (int m : orders)
    if (m < 1) throw InvalidArgument("orders must be >= 1, got " + std::to_string(m));
  if (reps < 1) throw InvalidArgument("reps must be >= 1");
  if (static_cast<int>(ladder.direction.size()) != dim)
    throw InvalidArgument("ladder direction has " + std::to_string(ladder.direction.size()) +
                          " coordinates, dim is " + std::to_string(dim));
  const int m_min = *std::min_element(orders.begin(), orders.end());
  for (const auto& k : ladder.points())
    for (int v : k)
      if (std::abs(v) > m_min * cutoff)
        throw InvalidArgument("frequency " + format_point(k) + " lies outside the support m K = " +
                              std::to_string(m_min * cutoff) + " of order " + std::to_string(m_min));
}

namespace {

std::string method_name(ConvolveMethod m) {
  switch (m) {
    case ConvolveMethod::kDirect: return "direct";
    case ConvolveMethod::kFft: return "fft";
    default: return "auto";
  }
}

ConvolveMethod method_from_name(const std::string& s) {
  if (s == "direct") return ConvolveMethod::kDirect;
  if (s == "fft") return ConvolveMethod::kFft;
  if (s == "auto") return ConvolveMethod::kAuto;
  throw SchemaError("unknown convolution method '" + s + "'");
}

}  // namespace

std::string manifest_json(const ExperimentConfig& c, const std::string& command) {
  json j;
  j["command"] = command;
  j["version"] = kVersion;
  json cfg;
  cfg["model"] = detail::model_to_json(c.model);
  cfg["dim"] = c.dim;
  cfg["cutoff"] = c.cutoff;
  cfg["orders"] = c.orders;
  cfg["ladder"] = {{"kind", c.ladder.kind == LadderKind::kGeometric ? "geometric" : "linear"},
                   {"start", c.ladder.start},
                   {"stop", c.ladder.stop},
                   {"factor", c.ladder.factor},
                   {"step", c.ladder.step},
                   {"direction", c.ladder.direction}};
  cfg["reps"] = c.reps;
  cfg["seed"] = c.seed;
  cfg["grid"] = c.grid;
  cfg["workers"] = c.workers;
  cfg["method"] = method_name(c.method);
  j["config"] = cfg;
  return j.dump(2);
}

ExperimentConfig config_from_manifest(const std::string& text, std::string* command) {
  const json j = detail::parse_json(text);
  if (command) *command = detail::require_as<std::string>(j, "command");
  const json& cfg = detail::require(j, "config");
  ExperimentConfig c;
  c.model = detail::model_from_json(detail::require(cfg, "model"));
  c.dim = detail::require_as<int>(cfg, "dim");
  c.cutoff = detail::require_as<int>(cfg, "cutoff");
  c.orders = detail::require_as<std::vector<int>>(cfg, "orders");
  const json& l = detail::require(cfg, "ladder");
  const auto kind = detail::require_as<std::string>(l, "kind");
  if (kind != "geometric" && kind != "linear") throw SchemaError("unknown ladder kind '" + kind + "'");
  c.ladder.kind = kind == "geometric" ? LadderKind::kGeometric : LadderKind::kLinear;
  c.ladder.start = detail::require_as<int>(l, "start");
  c.ladder.stop = detail::require_as<int>(l, "stop");
  c.ladder.factor = detail::require_as<int>(l, "factor");
  c.ladder.step = detail::require_as<int>(l, "step");
  c.ladder.direction = detail::require_as<std::vector<int>>(l, "direction");
  c.reps = detail::require_as<std::size_t>(cfg, "reps");
  c.seed = detail::require_as<std::uint64_t>(cfg, "seed");
  c.grid = detail::require_as<std::size_t>(cfg, "grid");
  c.workers = detail::require_as<unsigned>(cfg, "workers");
  c.method = method_from_name(detail::require_as<std::string>(cfg, "method"));
  return c;
}

namespace {

ConvolutionPowers powers_for(const ExperimentConfig& c, int m_max) {
  const Spectrum s = build_spectrum(c.model, LatticeBox(c.dim, c.cutoff));
  ConvolveOptions opts;
  opts.method = c.method;
  return convolve_power(s, m_max, opts);
}

// Diagnostics per frequency; an underflowed C_{k,m} reports zeros instead of failing.
std::vector<CltDiagnostic> ladder_report(const ConvolutionPowers& powers, const std::vector<LatticePoint>& freqs,
                                         int m, unsigned workers) {
  try {
    return clt_report(powers, freqs, m, workers);
  } catch (const NumericalUnderflow&) {
  }
  std::vector<CltDiagnostic> out;
  for (const auto& k : freqs) {
    try {
      out.push_back(clt_report(powers, {k}, m, 1).front());
    } catch (const NumericalUnderflow&) {
      CltDiagnostic d;
      d.freq = k;
      d.order = m;
      for (int q = 1; q < m; ++q) d.rows.push_back(CltRow{q, 0.0, 0.0});
      out.push_back(std::move(d));
    }
  }
  return out;
}

std::string clt_ladder(const ExperimentConfig& c) {
  c.validate();
  for (int m : c.orders)
    if (m < 2) throw InvalidArgument("example runners need orders m >= 2, got " + std::to_string(m));
  const int m_max = *std::max_element(c.orders.begin(), c.orders.end());
  const ConvolutionPowers powers = powers_for(c, m_max);
  const auto freqs = c.ladder.points();
  std::vector<CltDiagnostic> all;
  for (int m : c.orders) {
    auto part = ladder_report(powers, freqs, m, c.workers);
    all.insert(all.end(), part.begin(), part.end());
  }
  return clt_report_csv(all);
}

}  // namespace

std::string run_example1(const ExperimentConfig& config) {
  if (!std::holds_alternative<AlgebraicModel>(config.model))
    throw InvalidArgument("example1 needs the algebraic model, got " + model_name(config.model));
  return clt_ladder(config);
}

std::string run_example2(const ExperimentConfig& config) {
  if (!std::holds_alternative<ExponentialModel>(config.model))
    throw InvalidArgument("example2 needs the exponential model, got " + model_name(config.model));
  return clt_ladder(config);
}

std::string run_mc_validation(const ExperimentConfig& config) {
  config.validate();
  std::set<int> order_set(config.orders.begin(), config.orders.end());
  order_set.insert(1);
  const std::vector<int> orders(order_set.begin(), order_set.end());
  const int m_max = orders.back();
  const auto freqs = config.ladder.points();
  for (const auto& k : freqs)
    for (int v : k)
      if (std::abs(v) > config.cutoff)
        throw InvalidArgument("frequency " + format_point(k) + " is outside the m = 1 control support K = " +
                              std::to_string(config.cutoff));
  const Spectrum s = build_spectrum(config.model, LatticeBox(config.dim, config.cutoff));
  ConvolveOptions opts;
  opts.method = config.method;
  const ConvolutionPowers powers = convolve_power(s, m_max, opts);

  McConfig mc;
  mc.freqs = freqs;
  mc.orders = orders;
  mc.reps = config.reps;
  mc.seed = config.seed;
  mc.grid = config.grid;
  mc.workers = config.workers;
  const MomentReport report = mc_moments(s, mc);

  using detail::fmt_double;
  std::ostringstream os;
  os << "freq,m,cond3_max,re4_norm,re4_se,im4_norm,im4_se,abs2_ratio,abs2_se,reps\n";
  for (const auto& k : freqs) {
    for (int m : orders) {
      std::string cond3;
      if (m >= 2) {
        const auto d = ladder_report(powers, {k}, m, 1).front();
        cond3 = fmt_double(d.max_cond3());
      }
      const std::string label = std::to_string(m);
      const auto* re4 = report.find(k, label, "re4_norm");
      const auto* im4 = report.find(k, label, "im4_norm");
      const auto* ab = report.find(k, label, "abs2_ratio");
      os << format_point(k) << "," << m << "," << cond3 << "," << fmt_double(re4->estimate) << ","
         << fmt_double(re4->stderr_) << "," << fmt_double(im4->estimate) << "," << fmt_double(im4->stderr_) << ","
         << fmt_double(ab->estimate) << "," << fmt_double(ab->stderr_) << "," << report.reps << "\n";
    }
  }
  return os.str();
}

}  // namespace hfclt
