// hfclt: command-line front end for the spectrum, convolution, CLT and
// Monte Carlo routines.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hfclt/cltcheck.hpp"
#include "hfclt/convolve.hpp"
#include "hfclt/error.hpp"
#include "hfclt/experiments.hpp"
#include "hfclt/fieldsim.hpp"
#include "hfclt/hermite.hpp"
#include "hfclt/kernels.hpp"
#include "hfclt/spectrum.hpp"
#include "hfclt/version.hpp"

using namespace hfclt;
using json = nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kBudget = 3, kNumerical = 4 };

bool g_quiet = false;

void log_info(const std::string& msg) {
  if (!g_quiet) std::cerr << "[hfclt] " << msg << "\n";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes text to `path`, or stdout when the path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
  log_info("wrote " + path);
}

// Manifest next to the output file: command, arguments, seed, version.
void write_manifest(const std::string& out_path, const json& manifest) {
  if (out_path.empty() || out_path == "-") return;
  emit(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

json generic_manifest(const std::string& command, int argc, char** argv) {
  json j;
  j["command"] = command;
  j["version"] = kVersion;
  std::vector<std::string> args(argv, argv + argc);
  j["argv"] = args;
  return j;
}

// --- spectrum options shared by several subcommands ------------------------

struct SpectrumArgs {
  std::string file;
  std::string model = "algebraic";
  double alpha = 2.0;
  double scale = 1.0;
  std::vector<double> theta{0.5};
  std::vector<double> h{1.0};
  int dim = 1;
  int cutoff = 64;

  void attach(CLI::App* app) {
    app->add_option("--spectrum", file, "Spectrum JSON file (overrides the model flags)");
    app->add_option("--model", model, "algebraic | exponential")
        ->check(CLI::IsMember({"algebraic", "exponential"}));
    app->add_option("--alpha", alpha, "Algebraic decay exponent (> 1)");
    app->add_option("--scale", scale, "Algebraic scale (> 0)");
    app->add_option("--theta", theta, "Exponential rate(s), one per axis or a single value")->delimiter(',');
    app->add_option("--prefactor", h, "Polynomial prefactor h as coefficients h0,h1,...")->delimiter(',');
    app->add_option("--dim", dim, "Lattice dimension n");
    app->add_option("--cutoff,-K", cutoff, "Band limit K");
  }

  SpectrumModel model_value() const {
    if (model == "exponential") return ExponentialModel{theta, h};
    return AlgebraicModel{alpha, scale};
  }

  Spectrum build() const {
    if (!file.empty()) return load_spectrum(file);
    return build_spectrum(model_value(), LatticeBox(dim, cutoff));
  }
};

std::vector<LatticePoint> parse_freqs(const std::vector<std::string>& items, int dim) {
  std::vector<LatticePoint> out;
  for (const auto& s : items) out.push_back(parse_point(s, dim));
  if (out.empty()) throw InvalidArgument("at least one frequency is required (--freqs)");
  return out;
}

ConvolveMethod parse_method(const std::string& s) {
  if (s == "direct") return ConvolveMethod::kDirect;
  if (s == "fft") return ConvolveMethod::kFft;
  return ConvolveMethod::kAuto;
}

// --- experiment options -------------------------------------------------------

struct ExperimentArgs {
  SpectrumArgs spec;
  std::vector<int> orders{2};
  std::string ladder = "geometric";
  int start = 8, stop = 512, factor = 2, step = 8;
  std::vector<int> direction;
  std::size_t reps = 20000;
  std::optional<std::uint64_t> seed;
  std::size_t grid = 0;
  unsigned workers = 0;
  std::string method = "auto";
  std::string from_manifest;

  void attach(CLI::App* app, bool stochastic) {
    spec.attach(app);
    app->add_option("--orders,-m", orders, "Hermite orders")->delimiter(',');
    app->add_option("--ladder", ladder, "geometric | linear")->check(CLI::IsMember({"geometric", "linear"}));
    app->add_option("--start", start, "First ladder frequency");
    app->add_option("--stop", stop, "Last ladder frequency (inclusive bound)");
    app->add_option("--factor", factor, "Geometric ladder factor");
    app->add_option("--step", step, "Linear ladder step");
    app->add_option("--direction", direction, "Lattice direction of the ladder")->delimiter(',');
    app->add_option("--method", method, "Convolution path: auto | direct | fft")
        ->check(CLI::IsMember({"auto", "direct", "fft"}));
    app->add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");
    app->add_option("--from-manifest", from_manifest, "Rerun the configuration stored in a manifest");
    if (stochastic) {
      app->add_option("--reps", reps, "Monte Carlo replications");
      app->add_option("--seed", seed, "Random seed (required)");
      app->add_option("--grid", grid, "Torus grid size G (0 = automatic)");
    }
  }

  ExperimentConfig config(const std::string& command, bool stochastic) const {
    if (!from_manifest.empty()) {
      std::string stored;
      ExperimentConfig c = config_from_manifest(read_file(from_manifest), &stored);
      if (stored != command)
        throw InvalidArgument("manifest was written by '" + stored + "', not '" + command + "'");
      return c;
    }
    if (stochastic && !seed) throw InvalidArgument("--seed is required for stochastic commands");
    ExperimentConfig c;
    c.model = spec.model_value();
    c.dim = spec.dim;
    c.cutoff = spec.cutoff;
    c.orders = orders;
    c.ladder.kind = ladder == "linear" ? LadderKind::kLinear : LadderKind::kGeometric;
    c.ladder.start = start;
    c.ladder.stop = stop;
    c.ladder.factor = factor;
    c.ladder.step = step;
    c.ladder.direction = direction;
    if (c.ladder.direction.empty()) {
      c.ladder.direction.assign(spec.dim, 0);
      c.ladder.direction[0] = 1;
    }
    c.reps = reps;
    c.seed = seed.value_or(0);
    c.grid = grid;
    c.workers = workers;
    c.method = parse_method(method);
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-frequency CLT diagnostics for Hermite-subordinated Gaussian fields on the torus"};
  app.set_version_flag("--version", std::string(kVersion));
  app.add_flag("--quiet,-q", g_quiet, "Suppress progress messages on stderr");
  app.require_subcommand(1);
  app.fallthrough();
  std::string out;

  // spectrum
  auto* sp = app.add_subcommand("spectrum", "Build, validate or save a power spectrum");
  SpectrumArgs sp_args;
  sp_args.attach(sp);
  bool sp_values = false;
  std::string sp_check;
  sp->add_flag("--values", sp_values, "Include the value table in the JSON output");
  sp->add_option("--check", sp_check, "Validate a spectrum file and list violations");
  sp->add_option("--out,-o", out, "Output path (default stdout)");

  // convolve
  auto* cv = app.add_subcommand("convolve", "Convolution powers C_{k,m}");
  SpectrumArgs cv_args;
  cv_args.attach(cv);
  int cv_order = 2;
  std::string cv_method = "auto", cv_accuracy = "pointwise";
  std::vector<std::string> cv_at;
  bool cv_verify = false;
  cv->add_option("--order,-m", cv_order, "Convolution order m")->required();
  cv->add_option("--method", cv_method, "auto | direct | fft")->check(CLI::IsMember({"auto", "direct", "fft"}));
  cv->add_option("--accuracy", cv_accuracy, "FFT accuracy: pointwise | normwise")
      ->check(CLI::IsMember({"pointwise", "normwise"}));
  cv->add_option("--at", cv_at, "Report only these lattice points (k or k1:k2:...)")->delimiter(',');
  cv->add_flag("--verify", cv_verify, "Add splitting residuals for every q at the reported points");
  cv->add_option("--out,-o", out, "CSV output, or a .json/.bin dump of the order-m power");

  // clt-check
  auto* cc = app.add_subcommand("clt-check", "Contraction sums, sup/sum ratios and bridge laws");
  SpectrumArgs cc_args;
  cc_args.attach(cc);
  int cc_order = 2, cc_bridge = 0, cc_max_order = 0, cc_split = 0;
  std::vector<std::string> cc_freqs;
  std::string cc_transform;
  unsigned cc_workers = 0;
  cc->add_option("--order,-m", cc_order, "Hermite order m");
  cc->add_option("--freqs", cc_freqs, "Frequencies (k or k1:k2:...)")->delimiter(',')->required();
  cc->add_option("--bridge", cc_bridge, "Print the bridge law P[Z_q = . | Z_m = k] for this q");
  cc->add_option("--transform", cc_transform, "General-transform report for hermite:m, poly:..., square, cube, abs, tanh");
  cc->add_option("--max-order", cc_max_order, "Truncation order of the general-transform report");
  cc->add_option("--split", cc_split, "Split order p for the tail estimate");
  cc->add_option("--workers", cc_workers, "Worker threads (0 = hardware concurrency)");
  cc->add_option("--out,-o", out, "Output path (default stdout)");

  // expand
  auto* ex = app.add_subcommand("expand", "Hermite coefficients c_m(F)");
  std::string ex_transform;
  int ex_order = 12, ex_nodes = 128;
  ex->add_option("--transform", ex_transform, "hermite:m, poly:a0,a1,..., square, cube, abs, tanh")->required();
  ex->add_option("--max-order,-M", ex_order, "Truncation order M");
  ex->add_option("--nodes", ex_nodes, "Gauss-Hermite nodes for pointwise transforms");
  ex->add_option("--out,-o", out, "Output path (default stdout)");

  // simulate
  auto* sm = app.add_subcommand("simulate", "Monte Carlo moments of subordinated Fourier coefficients");
  SpectrumArgs sm_args;
  sm_args.attach(sm);
  McConfig mc;
  std::vector<std::string> sm_freqs;
  std::string sm_transform;
  std::optional<std::uint64_t> sm_seed;
  sm->add_option("--freqs", sm_freqs, "Frequencies (k or k1:k2:...)")->delimiter(',')->required();
  sm->add_option("--orders,-m", mc.orders, "Hermite orders to track")->delimiter(',');
  sm->add_option("--transform", sm_transform, "Also track a general transform F");
  sm->add_option("--reps", mc.reps, "Replications");
  sm->add_option("--seed", sm_seed, "Random seed")->required();
  sm->add_option("--grid", mc.grid, "Torus grid size G (0 = automatic)");
  sm->add_option("--workers", mc.workers, "Worker threads (0 = hardware concurrency)");
  sm->add_option("--out,-o", out, "CSV output path (default stdout)");

  // kernel-verify
  auto* kv = app.add_subcommand("kernel-verify", "Property sweeps over discrete chaos kernels");
  std::size_t kv_atoms = 4;
  int kv_order = 3, kv_trials = 100;
  std::optional<std::uint64_t> kv_seed;
  bool kv_spectral = false;
  SpectrumArgs kv_spec;
  kv_spec.cutoff = 3;
  std::string kv_freq = "2";
  kv->add_option("--atoms,-N", kv_atoms, "Atoms of the uniform measure");
  kv->add_option("--order,-d", kv_order, "Kernel order d");
  kv->add_option("--trials", kv_trials, "Random kernels to test");
  kv->add_option("--seed", kv_seed, "Random seed")->required();
  kv->add_flag("--spectral", kv_spectral, "Also compare the spectral contraction norms with the convolution formula");
  kv_spec.attach(kv);
  kv->add_option("--freq", kv_freq, "Frequency for the spectral kernel check");
  kv->add_option("--out,-o", out, "JSON output path (default stdout)");

  // experiments
  auto* e1 = app.add_subcommand("example1", "Algebraic decay: sup/sum ratios stay bounded away from zero");
  ExperimentArgs e1_args;
  e1_args.spec.cutoff = 2048;
  e1_args.attach(e1, false);
  e1->add_option("--out,-o", out, "CSV output path (default stdout)");

  auto* e2 = app.add_subcommand("example2", "Exponential decay: sup/sum ratios vanish");
  ExperimentArgs e2_args;
  e2_args.spec.model = "exponential";
  e2_args.spec.cutoff = 512;
  e2_args.start = 16;
  e2_args.stop = 256;
  e2_args.attach(e2, false);
  e2->add_option("--out,-o", out, "CSV output path (default stdout)");

  auto* mv = app.add_subcommand("mc-validate", "Analytic ratios next to Monte Carlo fourth moments");
  ExperimentArgs mv_args;
  mv_args.spec.cutoff = 64;
  mv_args.start = 8;
  mv_args.stop = 64;
  mv_args.attach(mv, true);
  mv->add_option("--out,-o", out, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (*sp) {
      if (!sp_check.empty()) {
        json report;
        report["file"] = sp_check;
        json list = json::array();
        try {
          const Spectrum s = spectrum_from_json(read_file(sp_check));
          for (const auto& v : validate_spectrum(s))
            list.push_back({{"kind", to_string(v.kind)}, {"k", format_point(v.point)}, {"message", v.message}});
        } catch (const InvalidArgument& e) {
          list.push_back({{"kind", "invalid"}, {"message", e.what()}});
        }
        report["violations"] = list;
        emit(out, report.dump(2) + "\n");
        return list.empty() ? kOk : kConfig;
      }
      const Spectrum s = sp_args.build();
      emit(out, spectrum_to_json(s, sp_values) + "\n");
    } else if (*cv) {
      const Spectrum s = cv_args.build();
      ConvolveOptions opts;
      opts.method = parse_method(cv_method);
      opts.accuracy = cv_accuracy == "normwise" ? FftAccuracy::kNormwise : FftAccuracy::kPointwise;
      const ConvolutionPowers powers = convolve_power(s, cv_order, opts);
      const ConvolvedSpectrum& c = powers.order(cv_order);
      const std::filesystem::path p(out);
      if (p.extension() == ".bin") {
        write_convolved_binary(c, p);
        log_info("wrote " + out);
      } else if (p.extension() == ".json") {
        emit(out, convolved_to_json(c) + "\n");
      } else {
        std::ostringstream os;
        os << "freq,m,value";
        if (cv_verify)
          for (int q = 1; q < cv_order; ++q) os << ",residual_q" << q;
        os << "\n";
        std::vector<LatticePoint> pts;
        if (cv_at.empty())
          for (std::size_t i = 0; i < c.box().size(); ++i) pts.push_back(c.box().point(i));
        else
          for (const auto& a : cv_at) pts.push_back(parse_point(a, s.dim()));
        for (const auto& k : pts) {
          os << format_point(k) << "," << cv_order << "," << fmt(c.at(k));
          if (cv_verify)
            for (int q = 1; q < cv_order; ++q)
              os << "," << (c.at(k) > 0.0 ? fmt(verify_recursion(powers, k, cv_order, q)) : std::string("0"));
          os << "\n";
        }
        emit(out, os.str());
      }
      write_manifest(out, generic_manifest("convolve", argc, argv));
    } else if (*cc) {
      const Spectrum s = cc_args.build();
      const auto freqs = parse_freqs(cc_freqs, s.dim());
      const int need = std::max(cc_order, cc_max_order);
      const ConvolutionPowers powers = convolve_power(s, need);
      std::string text;
      if (!cc_transform.empty()) {
        const int M = cc_max_order > 0 ? cc_max_order : cc_order;
        const ConvolutionPowers unit = convolve_power(s.normalized(), M);
        const HermiteExpansion e = expand(parse_transform(cc_transform), M);
        text = general_transform_report_json(general_transform_report(unit, e, freqs, M, cc_split)) + "\n";
      } else if (cc_bridge > 0) {
        std::ostringstream os;
        os << "freq,m,q,lambda,probability\n";
        for (const auto& k : freqs) {
          const auto b = bridge_distribution(powers, k, cc_order, cc_bridge);
          for (const auto& [lam, pr] : b.probabilities)
            os << format_point(k) << "," << cc_order << "," << cc_bridge << "," << format_point(lam) << "," << fmt(pr)
               << "\n";
        }
        text = os.str();
      } else {
        text = clt_report_csv(clt_report(powers, freqs, cc_order, cc_workers));
      }
      emit(out, text);
      write_manifest(out, generic_manifest("clt-check", argc, argv));
    } else if (*ex) {
      ExpandOptions opts;
      opts.quadrature_nodes = ex_nodes;
      const Transform t = parse_transform(ex_transform);
      const HermiteExpansion e = expand(t, ex_order, opts);
      json j;
      j["transform"] = transform_name(t);
      j["max_order"] = e.max_order();
      j["coeffs"] = e.coeffs;
      j["converged"] = e.converged;
      j["truncated"] = e.truncated;
      j["l2_norm_sq"] = e.l2_norm_sq();
      emit(out, j.dump(2) + "\n");
    } else if (*sm) {
      const Spectrum s = sm_args.build();
      mc.freqs = parse_freqs(sm_freqs, s.dim());
      mc.seed = *sm_seed;
      if (!sm_transform.empty()) mc.transform = parse_transform(sm_transform);
      const MomentReport r = mc_moments(s, mc);
      log_info("grid " + std::to_string(r.grid) + ", max imaginary residue " + fmt(r.max_imag_residue) +
               (r.exact ? "" : ", transform coefficients approximate (aliasing possible)"));
      emit(out, moment_report_csv(r));
      json m = generic_manifest("simulate", argc, argv);
      m["seed"] = mc.seed;
      m["grid"] = r.grid;
      write_manifest(out, m);
    } else if (*kv) {
      std::mt19937_64 rng = replication_stream(*kv_seed, 0);
      const AtomicMeasure mu = AtomicMeasure::uniform(kv_atoms);
      json j;
      std::size_t holds = 0;
      double worst_gap = std::numeric_limits<double>::infinity(), worst_parts = 0.0, worst_sym = 0.0;
      for (int t = 0; t < kv_trials; ++t) {
        const DiscreteKernel g = random_symmetric_kernel(kv_order, mu, rng);
        worst_sym = std::max(worst_sym, g.symmetry_defect());
        bool all = true;
        for (int q = 1; q < kv_order; ++q) {
          const auto r = check_complex_inequality(g, q);
          all = all && r.holds;
          worst_gap = std::min(worst_gap, r.lhs - r.rhs);
          const DiscreteKernel direct = contract(g, g, q);
          const DiscreteKernel parts = contract_by_parts(g, g, q);
          for (std::size_t i = 0; i < direct.size(); ++i) worst_parts = std::max(worst_parts, std::abs(direct[i] - parts[i]));
        }
        holds += all ? 1 : 0;
      }
      j["trials"] = kv_trials;
      j["order"] = kv_order;
      j["atoms"] = kv_atoms;
      j["seed"] = *kv_seed;
      j["inequality_holds"] = holds == static_cast<std::size_t>(kv_trials);
      j["trials_holding"] = holds;
      j["min_lhs_minus_rhs"] = worst_gap;
      j["max_by_parts_deviation"] = worst_parts;
      j["max_symmetry_defect"] = worst_sym;
      int code = holds == static_cast<std::size_t>(kv_trials) ? kOk : kNumerical;
      if (kv_spectral) {
        const Spectrum s = kv_spec.build();
        const LatticePoint k = parse_point(kv_freq, s.dim());
        json rows = json::array();
        for (int m = 2; m <= 3; ++m)
          for (int q = 1; q < m; ++q) {
            const ContractionNormCheck c = verify_contraction_norm(s, m, k, q);
            rows.push_back({{"m", m}, {"q", q}, {"bruteforce", c.bruteforce}, {"formula", c.formula},
                            {"relative_error", c.relative_error()}});
          }
        j["spectral_contraction"] = rows;
      }
      emit(out, j.dump(2) + "\n");
      return code;
    } else if (*e1 || *e2 || *mv) {
      const std::string command = *e1 ? "example1" : *e2 ? "example2" : "mc-validate";
      const ExperimentArgs& args = *e1 ? e1_args : *e2 ? e2_args : mv_args;
      const bool stochastic = mv->parsed();
      ExperimentConfig config = args.config(command, stochastic);
      if (*e1 && args.from_manifest.empty() && args.spec.model != "algebraic")
        throw InvalidArgument("example1 uses the algebraic model");
      if (*e2 && args.from_manifest.empty() && args.spec.model != "exponential")
        throw InvalidArgument("example2 uses the exponential model");
      config.validate();
      const std::string csv =
          *e1 ? run_example1(config) : *e2 ? run_example2(config) : run_mc_validation(config);
      emit(out, csv);
      if (!out.empty() && out != "-") emit(out + ".manifest.json", manifest_json(config, command) + "\n");
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kConfig;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const UnachievableFrequency& e) {
    std::cerr << "unachievable frequency: " << e.what() << "\n";
    return kNumerical;
  } catch (const NumericalUnderflow& e) {
    std::cerr << "numerical underflow: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  log_info("done in " + fmt(secs) + " s");
  return kOk;
}
