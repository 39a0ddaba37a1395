#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hfclt/convolve.hpp"
#include "hfclt/lattice.hpp"
#include "hfclt/spectrum.hpp"

namespace hfclt {

enum class LadderKind { kGeometric, kLinear };

/// Frequencies start, start*factor, ... (geometric) or start, start+step, ...
/// (linear) up to stop, placed along `direction`.
struct FrequencyLadder {
  LadderKind kind = LadderKind::kGeometric;
  int start = 8;
  int stop = 512;
  int factor = 2;
  int step = 8;
  LatticePoint direction{1};

  std::vector<int> magnitudes() const;
  std::vector<LatticePoint> points() const;
};

struct ExperimentConfig {
  SpectrumModel model = AlgebraicModel{};
  int dim = 1;
  int cutoff = 2048;
  std::vector<int> orders{2};
  FrequencyLadder ladder;
  std::size_t reps = 20000;
  std::uint64_t seed = 0;
  std::size_t grid = 0;
  unsigned workers = 0;
  ConvolveMethod method = ConvolveMethod::kAuto;

  /// Throws InvalidArgument on any broken invariant (ladder outside the
  /// largest order's support, reps < 1, ...).
  void validate() const;
};

/// Full configuration plus seed and library version, enough to rerun.
std::string manifest_json(const ExperimentConfig& config, const std::string& command);
ExperimentConfig config_from_manifest(const std::string& json_text, std::string* command = nullptr);

/// CSV freq,m,q,cond2_sum,cond3_ratio,variance for the algebraic model;
/// the ratio column stays bounded away from zero.
std::string run_example1(const ExperimentConfig& config);

/// Same schema for the exponential model; the ratio column decays like 1/k.
std::string run_example2(const ExperimentConfig& config);

/// Analytic cond3 maxima joined with Monte Carlo fourth moments, one row per
/// (freq, m) including an m = 1 control:
/// freq,m,cond3_max,re4_norm,re4_se,im4_norm,im4_se,abs2_ratio,abs2_se,reps
std::string run_mc_validation(const ExperimentConfig& config);

}  // namespace hfclt
