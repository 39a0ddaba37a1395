#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hfclt/lattice.hpp"

namespace hfclt {

/// C_k = scale * |k|^-alpha for k != 0.
struct AlgebraicModel {
  double alpha = 2.0;
  double scale = 1.0;
};

/// C_k = h(|k|) * exp(-sum_i theta_i |k_i|) for k != 0, with h(l) = h[0] + h[1] l + ...
///
/// A single theta is applied to every axis.
struct ExponentialModel {
  std::vector<double> theta{0.5};
  std::vector<double> h{1.0};
};

/// Explicit values over the box, flat in LatticeBox order.
struct TableModel {
  std::vector<double> values;
};

using SpectrumModel = std::variant<AlgebraicModel, ExponentialModel, TableModel>;

std::string model_name(const SpectrumModel& model);

/// A nonnegative symmetric power spectrum on a centered lattice box.
///
/// Immutable after construction. The constructor does not validate; use
/// validate_spectrum() or build_spectrum() for checked construction.
class Spectrum {
 public:
  Spectrum() = default;
  Spectrum(LatticeBox box, std::vector<double> values,
           std::optional<SpectrumModel> model = std::nullopt);

  const LatticeBox& box() const { return box_; }
  int dim() const { return box_.dim(); }
  int cutoff() const { return box_.cutoff(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t index) const { return values_[index]; }

  /// C_k, zero outside the box.
  double at(std::span<const int> k) const;

  double total_mass() const;

  /// Where the model says C_k > 0. For models this is k != 0 even if the
  /// stored value underflowed; for tables it is the stored value > 0.
  std::span<const std::uint8_t> positivity() const { return positive_; }

  /// The model that generated the values, if any (absent for ad-hoc tables).
  const std::optional<SpectrumModel>& model() const { return model_; }

  /// Same shape rescaled to unit total mass, so that E[T(x)^2] = 1.
  Spectrum normalized() const;

 private:
  LatticeBox box_;
  std::vector<double> values_;
  std::vector<std::uint8_t> positive_;
  std::optional<SpectrumModel> model_;
};

/// Materialises a model over the box. Throws InvalidArgument naming the
/// offending parameter.
Spectrum build_spectrum(const SpectrumModel& model, const LatticeBox& box);

/// Evaluates a non-table model at a single point (C_0 = 0).
double model_value(const SpectrumModel& model, std::span<const int> k);

enum class ViolationKind { kSymmetry, kNegative, kNonFinite, kShape };

struct Violation {
  ViolationKind kind;
  LatticePoint point;
  std::string message;
};

/// Reports every broken invariant; never throws. Symmetry violations are
/// reported once per pair, at the member with the larger flat index.
std::vector<Violation> validate_spectrum(const Spectrum& s);

std::string to_string(ViolationKind kind);

void save_spectrum(const Spectrum& s, const std::filesystem::path& path);
Spectrum load_spectrum(const std::filesystem::path& path);

std::string spectrum_to_json(const Spectrum& s, bool include_values = false);
Spectrum spectrum_from_json(const std::string& text);

}  // namespace hfclt
