#include "hfclt/spectrum.hpp"

#include <cmath>
#include <numeric>

#include "hfclt/error.hpp"

namespace hfclt {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double algebraic_value(const AlgebraicModel& m, std::span<const int> k) {
  const double r = euclidean_norm(k);
  if (r == 0.0) return 0.0;
  return m.scale * std::pow(r, -m.alpha);
}

double poly_h(const std::vector<double>& h, double l) {
  double v = 0.0;
  for (auto it = h.rbegin(); it != h.rend(); ++it) v = v * l + *it;
  return v;
}

double exponential_value(const ExponentialModel& m, std::span<const int> k) {
  const double r = euclidean_norm(k);
  if (r == 0.0) return 0.0;
  double exponent = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double theta = m.theta.size() == 1 ? m.theta[0] : m.theta[i];
    exponent += theta * std::abs(k[i]);
  }
  return poly_h(m.h, r) * std::exp(-exponent);
}

void check_algebraic(const AlgebraicModel& m) {
  if (!(m.alpha > 1.0) || !std::isfinite(m.alpha))
    throw InvalidArgument("alpha must be a finite real > 1, got " + std::to_string(m.alpha));
  if (!(m.scale > 0.0) || !std::isfinite(m.scale))
    throw InvalidArgument("scale must be a finite real > 0, got " + std::to_string(m.scale));
}

void check_exponential(const ExponentialModel& m, const LatticeBox& box) {
  if (m.theta.empty() || (m.theta.size() != 1 && static_cast<int>(m.theta.size()) != box.dim()))
    throw InvalidArgument("theta must hold 1 or dim values");
  for (double t : m.theta)
    if (!(t > 0.0) || !std::isfinite(t))
      throw InvalidArgument("theta must be a finite real > 0, got " + std::to_string(t));
  if (m.h.empty()) throw InvalidArgument("h must have at least one coefficient");
  for (double c : m.h)
    if (!std::isfinite(c)) throw InvalidArgument("h coefficients must be finite");
  // h must be positive wherever the model is evaluated
  for (std::size_t idx = 0; idx < box.size(); ++idx) {
    const auto k = box.point(idx);
    const double r = euclidean_norm(k);
    if (r == 0.0) continue;
    if (!(poly_h(m.h, r) > 0.0))
      throw InvalidArgument("h must be positive on the lattice, but h(" + std::to_string(r) +
                            ") = " + std::to_string(poly_h(m.h, r)) + " at k = " +
                            format_point(k));
  }
}

}  // namespace

std::string model_name(const SpectrumModel& model) {
  return std::visit(Overloaded{[](const AlgebraicModel&) { return std::string("algebraic"); },
                               [](const ExponentialModel&) { return std::string("exponential"); },
                               [](const TableModel&) { return std::string("table"); }},
                    model);
}

Spectrum::Spectrum(LatticeBox box, std::vector<double> values, std::optional<SpectrumModel> model)
    : box_(box), values_(std::move(values)), model_(std::move(model)) {
  if (values_.size() != box_.size())
    throw InvalidArgument("values: expected " + std::to_string(box_.size()) + " entries, got " +
                          std::to_string(values_.size()));
  positive_.resize(values_.size());
  const bool analytic = model_ && !std::holds_alternative<TableModel>(*model_);
  const std::size_t center = box_.size() / 2;
  for (std::size_t i = 0; i < values_.size(); ++i)
    positive_[i] = analytic ? (i != center) : (values_[i] > 0.0);
}

double Spectrum::at(std::span<const int> k) const {
  return box_.contains(k) ? values_[box_.index(k)] : 0.0;
}

double Spectrum::total_mass() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

Spectrum Spectrum::normalized() const {
  const double mass = total_mass();
  if (!(mass > 0.0)) throw InvalidArgument("spectrum has zero total mass; cannot normalise");
  std::vector<double> v(values_);
  for (double& x : v) x /= mass;
  Spectrum out(box_, std::move(v));
  out.positive_ = positive_;
  return out;
}

double model_value(const SpectrumModel& model, std::span<const int> k) {
  return std::visit(
      Overloaded{[&](const AlgebraicModel& m) { return algebraic_value(m, k); },
                 [&](const ExponentialModel& m) { return exponential_value(m, k); },
                 [](const TableModel&) -> double {
                   throw InvalidArgument("model_value: table models have no formula");
                 }},
      model);
}

Spectrum build_spectrum(const SpectrumModel& model, const LatticeBox& box) {
  if (box.cutoff() < 1) throw InvalidArgument("cutoff must be >= 1");
  return std::visit(
      Overloaded{
          [&](const AlgebraicModel& m) {
            check_algebraic(m);
            std::vector<double> v(box.size());
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = algebraic_value(m, box.point(i));
            return Spectrum(box, std::move(v), model);
          },
          [&](const ExponentialModel& m) {
            check_exponential(m, box);
            std::vector<double> v(box.size());
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = exponential_value(m, box.point(i));
            return Spectrum(box, std::move(v), model);
          },
          [&](const TableModel& m) {
            Spectrum s(box, m.values, model);
            const auto violations = validate_spectrum(s);
            if (!violations.empty())
              throw InvalidArgument("table: " + violations.front().message);
            return s;
          }},
      model);
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kSymmetry: return "symmetry";
    case ViolationKind::kNegative: return "negative";
    case ViolationKind::kNonFinite: return "non-finite";
    case ViolationKind::kShape: return "shape";
  }
  return "unknown";
}

std::vector<Violation> validate_spectrum(const Spectrum& s) {
  std::vector<Violation> out;
  const auto& box = s.box();
  const auto v = s.values();
  if (v.size() != box.size()) {
    out.push_back({ViolationKind::kShape, {}, "value count does not match the box"});
    return out;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      auto k = box.point(i);
      out.push_back({ViolationKind::kNonFinite, k, "C at k = " + format_point(k) + " is not finite"});
      continue;
    }
    if (v[i] < 0.0) {
      auto k = box.point(i);
      out.push_back({ViolationKind::kNegative, k,
                     "C at k = " + format_point(k) + " is negative (" + std::to_string(v[i]) + ")"});
    }
  }
  for (std::size_t i = box.size() / 2 + 1; i < v.size(); ++i) {
    const std::size_t j = box.mirror(i);
    if (v[i] != v[j] && !(std::isnan(v[i]) && std::isnan(v[j]))) {
      auto k = box.point(i);
      out.push_back({ViolationKind::kSymmetry, k,
                     "C at k = " + format_point(k) + " differs from C at -k"});
    }
  }
  return out;
}

}  // namespace hfclt
