#include <fstream>
#include <sstream>

#include "hfclt/error.hpp"
#include "hfclt/spectrum.hpp"
#include "json_util.hpp"

namespace hfclt {

using detail::json;

namespace detail {

json model_to_json(const SpectrumModel& model) {
  json j;
  j["type"] = model_name(model);
  if (auto* a = std::get_if<AlgebraicModel>(&model)) {
    j["alpha"] = a->alpha;
    j["scale"] = a->scale;
  } else if (auto* e = std::get_if<ExponentialModel>(&model)) {
    if (e->theta.size() == 1)
      j["theta"] = e->theta.front();
    else
      j["theta"] = e->theta;
    j["h"] = e->h;
  } else {
    j["values"] = std::get<TableModel>(model).values;
  }
  return j;
}

SpectrumModel model_from_json(const json& j) {
  const auto type = detail::require_as<std::string>(j, "type");
  if (type == "algebraic") {
    AlgebraicModel m;
    m.alpha = detail::require_as<double>(j, "alpha");
    if (j.contains("scale")) m.scale = detail::require_as<double>(j, "scale");
    return m;
  }
  if (type == "exponential") {
    ExponentialModel m;
    const json& theta = detail::require(j, "theta");
    if (theta.is_number())
      m.theta = {theta.get<double>()};
    else
      m.theta = detail::require_as<std::vector<double>>(j, "theta");
    if (j.contains("h")) m.h = detail::require_as<std::vector<double>>(j, "h");
    return m;
  }
  if (type == "table") {
    TableModel m;
    m.values = detail::require_as<std::vector<double>>(j, "values");
    return m;
  }
  throw SchemaError("unknown model type '" + type + "'");
}

}  // namespace detail

using detail::model_from_json;
using detail::model_to_json;

std::string spectrum_to_json(const Spectrum& s, bool include_values) {
  json j;
  j["dim"] = s.dim();
  j["cutoff"] = s.cutoff();
  const SpectrumModel model =
      s.model() ? *s.model()
                : SpectrumModel(TableModel{std::vector<double>(s.values().begin(), s.values().end())});
  j["model"] = model_to_json(model);
  if (include_values && !std::holds_alternative<TableModel>(model))
    j["values"] = std::vector<double>(s.values().begin(), s.values().end());
  return j.dump(2);
}

Spectrum spectrum_from_json(const std::string& text) {
  const json j = detail::parse_json(text);
  const int dim = detail::require_as<int>(j, "dim");
  const int cutoff = detail::require_as<int>(j, "cutoff");
  const SpectrumModel model = model_from_json(detail::require(j, "model"));
  if (dim < 1) throw SchemaError("field 'dim' must be >= 1");
  if (cutoff < 1) throw SchemaError("field 'cutoff' must be >= 1");
  const LatticeBox box(dim, cutoff);
  if (auto* t = std::get_if<TableModel>(&model); t && t->values.size() != box.size())
    throw SchemaError("table holds " + std::to_string(t->values.size()) + " values, box needs " +
                      std::to_string(box.size()));
  return build_spectrum(model, box);
}

void save_spectrum(const Spectrum& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << spectrum_to_json(s) << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

Spectrum load_spectrum(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return spectrum_from_json(buf.str());
}

}  // namespace hfclt
