#pragma once

#include <string>

#include "hfclt/error.hpp"
#include "hfclt/spectrum.hpp"
#include "json.hpp"

namespace hfclt::detail {

using json = nlohmann::json;

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
}

inline const json& require(const json& j, const char* key) {
  if (!j.is_object()) throw SchemaError(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("missing field '") + key + "'");
  return *it;
}

template <class T>
T require_as(const json& j, const char* key) {
  const json& v = require(j, key);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw SchemaError(std::string("field '") + key + "' has the wrong type");
  }
}

json model_to_json(const SpectrumModel& model);
SpectrumModel model_from_json(const json& j);

}  // namespace hfclt::detail
