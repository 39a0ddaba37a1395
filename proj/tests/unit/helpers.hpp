#pragma once

#include <cmath>
#include <vector>

#include "hfclt/spectrum.hpp"

namespace testing {

inline hfclt::Spectrum two_point() {
  return hfclt::build_spectrum(hfclt::TableModel{{0.5, 0.0, 0.5}}, hfclt::LatticeBox(1, 1));
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing
