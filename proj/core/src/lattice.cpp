#include "hfclt/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hfclt/error.hpp"

namespace hfclt {

LatticeBox::LatticeBox(int dim, int cutoff) : dim_(dim), cutoff_(cutoff) {
  if (dim < 1) throw InvalidArgument("dim must be a positive integer, got " + std::to_string(dim));
  if (cutoff < 0) throw InvalidArgument("cutoff must be nonnegative, got " + std::to_string(cutoff));
  size_ = 1;
  for (int i = 0; i < dim; ++i) size_ *= side();
}

bool LatticeBox::contains(std::span<const int> k) const {
  if (static_cast<int>(k.size()) != dim_) return false;
  for (int v : k)
    if (v < -cutoff_ || v > cutoff_) return false;
  return true;
}

std::size_t LatticeBox::index(std::span<const int> k) const {
  std::size_t idx = 0;
  for (int i = 0; i < dim_; ++i) idx = idx * side() + static_cast<std::size_t>(k[i] + cutoff_);
  return idx;
}

LatticePoint LatticeBox::point(std::size_t index) const {
  LatticePoint k(dim_);
  for (int i = dim_ - 1; i >= 0; --i) {
    k[i] = static_cast<int>(index % side()) - cutoff_;
    index /= side();
  }
  return k;
}

std::vector<std::size_t> LatticeBox::strides() const {
  std::vector<std::size_t> s(dim_);
  std::size_t stride = 1;
  for (int i = dim_ - 1; i >= 0; --i) {
    s[i] = stride;
    stride *= side();
  }
  return s;
}

std::vector<int> LatticeBox::coordinate_table() const {
  std::vector<int> table(size_ * dim_);
  std::vector<int> k(dim_, -cutoff_);
  for (std::size_t idx = 0; idx < size_; ++idx) {
    std::copy(k.begin(), k.end(), table.begin() + static_cast<std::ptrdiff_t>(idx * dim_));
    for (int i = dim_ - 1; i >= 0; --i) {
      if (++k[i] <= cutoff_) break;
      k[i] = -cutoff_;
    }
  }
  return table;
}

double euclidean_norm(std::span<const int> k) {
  double s = 0.0;
  for (int v : k) s += static_cast<double>(v) * v;
  return std::sqrt(s);
}

LatticePoint along(std::span<const int> direction, int k) {
  LatticePoint p(direction.begin(), direction.end());
  for (int& v : p) v *= k;
  return p;
}

std::string format_point(std::span<const int> k) {
  std::string out;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) out += ':';
    out += std::to_string(k[i]);
  }
  return out;
}

LatticePoint parse_point(const std::string& text, int dim) {
  LatticePoint p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      p.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument("freq: cannot parse lattice point '" + text + "'");
    }
  }
  if (static_cast<int>(p.size()) != dim)
    throw InvalidArgument("freq: point '" + text + "' does not have " + std::to_string(dim) +
                          " coordinates");
  return p;
}

}  // namespace hfclt
