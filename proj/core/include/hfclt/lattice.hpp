#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hfclt {

/// A point of the integer lattice Z^n.
using LatticePoint = std::vector<int>;

/// The centered box {-K,...,K}^n.
///
/// Values over the box are stored row-major with the slowest axis first and
/// index -K first along every axis. With this layout the flat index of -k is
/// `size() - 1 - index(k)`.
class LatticeBox {
 public:
  LatticeBox() = default;
  LatticeBox(int dim, int cutoff);

  int dim() const { return dim_; }
  int cutoff() const { return cutoff_; }
  std::size_t side() const { return static_cast<std::size_t>(2 * cutoff_ + 1); }
  std::size_t size() const { return size_; }

  bool contains(std::span<const int> k) const;
  std::size_t index(std::span<const int> k) const;
  LatticePoint point(std::size_t index) const;
  std::size_t mirror(std::size_t index) const { return size_ - 1 - index; }

  /// Flat row-major strides, slowest axis first.
  std::vector<std::size_t> strides() const;

  /// Coordinates of every point, flattened as size() x dim().
  std::vector<int> coordinate_table() const;

  /// The box of cutoff factor * K in the same dimension.
  LatticeBox scaled(int factor) const { return LatticeBox(dim_, cutoff_ * factor); }

  bool operator==(const LatticeBox&) const = default;

 private:
  int dim_ = 1;
  int cutoff_ = 0;
  std::size_t size_ = 1;
};

double euclidean_norm(std::span<const int> k);

/// The point (k, 0, ..., 0) scaled along `direction`: result[i] = k * direction[i].
LatticePoint along(std::span<const int> direction, int k);

/// "8" for one-dimensional points, "8:0:-1" otherwise.
std::string format_point(std::span<const int> k);
LatticePoint parse_point(const std::string& text, int dim);

}  // namespace hfclt
