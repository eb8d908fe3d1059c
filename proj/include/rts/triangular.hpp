#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rts {

// Flat row-major storage for a lower-triangular matrix with `dim` rows.
// Indices follow the 1-based convention used throughout the encodings:
// valid entries are (i, j) with 1 <= j <= i <= dim.
template <typename T>
class TriangularMatrix {
 public:
  TriangularMatrix() = default;
  explicit TriangularMatrix(std::size_t dim, T fill = T{})
      : dim_(dim), data_(dim * (dim + 1) / 2, fill) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[index(i, j)]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[index(i, j)]; }

  T at_checked(std::size_t i, std::size_t j) const {
    if (i < 1 || i > dim_ || j < 1 || j > i) {
      throw std::out_of_range("triangular index out of range");
    }
    return data_[index(i, j)];
  }

  const std::vector<T>& flat() const { return data_; }
  std::vector<T>& flat() { return data_; }

  bool operator==(const TriangularMatrix& other) const {
    return dim_ == other.dim_ && data_ == other.data_;
  }
  bool operator!=(const TriangularMatrix& other) const { return !(*this == other); }
  // Row-major flat comparison; used for canonical tie-breaking and set storage.
  bool operator<(const TriangularMatrix& other) const {
    if (dim_ != other.dim_) return dim_ < other.dim_;
    return data_ < other.data_;
  }

 private:
  static std::size_t index_unchecked(std::size_t i, std::size_t j) {
    return i * (i - 1) / 2 + (j - 1);
  }
  std::size_t index(std::size_t i, std::size_t j) const { return index_unchecked(i, j); }

  std::size_t dim_ = 0;
  std::vector<T> data_;
};

using IntTriangle = TriangularMatrix<int>;
using RealTriangle = TriangularMatrix<double>;

}  // namespace rts
