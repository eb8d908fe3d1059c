#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "rts/codes.hpp"
#include "rts/fmatrix.hpp"

namespace rts {

// The space of ranked tree shapes grows like the Euler zigzag numbers;
// enumeration beyond this point is refused unless the caller raises the
// cap explicitly.
constexpr std::size_t kDefaultEnumerationCap = 12;

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeEnumerator {
 public:
  explicit ShapeEnumerator(std::size_t cap = kDefaultEnumerationCap) : cap_(cap) {}

  // All F-matrices with n leaves, in canonical order: rows are filled
  // top to bottom, free entries left to right, each scanned ascending
  // within its constraint bounds.  Validity holds by construction.
  std::vector<FMatrix> all_fmatrices(std::size_t n_leaves) const;

  // Same set, converted to codes (order matches all_fmatrices).
  std::vector<RankedShapeCode> all_codes(std::size_t n_leaves) const;

  // Streaming variant; stops early when the visitor returns false.
  void for_each(std::size_t n_leaves, const std::function<bool(const FMatrix&)>& visit) const;

  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

inline std::vector<FMatrix> enumerate_shapes(std::size_t n_leaves,
                                             std::size_t cap = kDefaultEnumerationCap) {
  return ShapeEnumerator(cap).all_fmatrices(n_leaves);
}

inline std::vector<RankedShapeCode> enumerate_codes(std::size_t n_leaves,
                                                    std::size_t cap = kDefaultEnumerationCap) {
  return ShapeEnumerator(cap).all_codes(n_leaves);
}

}  // namespace rts
