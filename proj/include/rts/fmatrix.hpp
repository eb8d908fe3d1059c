#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rts/triangular.hpp"

namespace rts {

// Which F-matrix constraint a candidate matrix violates, if any.
enum class FConstraint {
  kDiagonal,       // F[i][i] = i+1
  kSubdiagonal,    // F[i+1][i] = i
  kFirstColumn,    // max{0, F[i-1][1]-1} <= F[i][1] <= F[i-1][1]
  kRowMonotone,    // max{0, F[i][k-1]} <= F[i][k]
  kColumnStep,     // F[i-1][k]-1 <= F[i][k] <= F[i-1][k]
  kMixedStep,      // F[i][k-1]+F[i-1][k]-F[i-1][k-1]-1 <= F[i][k] <= F[i][k-1]+F[i-1][k]-F[i-1][k-1]
  kNegativeEntry,
};

struct FViolation {
  FConstraint which;
  std::size_t i = 0;
  std::size_t j = 0;
  std::string describe() const;
};

// Result of validating a raw lower-triangular matrix as an F-matrix.
struct FValidation {
  std::optional<FViolation> violation;
  bool ok() const { return !violation.has_value(); }
};

// Canonical triangular-integer-matrix encoding of a ranked tree shape
// with n leaves: an (n-1) x (n-1) lower-triangular matrix whose entry
// (i, j) counts the branches extant in interval j that have not yet
// bifurcated by the end of interval i.  Instances are valid by
// construction; build them from raw rows via from_rows() or from a
// shape code (see codes.hpp).
class FMatrix {
 public:
  // Validates the four constraint families on raw rows without constructing.
  static FValidation validate(const std::vector<std::vector<int>>& rows);
  static FValidation validate(const IntTriangle& tri);

  // Throws std::invalid_argument with the violation description on bad input.
  static FMatrix from_rows(const std::vector<std::vector<int>>& rows);
  static FMatrix from_triangle(IntTriangle tri);

  // The two extreme shapes: the caterpillar and the maximally balanced tree.
  // Every valid F of the same size satisfies balanced <= F <= unbalanced
  // entrywise.
  static FMatrix unbalanced(std::size_t n_leaves);
  static FMatrix balanced(std::size_t n_leaves);

  std::size_t n_leaves() const { return tri_.dim() + 1; }
  std::size_t dim() const { return tri_.dim(); }
  int operator()(std::size_t i, std::size_t j) const { return tri_(i, j); }
  const IntTriangle& triangle() const { return tri_; }

  std::vector<std::vector<int>> rows() const;

  bool operator==(const FMatrix& other) const { return tri_ == other.tri_; }
  bool operator!=(const FMatrix& other) const { return tri_ != other.tri_; }
  bool operator<(const FMatrix& other) const { return tri_ < other.tri_; }

 private:
  friend class ShapeEnumerator;
  struct Unchecked {};
  FMatrix(IntTriangle tri, Unchecked) : tri_(std::move(tri)) {}

  IntTriangle tri_;
};

}  // namespace rts
