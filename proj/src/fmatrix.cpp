#include "rts/fmatrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace rts {

std::string FViolation::describe() const {
  std::string what;
  switch (which) {
    case FConstraint::kDiagonal: what = "diagonal entry must equal i+1"; break;
    case FConstraint::kSubdiagonal: what = "subdiagonal entry must equal i"; break;
    case FConstraint::kFirstColumn: what = "first-column step constraint violated"; break;
    case FConstraint::kRowMonotone: what = "row must be non-decreasing and non-negative"; break;
    case FConstraint::kColumnStep: what = "column may decrease by at most one per row"; break;
    case FConstraint::kMixedStep: what = "mixed difference constraint violated"; break;
    case FConstraint::kNegativeEntry: what = "entries must be non-negative"; break;
  }
  return what + " at (" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

namespace {

FValidation validate_triangle(const IntTriangle& f) {
  const std::size_t dim = f.dim();
  auto fail = [](FConstraint c, std::size_t i, std::size_t j) {
    return FValidation{FViolation{c, i, j}};
  };
  for (std::size_t i = 1; i <= dim; ++i) {
    for (std::size_t j = 1; j <= i; ++j) {
      if (f(i, j) < 0) return fail(FConstraint::kNegativeEntry, i, j);
    }
  }
  for (std::size_t i = 1; i <= dim; ++i) {
    if (f(i, i) != static_cast<int>(i) + 1) return fail(FConstraint::kDiagonal, i, i);
  }
  for (std::size_t i = 1; i + 1 <= dim; ++i) {
    if (f(i + 1, i) != static_cast<int>(i)) return fail(FConstraint::kSubdiagonal, i + 1, i);
  }
  for (std::size_t i = 3; i <= dim; ++i) {
    const int above = f(i - 1, 1);
    if (f(i, 1) < std::max(0, above - 1) || f(i, 1) > above) {
      return fail(FConstraint::kFirstColumn, i, 1);
    }
  }
  for (std::size_t i = 4; i <= dim; ++i) {
    for (std::size_t k = 2; k + 2 <= i; ++k) {
      const int v = f(i, k);
      const int left = f(i, k - 1);
      const int up = f(i - 1, k);
      const int upleft = f(i - 1, k - 1);
      if (v < std::max(0, left)) return fail(FConstraint::kRowMonotone, i, k);
      if (v < up - 1 || v > up) return fail(FConstraint::kColumnStep, i, k);
      if (v < left + up - upleft - 1 || v > left + up - upleft) {
        return fail(FConstraint::kMixedStep, i, k);
      }
    }
  }
  return FValidation{};
}

IntTriangle triangle_from_rows(const std::vector<std::vector<int>>& rows) {
  IntTriangle tri(rows.size());
  for (std::size_t i = 1; i <= rows.size(); ++i) {
    if (rows[i - 1].size() != i) {
      throw std::invalid_argument("row " + std::to_string(i) + " must hold exactly " +
                                  std::to_string(i) + " entries");
    }
    for (std::size_t j = 1; j <= i; ++j) tri(i, j) = rows[i - 1][j - 1];
  }
  return tri;
}

}  // namespace

FValidation FMatrix::validate(const IntTriangle& tri) { return validate_triangle(tri); }

FValidation FMatrix::validate(const std::vector<std::vector<int>>& rows) {
  return validate_triangle(triangle_from_rows(rows));
}

FMatrix FMatrix::from_triangle(IntTriangle tri) {
  if (tri.dim() < 1) throw std::invalid_argument("F-matrix needs at least one row (n >= 2)");
  FValidation v = validate_triangle(tri);
  if (!v.ok()) throw std::invalid_argument("invalid F-matrix: " + v.violation->describe());
  return FMatrix(std::move(tri), Unchecked{});
}

FMatrix FMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  return from_triangle(triangle_from_rows(rows));
}

FMatrix FMatrix::unbalanced(std::size_t n_leaves) {
  if (n_leaves < 2) throw std::invalid_argument("need n >= 2");
  const std::size_t dim = n_leaves - 1;
  IntTriangle tri(dim);
  for (std::size_t i = 1; i <= dim; ++i) {
    for (std::size_t j = 1; j < i; ++j) tri(i, j) = static_cast<int>(j);
    tri(i, i) = static_cast<int>(i) + 1;
  }
  return FMatrix(std::move(tri), Unchecked{});
}

FMatrix FMatrix::balanced(std::size_t n_leaves) {
  if (n_leaves < 2) throw std::invalid_argument("need n >= 2");
  const std::size_t dim = n_leaves - 1;
  IntTriangle tri(dim);
  for (std::size_t i = 1; i <= dim; ++i) {
    for (std::size_t j = 1; j <= i; ++j) {
      tri(i, j) = std::max(0, 2 * static_cast<int>(j) - static_cast<int>(i) + 1);
    }
  }
  return FMatrix(std::move(tri), Unchecked{});
}

std::vector<std::vector<int>> FMatrix::rows() const {
  std::vector<std::vector<int>> out(dim());
  for (std::size_t i = 1; i <= dim(); ++i) {
    out[i - 1].resize(i);
    for (std::size_t j = 1; j <= i; ++j) out[i - 1][j - 1] = tri_(i, j);
  }
  return out;
}

}  // namespace rts
