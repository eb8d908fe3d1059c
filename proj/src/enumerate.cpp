#include "rts/enumerate.hpp"

#include <algorithm>
#include <string>

namespace rts {

namespace {

// Fills rows i..dim of the triangle depth-first and invokes the sink on
// every completed matrix.  Rows 1 and 2 are fixed; within row i the
// entries j = 1..i-2 are free subject to the step constraints against
// row i-1 and the already-chosen left neighbour, and the subdiagonal
// and diagonal are forced.
bool fill_rows(IntTriangle& f, std::size_t i, std::size_t dim,
               const std::function<bool(const IntTriangle&)>& sink) {
  if (i > dim) return sink(f);
  f(i, i) = static_cast<int>(i) + 1;
  if (i >= 2) f(i, i - 1) = static_cast<int>(i) - 1;

  std::function<bool(std::size_t)> fill_entry = [&](std::size_t j) -> bool {
    if (j + 2 > i) return fill_rows(f, i + 1, dim, sink);
    int lo, hi;
    if (j == 1) {
      const int above = f(i - 1, 1);
      lo = std::max(0, above - 1);
      hi = above;
    } else {
      const int left = f(i, j - 1);
      const int up = f(i - 1, j);
      const int upleft = f(i - 1, j - 1);
      lo = std::max({0, left, up - 1, left + up - upleft - 1});
      hi = std::min(up, left + up - upleft);
    }
    for (int v = lo; v <= hi; ++v) {
      f(i, j) = v;
      if (!fill_entry(j + 1)) return false;
    }
    return true;
  };
  return fill_entry(1);
}

}  // namespace

void ShapeEnumerator::for_each(std::size_t n_leaves,
                               const std::function<bool(const FMatrix&)>& visit) const {
  if (n_leaves < 2) throw std::invalid_argument("need n >= 2");
  if (n_leaves > cap_) {
    throw CapacityError("enumeration of n = " + std::to_string(n_leaves) +
                        " exceeds the cap of " + std::to_string(cap_) +
                        "; raise the cap explicitly or use simulated annealing");
  }
  const std::size_t dim = n_leaves - 1;
  IntTriangle f(dim);
  f(1, 1) = 2;
  fill_rows(f, 2, dim, [&](const IntTriangle& done) {
    return visit(FMatrix(done, FMatrix::Unchecked{}));
  });
}

std::vector<FMatrix> ShapeEnumerator::all_fmatrices(std::size_t n_leaves) const {
  std::vector<FMatrix> out;
  for_each(n_leaves, [&](const FMatrix& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

std::vector<RankedShapeCode> ShapeEnumerator::all_codes(std::size_t n_leaves) const {
  std::vector<RankedShapeCode> out;
  for_each(n_leaves, [&](const FMatrix& f) {
    out.push_back(fmatrix_to_code(f));
    return true;
  });
  return out;
}

}  // namespace rts
