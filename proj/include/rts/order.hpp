#pragma once

#include <cstddef>
#include <vector>

#include "rts/fmatrix.hpp"
#include "rts/metrics.hpp"

namespace rts {

enum class Ordering { kBefore, kEqual, kAfter };

// Distance to the reference, negated when the tree sits at least as
// close to the caterpillar pole as to the balanced pole.
double signed_distance(const FMatrix& x, const FMatrix& reference, int p);

// Lexicographic comparison of the column-vectorized lower triangles: a
// positive first non-vanishing difference puts the left tree first, so
// the caterpillar precedes everything and the balanced tree closes the
// order.
Ordering lex_compare(const FMatrix& a, const FMatrix& b);

// Total order: signed distance to the reference first, lexicographic
// order within signed-distance ties.
Ordering total_compare(const FMatrix& a, const FMatrix& b, const FMatrix& reference, int p);

// Shannon entropy (nats) of a pmf; rejects unnormalized input beyond
// 1e-10.
double entropy(const std::vector<double>& pmf);

struct BallSummary {
  double radius = 0.0;
  double level = 0.0;
  double mass = 0.0;                   // probability captured by the ball
  std::vector<std::size_t> members;    // indices into the input support
  std::vector<std::size_t> boundary;   // members at distance == radius
  // Extremes of the boundary under the total order, per sign of the
  // signed distance to the center: up to two shapes on each side.
  std::vector<std::size_t> negative_side;
  std::vector<std::size_t> positive_side;
};

// Smallest ball around the center holding mass >= level; the radius is
// chosen among the achieved distances (the space is discrete).
BallSummary credible_ball(const std::vector<FMatrix>& support, const std::vector<double>& pmf,
                          const FMatrix& center, double level, int p);

// Sorts indices of the support by the total order around the reference.
std::vector<std::size_t> total_order_permutation(const std::vector<FMatrix>& support,
                                                 const FMatrix& reference, int p);

}  // namespace rts
