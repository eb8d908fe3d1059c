#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rts/fmatrix.hpp"
#include "rts/genealogy.hpp"

namespace rts {

// L1 and squared-L2 shape distances as exact integers.
long long d1_int(const FMatrix& a, const FMatrix& b);
long long d2_squared_int(const FMatrix& a, const FMatrix& b);

// d_p on ranked tree shapes: p = 1 sums |dF|, p = 2 is the Euclidean
// norm of dF over the lower triangle.
double d_shape(const FMatrix& a, const FMatrix& b, int p);

// d_p on ranked genealogies: the same norms applied to the Hadamard
// products F o W of each tree.
double d_genealogy(const RankedGenealogy& a, const RankedGenealogy& b, int p);

// All trees extended onto a shared event grid: coalescent events occupy
// identical rows everywhere, and each inter-coalescent stretch is padded
// to its maximal sampling-event count with zero-sample artificial events.
struct AlignedSet {
  std::vector<ExtendedTree> trees;
};

AlignedSet align_heterochronous(const std::vector<HeteroGenealogy>& trees,
                                double tol = kEventTimeTolerance);

double d_extended(const ExtendedTree& a, const ExtendedTree& b, int p);

// Aligns the pair and measures the extended matrices.
double d_hetero(const HeteroGenealogy& a, const HeteroGenealogy& b, int p,
                double tol = kEventTimeTolerance);

struct DistanceMatrix {
  std::size_t size = 0;
  std::vector<double> values;  // row-major size x size

  double operator()(std::size_t i, std::size_t j) const { return values[i * size + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * size + j]; }
};

DistanceMatrix pairwise_distance_matrix(const std::vector<FMatrix>& sample, int p,
                                        bool parallel = false);
DistanceMatrix pairwise_distance_matrix(const std::vector<RankedGenealogy>& sample, int p,
                                        bool parallel = false);
// Heterochronous samples are aligned jointly once, then measured.
DistanceMatrix pairwise_distance_matrix(const std::vector<HeteroGenealogy>& sample, int p,
                                        bool parallel = false,
                                        double tol = kEventTimeTolerance);

}  // namespace rts
