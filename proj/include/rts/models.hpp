#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rts/codes.hpp"
#include "rts/triangular.hpp"

namespace rts {

// Probability of a ranked tree shape under the Tajima/Yule coalescent:
// 2^(n-c-1) / (n-1)! with c the number of cherries.
double yule_pmf(const RankedShapeCode& code);

// Blum-Francois beta-splitting probability.  beta = 0 recovers the Yule
// distribution; beta = -1 is the caterpillar point mass (the limiting
// ratio of Beta functions); +infinity is the fully balanced limit.
double blum_francois_pmf(const RankedShapeCode& code, double beta);

// Draws a shape by growing a planar tree: every internal node keeps a
// Beta(beta+1, beta+1) coin drawn at creation, and each new bifurcation
// is routed from the root by those coins until it reaches a leaf.
RankedShapeCode sample_blum_francois(std::size_t n_leaves, double beta, std::mt19937_64& rng);
RankedShapeCode sample_blum_francois(std::size_t n_leaves, double beta, std::uint64_t seed);

// Effective population size N_e(t), strictly positive on [0, inf).
class PopSizeFunction {
 public:
  static PopSizeFunction constant(double n0);
  static PopSizeFunction exponential(double n0, double rate);
  // The 12-periodic piecewise logistic trajectory.
  static PopSizeFunction logistic();
  static PopSizeFunction custom(std::function<double(double)> fn);
  // name in {constant, exponential, logistic}, with the standard
  // parameterizations (N0 = 10000, rate 0.01).
  static PopSizeFunction builtin(const std::string& name);

  double operator()(double t) const;
  bool is_constant() const { return kind_ == Kind::kConstant; }
  double constant_value() const { return n0_; }

 private:
  enum class Kind { kConstant, kExponential, kLogistic, kCustom };
  PopSizeFunction(Kind kind, double n0, double rate, std::function<double(double)> fn)
      : kind_(kind), n0_(n0), rate_(rate), fn_(std::move(fn)) {}

  Kind kind_;
  double n0_ = 0.0;
  double rate_ = 0.0;
  std::function<double(double)> fn_;
};

// Branching event times of the neutral coalescent under N_e(t), oldest
// first (times[0] is the root).  While i lineages remain the next gap
// has hazard C(i,2)/N_e; non-constant trajectories are inverted by
// quadrature of the cumulative hazard.
std::vector<double> sample_coalescent_times(std::size_t n_leaves, const PopSizeFunction& pop,
                                            std::mt19937_64& rng);
std::vector<double> sample_coalescent_times(std::size_t n_leaves, const PopSizeFunction& pop,
                                            std::uint64_t seed);

// Adaptive-Simpson integral of 1/N_e over [a, b]; exposed for testing.
double integrate_inverse_popsize(const PopSizeFunction& pop, double a, double b,
                                 double tol = 1e-10);

// Analytic moments of the F-matrix under the Kingman/Yule coalescent.
// The i-th row's distribution does not depend on n, so the variance and
// covariance take coordinates only.
RealTriangle kingman_mean(std::size_t n_leaves);
double kingman_variance(std::size_t i, std::size_t j);
double kingman_covariance(std::size_t i1, std::size_t j1, std::size_t i2, std::size_t j2);

// Coordinates (i, j) with i >= 3, j <= i-2: everything except the
// structurally deterministic diagonal and subdiagonal.
std::vector<std::pair<std::size_t, std::size_t>> free_coordinates(std::size_t n_leaves);

struct CltResult {
  // Standardized residual in the eigenbasis of the covariance (length
  // equals rank); the squared Mahalanobis norm; retained rank.
  std::vector<double> residual;
  double statistic = 0.0;
  std::size_t rank = 0;
  std::vector<std::pair<std::size_t, std::size_t>> coordinates;
};

// sqrt(m) (Fbar - M) on the free coordinates, whitened by the pseudo
// inverse square root of the reference covariance.  A degenerate
// empirical covariance yields rank 0.
CltResult clt_standardize(const std::vector<FMatrix>& sample, const RealTriangle& mean,
                          const std::function<double(std::size_t, std::size_t, std::size_t,
                                                     std::size_t)>& covariance);
// Reference moments from Kingman analytics.
CltResult clt_standardize_kingman(const std::vector<FMatrix>& sample);
// Reference moments estimated from the sample itself.
CltResult clt_standardize_empirical(const std::vector<FMatrix>& sample);

}  // namespace rts
