#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rts/enumerate.hpp"
#include "rts/genealogy.hpp"
#include "rts/metrics.hpp"

namespace rts {

// Entrywise mean of a sample of F-matrices (or the expectation under a
// pmf over enumerated shapes).  The d2 mean search depends on its input
// only through this matrix.
RealTriangle target_matrix(const std::vector<FMatrix>& sample);
RealTriangle target_matrix(const std::vector<FMatrix>& shapes, const std::vector<double>& pmf);

struct ExactMeanResult {
  // Full argmin set in canonical enumeration order.
  std::vector<FMatrix> argmin;
  // Minimal value of ||F - M||^2 (d2) or of the weighted sum of squared
  // d1 distances.
  double energy = 0.0;
};

// Exhaustive scan of all shapes with n leaves.  The d2 objective is the
// quadratic reduction through the target matrix; d1 has no such
// reduction and is scanned against the weighted sample directly.
ExactMeanResult frechet_mean_exact_d2(const RealTriangle& target, std::size_t n_leaves,
                                      std::size_t cap = kDefaultEnumerationCap);
ExactMeanResult frechet_mean_exact_d1(const std::vector<FMatrix>& sample,
                                      const std::vector<double>& weights,
                                      std::size_t cap = kDefaultEnumerationCap);

// --- Markov chains on shape codes (proposal kernels) ---

// Values admissible at a position: those in [2, position] not already
// used twice elsewhere in the string.
std::vector<int> iso_allowable_values(const RankedShapeCode& code, std::size_t position);

// Resamples one mutable position uniformly over its admissible values;
// symmetric, and a self-move whenever the old value is redrawn.
RankedShapeCode propose_iso(const RankedShapeCode& code, std::mt19937_64& rng);

// Swaps two entries of t (sigma is fixed); invalid swaps are rejected
// and return the input unchanged.
HeteroShapeCode propose_hetero(const HeteroShapeCode& code, std::mt19937_64& rng);

// --- Simulated annealing ---

struct CoolingSchedule {
  enum class Kind { kExponential, kLinear, kLogarithmic };
  Kind kind = Kind::kExponential;
  double r0 = 1000.0;
  double alpha = 0.9995;

  double temperature(std::size_t k) const;
  static CoolingSchedule exponential(double r0, double alpha);
  static CoolingSchedule linear(double r0, double alpha);
  static CoolingSchedule logarithmic(double r0, double alpha);
  // "exp:R0:alpha", "lin:R0:alpha", "log:R0:alpha"
  static CoolingSchedule parse(const std::string& text);
};

struct SAConfig {
  CoolingSchedule schedule;
  std::size_t iterations = 50000;
  std::size_t chains = 4;
  std::uint64_t seed = 0;
  std::size_t trace_every = 1;  // 0 disables the trace
};

struct SATracePoint {
  std::size_t iteration;
  double temperature;
  double energy;   // energy of the current state after the step
  bool accepted;
};

template <typename State>
struct SAResult {
  State best;
  double best_energy = 0.0;
  std::vector<SATracePoint> trace;
  std::size_t accepted_moves = 0;
  std::uint64_t seed = 0;
};

// One annealing chain over an arbitrary state space.
template <typename State>
SAResult<State> anneal(State initial, const std::function<double(const State&)>& energy,
                       const std::function<State(const State&, std::mt19937_64&)>& propose,
                       const CoolingSchedule& schedule, std::size_t iterations, std::uint64_t seed,
                       std::size_t trace_every = 1);

// Deterministic per-chain seed derivation (splitmix64 of seed, index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Best of config.chains independent chains (run concurrently), merged
// by (energy, chain index).
SAResult<RankedShapeCode> frechet_mean_sa_d2(const RealTriangle& target, std::size_t n_leaves,
                                             const SAConfig& config,
                                             const RankedShapeCode* initial = nullptr);
SAResult<RankedShapeCode> frechet_mean_sa_d1(const std::vector<FMatrix>& sample,
                                             const std::vector<double>& weights,
                                             const SAConfig& config,
                                             const RankedShapeCode* initial = nullptr);

// Heterochronous topology search conditioned on a fixed sequence of
// sampling and coalescent events: the grid layout (entry -> event map)
// stays fixed while t varies.
struct HeteroGridTemplate {
  std::vector<std::size_t> entry_event;
  std::size_t n_events = 0;
};

SAResult<HeteroShapeCode> frechet_mean_sa_hetero(const RealTriangle& target,
                                                 const HeteroShapeCode& initial,
                                                 const HeteroGridTemplate& grid,
                                                 const SAConfig& config);

// --- Genealogy means, variance, medoid ---

enum class TimeSummary { kMean, kMedian };

// Separated optimization: branching times are summarized entrywise and
// the topology is the d2 Frechet mean of the shape marginal (exact scan
// up to the cap, annealing beyond it).
RankedGenealogy frechet_mean_genealogy(const std::vector<RankedGenealogy>& sample,
                                       TimeSummary time_summary, const SAConfig& config,
                                       std::size_t exact_cap = kDefaultEnumerationCap);

// Heterochronous version: the sample is aligned jointly; the search
// keeps the modal event pattern and conditions on it.  Coalescent times
// are summarized across the whole sample, sampling times across the
// trees sharing the modal pattern.
HeteroGenealogy frechet_mean_genealogy(const std::vector<HeteroGenealogy>& sample,
                                       TimeSummary time_summary, const SAConfig& config,
                                       double tol = kEventTimeTolerance);

double frechet_variance(const std::vector<FMatrix>& sample, const FMatrix& mean, int p);
double frechet_variance(const std::vector<FMatrix>& shapes, const std::vector<double>& pmf,
                        const FMatrix& mean, int p);
double frechet_variance(const std::vector<RankedGenealogy>& sample, const RankedGenealogy& mean,
                        int p);
double frechet_variance(const std::vector<HeteroGenealogy>& sample, const HeteroGenealogy& mean,
                        int p, double tol = kEventTimeTolerance);

// Index of the in-sample minimizer of the summed squared distances;
// ties break toward the lowest index.
std::size_t medoid_index(const std::vector<FMatrix>& sample, int p);
std::size_t medoid_index(const std::vector<RankedGenealogy>& sample, int p);
std::size_t medoid_index(const std::vector<HeteroGenealogy>& sample, int p,
                         double tol = kEventTimeTolerance);

}  // namespace rts
