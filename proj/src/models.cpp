#include "rts/models.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rts {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_beta(double beta) {
  if (std::isnan(beta) || (beta < -1.0 && !std::isinf(beta))) {
    throw std::invalid_argument("beta must lie in [-1, inf]");
  }
  if (std::isinf(beta) && beta < 0) throw std::invalid_argument("beta must lie in [-1, inf]");
}

// Number of internal nodes in the subtree below each internal child of
// every node, derived from the parent string.
struct SplitCounts {
  std::vector<int> left;   // per node label 2..n, at index label
  std::vector<int> right;  // 0 when the slot holds a leaf
};

SplitCounts split_counts(const RankedShapeCode& code) {
  const std::size_t n = code.n_leaves();
  std::vector<std::vector<int>> children(n + 1);
  for (std::size_t m = 3; m <= n; ++m) children[code.parent_of(m)].push_back(static_cast<int>(m));
  std::vector<int> subtree(n + 1, 0);
  for (std::size_t m = n; m >= 2; --m) {
    int acc = 1;
    for (int c : children[m]) acc += subtree[c];
    subtree[m] = acc;
  }
  SplitCounts out;
  out.left.assign(n + 1, 0);
  out.right.assign(n + 1, 0);
  for (std::size_t m = 2; m <= n; ++m) {
    const auto& ch = children[m];
    if (ch.size() >= 1) out.left[m] = subtree[ch[0]];
    if (ch.size() >= 2) out.right[m] = subtree[ch[1]];
  }
  return out;
}

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

}  // namespace

double yule_pmf(const RankedShapeCode& code) {
  const std::size_t n = code.n_leaves();
  const std::size_t c = cherry_count(code);
  double log_p = (static_cast<double>(n) - c - 1) * std::log(2.0) -
                 std::lgamma(static_cast<double>(n));
  return std::exp(log_p);
}

double blum_francois_pmf(const RankedShapeCode& code, double beta) {
  check_beta(beta);
  const std::size_t n = code.n_leaves();
  const std::size_t c = cherry_count(code);
  const SplitCounts counts = split_counts(code);

  if (beta == -1.0) {
    // Limiting ratio: a node with two internal children kills the mass,
    // one internal child contributes 1/2, a cherry contributes 1.
    double log_p = (static_cast<double>(n) - 1 - c) * std::log(2.0);
    for (std::size_t m = 2; m <= n; ++m) {
      const int nl = counts.left[m];
      const int nr = counts.right[m];
      if (nl > 0 && nr > 0) return 0.0;
      if (nl + nr > 0) log_p -= std::log(2.0);
    }
    return std::exp(log_p);
  }

  double log_p = (static_cast<double>(n) - 1 - c) * std::log(2.0);
  if (std::isinf(beta)) {
    for (std::size_t m = 2; m <= n; ++m) {
      log_p -= (counts.left[m] + counts.right[m]) * std::log(2.0);
    }
    return std::exp(log_p);
  }
  const double log_norm = log_beta(beta + 1, beta + 1);
  for (std::size_t m = 2; m <= n; ++m) {
    log_p += log_beta(counts.left[m] + beta + 1, counts.right[m] + beta + 1) - log_norm;
  }
  return std::exp(log_p);
}

namespace {

struct PlanarNode {
  double p = 0.5;
  int left = 0;  // 0 = leaf, otherwise child node label
  int right = 0;
};

double draw_routing_coin(double beta, std::mt19937_64& rng) {
  if (beta == -1.0) {
    return (rng() & 1u) ? 1.0 : 0.0;
  }
  if (std::isinf(beta)) return 0.5;
  std::gamma_distribution<double> gamma(beta + 1.0, 1.0);
  const double x = gamma(rng);
  const double y = gamma(rng);
  if (x + y == 0.0) return 0.5;  // numerically degenerate draw
  return x / (x + y);
}

}  // namespace

RankedShapeCode sample_blum_francois(std::size_t n_leaves, double beta, std::mt19937_64& rng) {
  check_beta(beta);
  if (n_leaves < 2) throw std::invalid_argument("need n >= 2");
  std::vector<PlanarNode> nodes(n_leaves + 1);
  std::vector<int> code(n_leaves - 1);
  code[0] = 1;
  nodes[2].p = draw_routing_coin(beta, rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t k = 2; k <= n_leaves - 1; ++k) {
    int cur = 2;
    for (;;) {
      const bool go_left = unif(rng) < nodes[cur].p;
      int& slot = go_left ? nodes[cur].left : nodes[cur].right;
      if (slot == 0) {
        slot = static_cast<int>(k) + 1;
        code[k - 1] = cur;
        nodes[k + 1].p = draw_routing_coin(beta, rng);
        break;
      }
      cur = slot;
    }
  }
  return RankedShapeCode::from_entries(std::move(code));
}

RankedShapeCode sample_blum_francois(std::size_t n_leaves, double beta, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_blum_francois(n_leaves, beta, rng);
}

PopSizeFunction PopSizeFunction::constant(double n0) {
  if (!(n0 > 0)) throw std::invalid_argument("population size must be positive");
  return PopSizeFunction(Kind::kConstant, n0, 0.0, nullptr);
}

PopSizeFunction PopSizeFunction::exponential(double n0, double rate) {
  if (!(n0 > 0)) throw std::invalid_argument("population size must be positive");
  return PopSizeFunction(Kind::kExponential, n0, rate, nullptr);
}

PopSizeFunction PopSizeFunction::logistic() {
  return PopSizeFunction(Kind::kLogistic, 0.0, 0.0, nullptr);
}

PopSizeFunction PopSizeFunction::custom(std::function<double(double)> fn) {
  if (!fn) throw std::invalid_argument("need a population function");
  return PopSizeFunction(Kind::kCustom, 0.0, 0.0, std::move(fn));
}

PopSizeFunction PopSizeFunction::builtin(const std::string& name) {
  if (name == "constant") return constant(10000.0);
  if (name == "exponential") return exponential(10000.0, 0.01);
  if (name == "logistic") return logistic();
  throw std::invalid_argument("unknown population trajectory: " + name);
}

double PopSizeFunction::operator()(double t) const {
  double value = 0.0;
  switch (kind_) {
    case Kind::kConstant: value = n0_; break;
    case Kind::kExponential: value = n0_ * std::exp(-rate_ * t); break;
    case Kind::kLogistic: {
      const double tau = std::fmod(t, 12.0);
      value = (tau <= 6.0) ? 1000.0 + 9000.0 / (1.0 + std::exp(6.0 - 2.0 * tau))
                           : 1000.0 + 9000.0 / (1.0 + std::exp(-18.0 + 2.0 * tau));
      break;
    }
    case Kind::kCustom: value = fn_(t); break;
  }
  if (!(value > 0) || !std::isfinite(value)) {
    throw std::domain_error("population size must be positive and finite");
  }
  return value;
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_inverse_popsize(const PopSizeFunction& pop, double a, double b, double tol) {
  if (b <= a) return 0.0;
  auto f = [&pop](double t) { return 1.0 / pop(t); };
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

namespace {

// Smallest g with cumulative hazard C(i,2) * int_{u}^{u+g} 1/N_e = E.
double invert_hazard(const PopSizeFunction& pop, double u, double target, double tol) {
  double hi = std::max(target * pop(u), 1e-12);
  while (integrate_inverse_popsize(pop, u, u + hi, tol) < target) {
    hi *= 2.0;
    if (!std::isfinite(hi)) throw std::runtime_error("hazard never reaches target");
  }
  double lo = 0.0;
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-13 * std::max(1.0, hi); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (integrate_inverse_popsize(pop, u, u + mid, tol) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> sample_coalescent_times(std::size_t n_leaves, const PopSizeFunction& pop,
                                            std::mt19937_64& rng) {
  if (n_leaves < 2) throw std::invalid_argument("need n >= 2");
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> times(n_leaves - 1, 0.0);
  double cur = 0.0;
  for (std::size_t i = n_leaves; i >= 2; --i) {
    const double pairs = 0.5 * static_cast<double>(i) * (static_cast<double>(i) - 1);
    const double target = exp1(rng) / pairs;
    const double gap =
        pop.is_constant() ? target * pop.constant_value() : invert_hazard(pop, cur, target, 1e-10);
    cur += gap;
    times[i - 2] = cur;
  }
  return times;
}

std::vector<double> sample_coalescent_times(std::size_t n_leaves, const PopSizeFunction& pop,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_coalescent_times(n_leaves, pop, rng);
}

RealTriangle kingman_mean(std::size_t n_leaves) {
  if (n_leaves < 2) throw std::invalid_argument("need n >= 2");
  RealTriangle m(n_leaves - 1);
  for (std::size_t i = 1; i < n_leaves; ++i) {
    for (std::size_t j = 1; j <= i; ++j) {
      m(i, j) = static_cast<double>(j) * (j + 1) / static_cast<double>(i);
    }
  }
  return m;
}

namespace {

bool deterministic_coordinate(std::size_t i, std::size_t j) {
  if (j > i) throw std::invalid_argument("need j <= i in the lower triangle");
  if (i < 1 || j < 1) throw std::invalid_argument("coordinates are 1-based");
  return j == i || j + 1 == i;
}

}  // namespace

double kingman_variance(std::size_t i, std::size_t j) {
  if (deterministic_coordinate(i, j)) return 0.0;
  const double di = static_cast<double>(i);
  const double dj = static_cast<double>(j);
  return dj * dj * (dj + 1) * (dj + 1) / (di * di * (di - 1)) +
         dj * (dj + 1) * (di - 2 * dj - 1) / (di * (di - 1));
}

double kingman_covariance(std::size_t i1, std::size_t j1, std::size_t i2, std::size_t j2) {
  if (deterministic_coordinate(i1, j1) || deterministic_coordinate(i2, j2)) return 0.0;
  if (i1 == i2 && j1 == j2) return kingman_variance(i1, j1);
  if (i1 < i2 || (i1 == i2 && j1 > j2)) {
    std::swap(i1, i2);
    std::swap(j1, j2);
  }
  const double a = static_cast<double>(i1);
  const double b = static_cast<double>(j1);
  const double c = static_cast<double>(i2);
  const double d = static_cast<double>(j2);
  if (i1 == i2) {
    // same row, j1 < j2
    return b * (b + 1) * ((d + 1) * (d + 2) + (a + 1) * (a - 2 * d - 2)) / (a * a * (a - 1));
  }
  if (j1 == j2) {
    return d * (d + 1) * (d - c) * (d - c + 1) / (a * c * (c - 1));
  }
  if (j1 > j2) {
    return d * (d + 1) * ((b + 1) * (b + 2) + (a + 1) * (a - 2 * b - 2)) / (a * a * (a - 1)) +
           (a - c) * b * d * (d + 1) / (a * c) * ((b - 1) / (c - 1) - (b + 1) / (c + 1));
  }
  return b * (b + 1) * ((d + 1) * (d + 2) + (a + 1) * (a - 2 * d - 2)) / (a * a * (a - 1)) +
         (a - c) * b * (b + 1) * d / (a * c) * ((d - 1) / (c - 1) - (d + 1) / (c + 1));
}

std::vector<std::pair<std::size_t, std::size_t>> free_coordinates(std::size_t n_leaves) {
  std::vector<std::pair<std::size_t, std::size_t>> coords;
  for (std::size_t i = 3; i + 1 <= n_leaves; ++i) {
    for (std::size_t j = 1; j + 2 <= i; ++j) coords.emplace_back(i, j);
  }
  return coords;
}

CltResult clt_standardize(const std::vector<FMatrix>& sample, const RealTriangle& mean,
                          const std::function<double(std::size_t, std::size_t, std::size_t,
                                                     std::size_t)>& covariance) {
  if (sample.size() < 2) throw std::invalid_argument("need a sample of size >= 2");
  const std::size_t n = sample.front().n_leaves();
  for (const auto& f : sample) {
    if (f.n_leaves() != n) throw std::invalid_argument("sample must share one leaf count");
  }
  CltResult out;
  out.coordinates = free_coordinates(n);
  const std::size_t k = out.coordinates.size();
  const double m = static_cast<double>(sample.size());

  Eigen::VectorXd r(k);
  for (std::size_t c = 0; c < k; ++c) {
    const auto [i, j] = out.coordinates[c];
    double avg = 0.0;
    for (const auto& f : sample) avg += f(i, j);
    avg /= m;
    r(c) = std::sqrt(m) * (avg - mean(i, j));
  }

  Eigen::MatrixXd sigma(k, k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      const auto [i1, j1] = out.coordinates[a];
      const auto [i2, j2] = out.coordinates[b];
      const double v = covariance(i1, j1, i2, j2);
      sigma(a, b) = v;
      sigma(b, a) = v;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma);
  const Eigen::VectorXd evals = solver.eigenvalues();
  const double lambda_max = evals.size() ? evals.maxCoeff() : 0.0;
  const double threshold = std::max(1e-12 * std::max(lambda_max, 0.0), 1e-14);
  for (Eigen::Index c = evals.size() - 1; c >= 0; --c) {
    if (evals(c) <= threshold) break;
    const double z = solver.eigenvectors().col(c).dot(r) / std::sqrt(evals(c));
    out.residual.push_back(z);
    out.statistic += z * z;
    ++out.rank;
  }
  return out;
}

CltResult clt_standardize_kingman(const std::vector<FMatrix>& sample) {
  const std::size_t n = sample.empty() ? 2 : sample.front().n_leaves();
  return clt_standardize(sample, kingman_mean(n), kingman_covariance);
}

CltResult clt_standardize_empirical(const std::vector<FMatrix>& sample) {
  if (sample.size() < 2) throw std::invalid_argument("need a sample of size >= 2");
  const std::size_t n = sample.front().n_leaves();
  RealTriangle mean(n - 1);
  for (const auto& f : sample) {
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = 1; j <= i; ++j) mean(i, j) += f(i, j);
    }
  }
  for (double& v : mean.flat()) v /= static_cast<double>(sample.size());
  auto cov = [&sample, &mean](std::size_t i1, std::size_t j1, std::size_t i2, std::size_t j2) {
    double acc = 0.0;
    for (const auto& f : sample) {
      acc += (f(i1, j1) - mean(i1, j1)) * (f(i2, j2) - mean(i2, j2));
    }
    return acc / (static_cast<double>(sample.size()) - 1);
  };
  return clt_standardize(sample, mean, cov);
}

}  // namespace rts
