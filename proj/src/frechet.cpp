#include "rts/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <stdexcept>

namespace rts {

namespace {

constexpr double kTieTolerance = 1e-9;

void check_p(int p) {
  if (p != 1 && p != 2) throw std::invalid_argument("metric selector must be 1 or 2");
}

double sq_norm_to_target(const FMatrix& f, const RealTriangle& target) {
  double acc = 0.0;
  const auto& fv = f.triangle().flat();
  const auto& tv = target.flat();
  for (std::size_t k = 0; k < fv.size(); ++k) {
    const double d = fv[k] - tv[k];
    acc += d * d;
  }
  return acc;
}

}  // namespace

RealTriangle target_matrix(const std::vector<FMatrix>& sample) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  std::vector<double> pmf(sample.size(), 1.0 / static_cast<double>(sample.size()));
  return target_matrix(sample, pmf);
}

RealTriangle target_matrix(const std::vector<FMatrix>& shapes, const std::vector<double>& pmf) {
  if (shapes.empty()) throw std::invalid_argument("empty sample");
  if (shapes.size() != pmf.size()) throw std::invalid_argument("one weight per shape required");
  RealTriangle m(shapes.front().dim());
  for (std::size_t s = 0; s < shapes.size(); ++s) {
    if (shapes[s].dim() != m.dim()) throw std::invalid_argument("mixed leaf counts in sample");
    const auto& fv = shapes[s].triangle().flat();
    for (std::size_t k = 0; k < fv.size(); ++k) m.flat()[k] += pmf[s] * fv[k];
  }
  return m;
}

ExactMeanResult frechet_mean_exact_d2(const RealTriangle& target, std::size_t n_leaves,
                                      std::size_t cap) {
  if (target.dim() != n_leaves - 1) throw std::invalid_argument("target has the wrong size");
  ExactMeanResult out;
  double best = std::numeric_limits<double>::infinity();
  ShapeEnumerator enumerator(cap);
  enumerator.for_each(n_leaves, [&](const FMatrix& f) {
    const double e = sq_norm_to_target(f, target);
    if (e < best - kTieTolerance) {
      best = e;
      out.argmin.clear();
      out.argmin.push_back(f);
    } else if (e <= best + kTieTolerance) {
      best = std::min(best, e);
      out.argmin.push_back(f);
    }
    return true;
  });
  out.energy = best;
  return out;
}

ExactMeanResult frechet_mean_exact_d1(const std::vector<FMatrix>& sample,
                                      const std::vector<double>& weights, std::size_t cap) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  if (sample.size() != weights.size()) throw std::invalid_argument("one weight per tree required");
  const std::size_t n = sample.front().n_leaves();
  ExactMeanResult out;
  double best = std::numeric_limits<double>::infinity();
  ShapeEnumerator enumerator(cap);
  enumerator.for_each(n, [&](const FMatrix& f) {
    double e = 0.0;
    for (std::size_t s = 0; s < sample.size(); ++s) {
      const double d = static_cast<double>(d1_int(f, sample[s]));
      e += weights[s] * d * d;
    }
    if (e < best - kTieTolerance) {
      best = e;
      out.argmin.clear();
      out.argmin.push_back(f);
    } else if (e <= best + kTieTolerance) {
      best = std::min(best, e);
      out.argmin.push_back(f);
    }
    return true;
  });
  out.energy = best;
  return out;
}

std::vector<int> iso_allowable_values(const RankedShapeCode& code, std::size_t position) {
  const auto& t = code.entries();
  if (position < 2 || position > t.size()) {
    throw std::invalid_argument("mutable positions are 2..n-1");
  }
  std::vector<int> uses(t.size() + 2, 0);
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (i + 1 != position) ++uses[t[i]];
  }
  std::vector<int> allowed;
  for (int v = 2; v <= static_cast<int>(position); ++v) {
    if (uses[v] < 2) allowed.push_back(v);
  }
  return allowed;
}

RankedShapeCode propose_iso(const RankedShapeCode& code, std::mt19937_64& rng) {
  const std::size_t len = code.entries().size();
  if (len < 2) return code;  // n = 2: single-state space
  std::uniform_int_distribution<std::size_t> pick_pos(2, len);
  const std::size_t position = pick_pos(rng);
  const std::vector<int> allowed = iso_allowable_values(code, position);
  std::uniform_int_distribution<std::size_t> pick_val(0, allowed.size() - 1);
  std::vector<int> t = code.entries();
  t[position - 1] = allowed[pick_val(rng)];
  return RankedShapeCode::from_entries(std::move(t));
}

HeteroShapeCode propose_hetero(const HeteroShapeCode& code, std::mt19937_64& rng) {
  const std::size_t len = code.length();
  std::uniform_int_distribution<std::size_t> pick(2, len);
  std::size_t i = pick(rng);
  std::size_t j = pick(rng);
  while (j == i) j = pick(rng);
  std::vector<int> t = code.t();
  std::swap(t[i - 1], t[j - 1]);
  // Only the parent-exists bound can break under a swap: check the two
  // touched positions against the coalescent-count prefix.
  const auto& sigma = code.sigma();
  std::size_t prefix = 1;  // ones among positions 1..k-1, starting at k = 2
  for (std::size_t k = 2; k <= std::max(i, j); ++k) {
    if ((k == i || k == j) && t[k - 1] > static_cast<int>(prefix) + 1) {
      return code;  // reject
    }
    prefix += sigma[k - 1];
  }
  return hetero_replace_t_unchecked(code, std::move(t));
}

double CoolingSchedule::temperature(std::size_t k) const {
  switch (kind) {
    case Kind::kExponential: return r0 * std::pow(alpha, static_cast<double>(k));
    case Kind::kLinear: return r0 / (1.0 + alpha * static_cast<double>(k));
    case Kind::kLogarithmic: return r0 / (1.0 + alpha * std::log1p(static_cast<double>(k)));
  }
  return r0;
}

CoolingSchedule CoolingSchedule::exponential(double r0, double alpha) {
  if (!(r0 > 0) || !(alpha > 0) || alpha >= 1.0) {
    throw std::invalid_argument("need R0 > 0 and alpha in (0, 1)");
  }
  return CoolingSchedule{Kind::kExponential, r0, alpha};
}

CoolingSchedule CoolingSchedule::linear(double r0, double alpha) {
  if (!(r0 > 0) || !(alpha > 0)) throw std::invalid_argument("need R0 > 0 and alpha > 0");
  return CoolingSchedule{Kind::kLinear, r0, alpha};
}

CoolingSchedule CoolingSchedule::logarithmic(double r0, double alpha) {
  if (!(r0 > 0) || !(alpha > 0)) throw std::invalid_argument("need R0 > 0 and alpha > 0");
  return CoolingSchedule{Kind::kLogarithmic, r0, alpha};
}

CoolingSchedule CoolingSchedule::parse(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw std::invalid_argument("schedule format is kind:R0:alpha");
  }
  const std::string kind = text.substr(0, c1);
  const double r0 = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  const double alpha = std::stod(text.substr(c2 + 1));
  if (kind == "exp") return exponential(r0, alpha);
  if (kind == "lin") return linear(r0, alpha);
  if (kind == "log") return logarithmic(r0, alpha);
  throw std::invalid_argument("unknown schedule kind: " + kind);
}

template <typename State>
SAResult<State> anneal(State initial, const std::function<double(const State&)>& energy,
                       const std::function<State(const State&, std::mt19937_64&)>& propose,
                       const CoolingSchedule& schedule, std::size_t iterations, std::uint64_t seed,
                       std::size_t trace_every) {
  if (iterations == 0) throw std::invalid_argument("need at least one iteration");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  SAResult<State> out;
  out.seed = seed;
  State current = std::move(initial);
  double current_energy = energy(current);
  out.best = current;
  out.best_energy = current_energy;

  for (std::size_t k = 0; k < iterations; ++k) {
    const double r = schedule.temperature(k);
    if (!(r > 0)) throw std::invalid_argument("temperature must stay positive");
    State candidate = propose(current, rng);
    const double candidate_energy = energy(candidate);
    const double delta = candidate_energy - current_energy;
    bool accepted = false;
    if (delta <= 0.0 || unif(rng) < std::exp(-delta / r)) {
      current = std::move(candidate);
      current_energy = candidate_energy;
      accepted = true;
      ++out.accepted_moves;
    }
    if (current_energy < out.best_energy) {
      out.best = current;
      out.best_energy = current_energy;
    }
    if (trace_every > 0 && k % trace_every == 0) {
      out.trace.push_back(SATracePoint{k, r, current_energy, accepted});
    }
  }
  return out;
}

template SAResult<RankedShapeCode> anneal<RankedShapeCode>(
    RankedShapeCode, const std::function<double(const RankedShapeCode&)>&,
    const std::function<RankedShapeCode(const RankedShapeCode&, std::mt19937_64&)>&,
    const CoolingSchedule&, std::size_t, std::uint64_t, std::size_t);
template SAResult<HeteroShapeCode> anneal<HeteroShapeCode>(
    HeteroShapeCode, const std::function<double(const HeteroShapeCode&)>&,
    const std::function<HeteroShapeCode(const HeteroShapeCode&, std::mt19937_64&)>&,
    const CoolingSchedule&, std::size_t, std::uint64_t, std::size_t);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 step on seed + golden-ratio stride per chain
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

template <typename State>
SAResult<State> best_of_chains(const State& initial,
                               const std::function<double(const State&)>& energy,
                               const std::function<State(const State&, std::mt19937_64&)>& propose,
                               const SAConfig& config) {
  const std::size_t chains = std::max<std::size_t>(1, config.chains);
  std::vector<std::future<SAResult<State>>> futures;
  futures.reserve(chains);
  for (std::size_t c = 0; c < chains; ++c) {
    const std::uint64_t chain_seed = derive_seed(config.seed, c);
    futures.push_back(std::async(std::launch::async, [&, chain_seed]() {
      return anneal<State>(initial, energy, propose, config.schedule, config.iterations,
                           chain_seed, config.trace_every);
    }));
  }
  std::vector<SAResult<State>> results;
  results.reserve(chains);
  for (auto& f : futures) results.push_back(f.get());
  std::size_t winner = 0;
  for (std::size_t c = 1; c < chains; ++c) {
    if (results[c].best_energy < results[winner].best_energy) winner = c;
  }
  return std::move(results[winner]);
}

}  // namespace

SAResult<RankedShapeCode> frechet_mean_sa_d2(const RealTriangle& target, std::size_t n_leaves,
                                             const SAConfig& config,
                                             const RankedShapeCode* initial) {
  if (target.dim() != n_leaves - 1) throw std::invalid_argument("target has the wrong size");
  const RankedShapeCode start = initial ? *initial : RankedShapeCode::caterpillar(n_leaves);
  std::function<double(const RankedShapeCode&)> energy = [&target](const RankedShapeCode& code) {
    return sq_norm_to_target(code_to_fmatrix(code), target);
  };
  std::function<RankedShapeCode(const RankedShapeCode&, std::mt19937_64&)> propose =
      [](const RankedShapeCode& code, std::mt19937_64& rng) { return propose_iso(code, rng); };
  return best_of_chains(start, energy, propose, config);
}

SAResult<RankedShapeCode> frechet_mean_sa_d1(const std::vector<FMatrix>& sample,
                                             const std::vector<double>& weights,
                                             const SAConfig& config,
                                             const RankedShapeCode* initial) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  if (sample.size() != weights.size()) throw std::invalid_argument("one weight per tree required");
  const std::size_t n = sample.front().n_leaves();
  const RankedShapeCode start = initial ? *initial : RankedShapeCode::caterpillar(n);
  std::function<double(const RankedShapeCode&)> energy = [&](const RankedShapeCode& code) {
    const FMatrix f = code_to_fmatrix(code);
    double acc = 0.0;
    for (std::size_t s = 0; s < sample.size(); ++s) {
      const double d = static_cast<double>(d1_int(f, sample[s]));
      acc += weights[s] * d * d;
    }
    return acc;
  };
  std::function<RankedShapeCode(const RankedShapeCode&, std::mt19937_64&)> propose =
      [](const RankedShapeCode& code, std::mt19937_64& rng) { return propose_iso(code, rng); };
  return best_of_chains(start, energy, propose, config);
}

SAResult<HeteroShapeCode> frechet_mean_sa_hetero(const RealTriangle& target,
                                                 const HeteroShapeCode& initial,
                                                 const HeteroGridTemplate& grid,
                                                 const SAConfig& config) {
  if (grid.entry_event.size() != initial.length()) {
    throw std::invalid_argument("grid template does not match the code length");
  }
  std::function<double(const HeteroShapeCode&)> energy = [&](const HeteroShapeCode& code) {
    const IntTriangle f = extended_f_for_code(code, grid.entry_event, grid.n_events);
    double acc = 0.0;
    const auto& fv = f.flat();
    const auto& tv = target.flat();
    for (std::size_t k = 0; k < fv.size(); ++k) {
      const double d = fv[k] - tv[k];
      acc += d * d;
    }
    return acc;
  };
  std::function<HeteroShapeCode(const HeteroShapeCode&, std::mt19937_64&)> propose =
      [](const HeteroShapeCode& code, std::mt19937_64& rng) { return propose_hetero(code, rng); };
  return best_of_chains(initial, energy, propose, config);
}

namespace {

std::vector<double> summarize_columns(const std::vector<std::vector<double>>& rows,
                                      TimeSummary summary) {
  const std::size_t cols = rows.front().size();
  std::vector<double> out(cols, 0.0);
  if (summary == TimeSummary::kMean) {
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < cols; ++c) out[c] += row[c];
    }
    for (double& v : out) v /= static_cast<double>(rows.size());
    return out;
  }
  std::vector<double> column(rows.size());
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows.size(); ++r) column[r] = rows[r][c];
    std::sort(column.begin(), column.end());
    const std::size_t m = column.size();
    out[c] = (m % 2 == 1) ? column[m / 2] : 0.5 * (column[m / 2 - 1] + column[m / 2]);
  }
  return out;
}

}  // namespace

RankedGenealogy frechet_mean_genealogy(const std::vector<RankedGenealogy>& sample,
                                       TimeSummary time_summary, const SAConfig& config,
                                       std::size_t exact_cap) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  const std::size_t n = sample.front().n_leaves();
  std::vector<FMatrix> shapes;
  std::vector<std::vector<double>> times;
  shapes.reserve(sample.size());
  times.reserve(sample.size());
  for (const auto& g : sample) {
    if (g.n_leaves() != n) throw std::invalid_argument("mixed leaf counts in sample");
    shapes.push_back(code_to_fmatrix(g.shape));
    times.push_back(g.times);
  }
  const RealTriangle target = target_matrix(shapes);
  RankedShapeCode topology = RankedShapeCode::caterpillar(n);
  if (n <= exact_cap) {
    topology = fmatrix_to_code(frechet_mean_exact_d2(target, n, exact_cap).argmin.front());
  } else {
    topology = frechet_mean_sa_d2(target, n, config).best;
  }
  return RankedGenealogy::make(topology, summarize_columns(times, time_summary));
}

HeteroGenealogy frechet_mean_genealogy(const std::vector<HeteroGenealogy>& sample,
                                       TimeSummary time_summary, const SAConfig& config,
                                       double tol) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  AlignedSet aligned = align_heterochronous(sample, tol);

  // Modal event pattern: the most frequent sequence of kinds and
  // per-event sample counts (ties toward the earliest occurrence).
  auto pattern_of = [](const HeteroGenealogy& g, double tolerance) {
    std::vector<int> pat;
    for (const Event& e : build_event_grid(g, tolerance).events) {
      pat.push_back(e.kind == EventKind::kCoalescent ? -1 : e.new_samples);
    }
    return pat;
  };
  std::map<std::vector<int>, std::vector<std::size_t>> by_pattern;
  for (std::size_t s = 0; s < sample.size(); ++s) {
    by_pattern[pattern_of(sample[s], tol)].push_back(s);
  }
  std::size_t modal_rep = 0;
  std::size_t modal_count = 0;
  for (const auto& [pat, members] : by_pattern) {
    if (members.size() > modal_count ||
        (members.size() == modal_count && members.front() < modal_rep)) {
      modal_count = members.size();
      modal_rep = members.front();
    }
  }
  const std::vector<std::size_t>& modal_members = by_pattern[pattern_of(sample[modal_rep], tol)];

  // Shape target over the whole aligned sample.
  RealTriangle target(aligned.trees.front().f.dim());
  for (const auto& t : aligned.trees) {
    const auto& fv = t.f.flat();
    for (std::size_t k = 0; k < fv.size(); ++k) target.flat()[k] += fv[k];
  }
  for (double& v : target.flat()) v /= static_cast<double>(aligned.trees.size());

  // Grid template shared by every modal tree.
  HeteroGridTemplate grid;
  {
    const HeteroGenealogy& rep = sample[modal_rep];
    EventGrid g = build_event_grid(rep, tol);
    grid.entry_event.resize(g.entry_event.size());
    for (std::size_t e = 0; e < g.entry_event.size(); ++e) {
      grid.entry_event[e] = aligned.trees[modal_rep].original_event_index[g.entry_event[e]];
    }
    grid.n_events = aligned.trees[modal_rep].events.size();
  }

  SAResult<HeteroShapeCode> sa =
      frechet_mean_sa_hetero(target, sample[modal_rep].code, grid, config);

  // Coalescent times summarize across the whole sample (coalescent rows
  // align everywhere); sampling times only across the modal trees.
  const std::size_t n = sample.front().n_leaves();
  std::vector<std::vector<double>> coal_times;
  for (const auto& g : sample) {
    std::vector<double> row;
    for (std::size_t e = 0; e < g.code.length(); ++e) {
      if (g.code.sigma()[e]) row.push_back(g.times[e]);
    }
    coal_times.push_back(std::move(row));
  }
  const std::vector<double> coal_summary = summarize_columns(coal_times, time_summary);

  std::vector<std::vector<double>> leaf_times;
  for (std::size_t s : modal_members) {
    const auto& g = sample[s];
    std::vector<double> row;
    for (std::size_t e = 0; e < g.code.length(); ++e) {
      if (!g.code.sigma()[e]) row.push_back(g.times[e]);
    }
    leaf_times.push_back(std::move(row));
  }
  const std::vector<double> leaf_summary = summarize_columns(leaf_times, time_summary);

  std::vector<double> out_times(2 * n - 1, 0.0);
  std::size_t ci = 0;
  std::size_t li = 0;
  const auto& sigma = sample[modal_rep].code.sigma();
  for (std::size_t e = 0; e < out_times.size(); ++e) {
    out_times[e] = sigma[e] ? coal_summary[ci++] : leaf_summary[li++];
  }
  return HeteroGenealogy::make(sa.best, std::move(out_times));
}

double frechet_variance(const std::vector<FMatrix>& sample, const FMatrix& mean, int p) {
  check_p(p);
  if (sample.empty()) throw std::invalid_argument("empty sample");
  double acc = 0.0;
  for (const auto& f : sample) {
    const double d = d_shape(f, mean, p);
    acc += d * d;
  }
  return acc / static_cast<double>(sample.size());
}

double frechet_variance(const std::vector<FMatrix>& shapes, const std::vector<double>& pmf,
                        const FMatrix& mean, int p) {
  check_p(p);
  if (shapes.empty()) throw std::invalid_argument("empty sample");
  if (shapes.size() != pmf.size()) throw std::invalid_argument("one weight per shape required");
  double acc = 0.0;
  for (std::size_t s = 0; s < shapes.size(); ++s) {
    const double d = d_shape(shapes[s], mean, p);
    acc += pmf[s] * d * d;
  }
  return acc;
}

double frechet_variance(const std::vector<RankedGenealogy>& sample, const RankedGenealogy& mean,
                        int p) {
  check_p(p);
  if (sample.empty()) throw std::invalid_argument("empty sample");
  double acc = 0.0;
  for (const auto& g : sample) {
    const double d = d_genealogy(g, mean, p);
    acc += d * d;
  }
  return acc / static_cast<double>(sample.size());
}

double frechet_variance(const std::vector<HeteroGenealogy>& sample, const HeteroGenealogy& mean,
                        int p, double tol) {
  check_p(p);
  if (sample.empty()) throw std::invalid_argument("empty sample");
  std::vector<HeteroGenealogy> all;
  all.reserve(sample.size() + 1);
  all.push_back(mean);
  for (const auto& g : sample) all.push_back(g);
  AlignedSet aligned = align_heterochronous(all, tol);
  double acc = 0.0;
  for (std::size_t s = 1; s < all.size(); ++s) {
    const double d = d_extended(aligned.trees[0], aligned.trees[s], p);
    acc += d * d;
  }
  return acc / static_cast<double>(sample.size());
}

namespace {

template <typename T, typename DistFn>
std::size_t medoid_by(const std::vector<T>& sample, DistFn&& dist) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  std::size_t best = 0;
  double best_energy = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < sample.size(); ++j) {
      const double d = dist(i, j);
      acc += d * d;
    }
    if (acc < best_energy - kTieTolerance) {
      best = i;
      best_energy = acc;
    }
  }
  return best;
}

}  // namespace

std::size_t medoid_index(const std::vector<FMatrix>& sample, int p) {
  check_p(p);
  return medoid_by(sample, [&](std::size_t i, std::size_t j) {
    return d_shape(sample[i], sample[j], p);
  });
}

std::size_t medoid_index(const std::vector<RankedGenealogy>& sample, int p) {
  check_p(p);
  std::vector<RealTriangle> prods;
  prods.reserve(sample.size());
  for (const auto& g : sample) {
    prods.push_back(hadamard(code_to_fmatrix(g.shape).triangle(), weight_matrix(g.times)));
  }
  return medoid_by(sample, [&](std::size_t i, std::size_t j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < prods[i].flat().size(); ++k) {
      const double d = prods[i].flat()[k] - prods[j].flat()[k];
      acc += (p == 1) ? std::abs(d) : d * d;
    }
    return (p == 1) ? acc : std::sqrt(acc);
  });
}

std::size_t medoid_index(const std::vector<HeteroGenealogy>& sample, int p, double tol) {
  check_p(p);
  AlignedSet aligned = align_heterochronous(sample, tol);
  return medoid_by(sample, [&](std::size_t i, std::size_t j) {
    return d_extended(aligned.trees[i], aligned.trees[j], p);
  });
}

}  // namespace rts
