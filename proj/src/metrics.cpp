#include "rts/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace rts {

namespace {

void check_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("trees must have the same number of leaves");
}

void check_p(int p) {
  if (p != 1 && p != 2) throw std::invalid_argument("metric selector must be 1 or 2");
}

double lp_difference(const RealTriangle& a, const RealTriangle& b, int p) {
  double acc = 0.0;
  const auto& av = a.flat();
  const auto& bv = b.flat();
  for (std::size_t k = 0; k < av.size(); ++k) {
    const double d = av[k] - bv[k];
    acc += (p == 1) ? std::abs(d) : d * d;
  }
  return (p == 1) ? acc : std::sqrt(acc);
}

}  // namespace

long long d1_int(const FMatrix& a, const FMatrix& b) {
  check_same_dim(a.dim(), b.dim());
  long long acc = 0;
  const auto& av = a.triangle().flat();
  const auto& bv = b.triangle().flat();
  for (std::size_t k = 0; k < av.size(); ++k) acc += std::abs(av[k] - bv[k]);
  return acc;
}

long long d2_squared_int(const FMatrix& a, const FMatrix& b) {
  check_same_dim(a.dim(), b.dim());
  long long acc = 0;
  const auto& av = a.triangle().flat();
  const auto& bv = b.triangle().flat();
  for (std::size_t k = 0; k < av.size(); ++k) {
    const long long d = av[k] - bv[k];
    acc += d * d;
  }
  return acc;
}

double d_shape(const FMatrix& a, const FMatrix& b, int p) {
  check_p(p);
  if (p == 1) return static_cast<double>(d1_int(a, b));
  return std::sqrt(static_cast<double>(d2_squared_int(a, b)));
}

double d_genealogy(const RankedGenealogy& a, const RankedGenealogy& b, int p) {
  check_p(p);
  check_same_dim(a.n_leaves(), b.n_leaves());
  const RealTriangle pa = hadamard(code_to_fmatrix(a.shape).triangle(), weight_matrix(a.times));
  const RealTriangle pb = hadamard(code_to_fmatrix(b.shape).triangle(), weight_matrix(b.times));
  return lp_difference(pa, pb, p);
}

namespace {

struct GapLayout {
  // events split as: coalescent c_1, gap 1 samplings, c_2, ..., c_{n-1},
  // gap n-1 samplings.  gap_events[g] holds the grid indices of the real
  // sampling events in gap g (1-based gaps, index 0 unused).
  std::vector<std::vector<std::size_t>> gap_events;
  std::vector<std::size_t> coalescent_event;  // grid index of c_g at [g], 1-based
};

GapLayout layout_gaps(const EventGrid& grid, std::size_t n_leaves) {
  GapLayout out;
  out.gap_events.resize(n_leaves);
  out.coalescent_event.resize(n_leaves, 0);
  std::size_t coal_seen = 0;
  for (std::size_t k = 0; k < grid.events.size(); ++k) {
    if (grid.events[k].kind == EventKind::kCoalescent) {
      ++coal_seen;
      out.coalescent_event[coal_seen] = k;
    } else {
      if (coal_seen == 0) throw std::invalid_argument("sampling event precedes the root");
      out.gap_events[coal_seen].push_back(k);
    }
  }
  if (coal_seen != n_leaves - 1) {
    throw std::invalid_argument("tree must have n-1 coalescent events");
  }
  return out;
}

}  // namespace

AlignedSet align_heterochronous(const std::vector<HeteroGenealogy>& trees, double tol) {
  AlignedSet out;
  if (trees.empty()) return out;
  const std::size_t n = trees.front().n_leaves();
  std::vector<EventGrid> grids;
  std::vector<GapLayout> layouts;
  grids.reserve(trees.size());
  for (const auto& tree : trees) {
    check_same_dim(tree.n_leaves(), n);
    grids.push_back(build_event_grid(tree, tol));
    layouts.push_back(layout_gaps(grids.back(), n));
  }

  // Per inter-coalescent gap, every tree is padded to the maximal
  // sampling-event count; artificial events are appended at the recent
  // end of the gap and carry the time of the gap's closing event.
  std::vector<std::size_t> max_in_gap(n, 0);
  for (const auto& layout : layouts) {
    for (std::size_t g = 1; g <= n - 1; ++g) {
      max_in_gap[g] = std::max(max_in_gap[g], layout.gap_events[g].size());
    }
  }

  out.trees.resize(trees.size());
  for (std::size_t ti = 0; ti < trees.size(); ++ti) {
    const EventGrid& grid = grids[ti];
    const GapLayout& layout = layouts[ti];
    ExtendedTree ext;
    std::vector<std::size_t> padded_index(grid.events.size());
    for (std::size_t g = 1; g <= n - 1; ++g) {
      const std::size_t coal = layout.coalescent_event[g];
      padded_index[coal] = ext.events.size();
      ext.events.push_back(grid.events[coal]);
      for (std::size_t k : layout.gap_events[g]) {
        padded_index[k] = ext.events.size();
        ext.events.push_back(grid.events[k]);
      }
      const double pad_time = (g < n - 1) ? grids[ti].events[layout.coalescent_event[g + 1]].time
                                          : grid.events.back().time;
      for (std::size_t extra = layout.gap_events[g].size(); extra < max_in_gap[g]; ++extra) {
        ext.events.push_back(Event{EventKind::kArtificial, pad_time, 0});
      }
    }
    // Extended matrices on the padded grid: edge lifetimes are those of
    // the unpadded tree mapped through the insertion positions.
    EventGrid padded_grid;
    padded_grid.events = ext.events;
    padded_grid.entry_event.resize(grid.entry_event.size());
    for (std::size_t e = 0; e < grid.entry_event.size(); ++e) {
      padded_grid.entry_event[e] = padded_index[grid.entry_event[e]];
    }
    ext.original_event_index = padded_index;
    ext.f = detail_extended_f(trees[ti], padded_grid);
    ext.w = detail_extended_w(ext.events);
    out.trees[ti] = std::move(ext);
  }
  return out;
}

double d_extended(const ExtendedTree& a, const ExtendedTree& b, int p) {
  check_p(p);
  if (a.f.dim() != b.f.dim()) throw std::invalid_argument("trees are not aligned");
  return lp_difference(hadamard(a.f, a.w), hadamard(b.f, b.w), p);
}

double d_hetero(const HeteroGenealogy& a, const HeteroGenealogy& b, int p, double tol) {
  AlignedSet aligned = align_heterochronous({a, b}, tol);
  return d_extended(aligned.trees[0], aligned.trees[1], p);
}

namespace {

template <typename DistFn>
DistanceMatrix fill_matrix(std::size_t m, bool parallel, DistFn&& dist) {
  DistanceMatrix out;
  out.size = m;
  out.values.assign(m * m, 0.0);
  auto fill_rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const double d = dist(i, j);
        out(i, j) = d;
        out(j, i) = d;
      }
    }
  };
  const std::size_t hw = std::thread::hardware_concurrency();
  if (!parallel || m < 16 || hw < 2) {
    fill_rows(0, m);
    return out;
  }
  const std::size_t workers = std::min<std::size_t>(hw, 8);
  std::vector<std::thread> pool;
  const std::size_t chunk = (m + workers - 1) / workers;
  for (std::size_t wdx = 0; wdx < workers; ++wdx) {
    const std::size_t b = wdx * chunk;
    const std::size_t e = std::min(m, b + chunk);
    if (b >= e) break;
    pool.emplace_back(fill_rows, b, e);
  }
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace

DistanceMatrix pairwise_distance_matrix(const std::vector<FMatrix>& sample, int p, bool parallel) {
  check_p(p);
  for (const auto& f : sample) check_same_dim(f.dim(), sample.front().dim());
  return fill_matrix(sample.size(), parallel,
                     [&](std::size_t i, std::size_t j) { return d_shape(sample[i], sample[j], p); });
}

DistanceMatrix pairwise_distance_matrix(const std::vector<RankedGenealogy>& sample, int p,
                                        bool parallel) {
  check_p(p);
  std::vector<RealTriangle> prods;
  prods.reserve(sample.size());
  for (const auto& g : sample) {
    check_same_dim(g.n_leaves(), sample.front().n_leaves());
    prods.push_back(hadamard(code_to_fmatrix(g.shape).triangle(), weight_matrix(g.times)));
  }
  return fill_matrix(sample.size(), parallel, [&](std::size_t i, std::size_t j) {
    return lp_difference(prods[i], prods[j], p);
  });
}

DistanceMatrix pairwise_distance_matrix(const std::vector<HeteroGenealogy>& sample, int p,
                                        bool parallel, double tol) {
  check_p(p);
  AlignedSet aligned = align_heterochronous(sample, tol);
  std::vector<RealTriangle> prods;
  prods.reserve(aligned.trees.size());
  for (const auto& t : aligned.trees) prods.push_back(hadamard(t.f, t.w));
  return fill_matrix(sample.size(), parallel, [&](std::size_t i, std::size_t j) {
    return lp_difference(prods[i], prods[j], p);
  });
}

}  // namespace rts
