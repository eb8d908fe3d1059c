#pragma once

#include <cstddef>
#include <vector>

#include "rts/codes.hpp"
#include "rts/triangular.hpp"

namespace rts {

// Absolute tolerance for treating event times as simultaneous when
// grouping sampled leaves into sampling events.
constexpr double kEventTimeTolerance = 1e-9;

// Ranked tree shape plus strictly decreasing branching times; times[k]
// is u_{k+1} in 1-based terms, so times.front() is the root event and
// the leaves sit at the implicit u_n = 0.
struct RankedGenealogy {
  RankedShapeCode shape;
  std::vector<double> times;

  static RankedGenealogy make(RankedShapeCode shape, std::vector<double> times);
  std::size_t n_leaves() const { return shape.n_leaves(); }
};

// Heterochronous ranked genealogy: a (t, sigma) code plus one time per
// code entry, non-increasing from the root.  Sampled leaves may share a
// time (one multi-leaf sampling event); coalescent times are strictly
// ordered against every other event.
struct HeteroGenealogy {
  HeteroShapeCode code;
  std::vector<double> times;

  static HeteroGenealogy make(HeteroShapeCode code, std::vector<double> times);
  static HeteroGenealogy from_isochronous(const RankedGenealogy& g);
  std::size_t n_leaves() const { return code.n_leaves(); }
};

// W(i, j) = u_j - u_{i+1}: the span over which the branches counted by
// F(i, j) persist.  Shape matches the F-matrix of the same genealogy.
RealTriangle weight_matrix(const std::vector<double>& times);

RealTriangle hadamard(const IntTriangle& f, const RealTriangle& w);

enum class EventKind { kCoalescent, kSampling, kArtificial };

struct Event {
  EventKind kind;
  double time = 0.0;
  int new_samples = 0;  // leaves added at a sampling event; 0 otherwise
};

// A heterochronous tree on an explicit event grid: one row per interval
// between consecutive events.  F counts branches alive in both
// intervals of an index pair, W measures the matching time spans.
struct ExtendedTree {
  std::vector<Event> events;  // oldest first
  IntTriangle f;
  RealTriangle w;
  // Position of each pre-padding event in `events`; identity when the
  // tree has not been aligned.
  std::vector<std::size_t> original_event_index;

  // Drops rows/columns introduced by artificial events, recovering the
  // unaligned extended matrices.
  void reduce_to_original(IntTriangle& f_out, RealTriangle& w_out) const;
};

// Event sequence of a single tree (leaves grouped into sampling events
// by the time tolerance), plus the grid event index of every code entry.
struct EventGrid {
  std::vector<Event> events;
  std::vector<std::size_t> entry_event;  // per code entry, 0-based into events
};

EventGrid build_event_grid(const HeteroGenealogy& g, double tol = kEventTimeTolerance);

// Extended F/W matrices of one tree on its own grid (no padding).
ExtendedTree build_extended(const HeteroGenealogy& g, double tol = kEventTimeTolerance);

// Building blocks shared with the alignment code: F from the tree's
// edge lifetimes mapped onto an (optionally padded) grid, and W from
// grid event times.
IntTriangle detail_extended_f(const HeteroGenealogy& g, const EventGrid& grid);
RealTriangle detail_extended_w(const std::vector<Event>& events);

// Extended F-matrix for a candidate code on a fixed grid layout: the
// entry -> event map depends only on sigma and the event grouping, so
// topology searches can rebuild F without touching times.
IntTriangle extended_f_for_code(const HeteroShapeCode& code,
                                const std::vector<std::size_t>& entry_event,
                                std::size_t n_events);

}  // namespace rts
