#include "rts/genealogy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rts {

RankedGenealogy RankedGenealogy::make(RankedShapeCode shape, std::vector<double> times) {
  if (times.size() != shape.n_leaves() - 1) {
    throw std::invalid_argument("need one branching time per internal node");
  }
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] > 0)) throw std::invalid_argument("branching times must be positive");
    if (k + 1 < times.size() && !(times[k] > times[k + 1])) {
      throw std::invalid_argument("branching times must strictly decrease");
    }
  }
  return RankedGenealogy{std::move(shape), std::move(times)};
}

HeteroGenealogy HeteroGenealogy::make(HeteroShapeCode code, std::vector<double> times) {
  if (times.size() != code.length()) {
    throw std::invalid_argument("need one event time per code entry");
  }
  const auto& sigma = code.sigma();
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < 0) throw std::invalid_argument("event times must be non-negative");
    if (k + 1 < times.size()) {
      if (times[k] < times[k + 1]) {
        throw std::invalid_argument("event times must be non-increasing from the root");
      }
      // Ties are only meaningful between sampled leaves (one multi-leaf
      // sampling event); a coalescence shares its instant with nothing.
      if (times[k] == times[k + 1] && (sigma[k] || sigma[k + 1])) {
        throw std::invalid_argument("coalescent times must be strictly ordered");
      }
    }
  }
  return HeteroGenealogy{std::move(code), std::move(times)};
}

HeteroGenealogy HeteroGenealogy::from_isochronous(const RankedGenealogy& g) {
  const std::size_t n = g.n_leaves();
  std::vector<int> t;
  std::vector<uint8_t> sigma;
  std::vector<double> times;
  t.reserve(2 * n - 1);
  for (int v : g.shape.entries()) t.push_back(v);
  sigma.assign(n - 1, 1);
  times = g.times;
  // Leaf children of node m are its two slots minus the internal nodes
  // that claimed them; all sit in one sampling event at time 0.
  std::vector<int> used(n + 1, 0);
  for (std::size_t i = 1; i < g.shape.entries().size(); ++i) ++used[g.shape.entries()[i]];
  for (int m = 2; m <= static_cast<int>(n); ++m) {
    for (int slot = used[m]; slot < 2; ++slot) {
      t.push_back(m);
      sigma.push_back(0);
      times.push_back(0.0);
    }
  }
  return make(HeteroShapeCode::from_entries(std::move(t), std::move(sigma)), std::move(times));
}

RealTriangle weight_matrix(const std::vector<double>& times) {
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    if (times[k] < times[k + 1]) {
      throw std::invalid_argument("times must be non-increasing toward the present");
    }
  }
  if (!times.empty() && times.back() < 0) {
    throw std::invalid_argument("times must be non-negative");
  }
  const std::size_t dim = times.size();
  RealTriangle w(dim);
  for (std::size_t i = 1; i <= dim; ++i) {
    const double ui1 = (i + 1 <= dim) ? times[i] : 0.0;  // u_{i+1}, with u_n = 0
    for (std::size_t j = 1; j <= i; ++j) {
      w(i, j) = times[j - 1] - ui1;
    }
  }
  return w;
}

RealTriangle hadamard(const IntTriangle& f, const RealTriangle& w) {
  if (f.dim() != w.dim()) throw std::invalid_argument("dimension mismatch");
  RealTriangle out(f.dim());
  for (std::size_t i = 1; i <= f.dim(); ++i) {
    for (std::size_t j = 1; j <= i; ++j) out(i, j) = f(i, j) * w(i, j);
  }
  return out;
}

EventGrid build_event_grid(const HeteroGenealogy& g, double tol) {
  EventGrid grid;
  const auto& sigma = g.code.sigma();
  grid.entry_event.resize(g.times.size());
  for (std::size_t e = 0; e < g.times.size(); ++e) {
    if (sigma[e]) {
      grid.events.push_back(Event{EventKind::kCoalescent, g.times[e], 0});
    } else if (!grid.events.empty() && grid.events.back().kind == EventKind::kSampling &&
               std::abs(grid.events.back().time - g.times[e]) <= tol) {
      ++grid.events.back().new_samples;
    } else {
      grid.events.push_back(Event{EventKind::kSampling, g.times[e], 1});
    }
    grid.entry_event[e] = grid.events.size() - 1;
  }
  return grid;
}

namespace {

// Parent edges as (birth event, end event) pairs, 0-based grid indices.
// An edge is born when its parent node bifurcates and ends when the
// child bifurcates (internal) or is sampled (leaf).
std::vector<std::pair<std::size_t, std::size_t>> edge_spans(
    const HeteroShapeCode& code, const std::vector<std::size_t>& entry_event) {
  const auto& t = code.t();
  const auto& sigma = code.sigma();
  std::vector<std::size_t> entry_of_label(code.n_leaves() + 1, 0);
  int next_label = 2;
  for (std::size_t e = 0; e < t.size(); ++e) {
    if (sigma[e]) entry_of_label[next_label++] = e;
  }
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  spans.reserve(t.size() - 1);
  for (std::size_t e = 1; e < t.size(); ++e) {
    const std::size_t parent_entry = entry_of_label[t[e]];
    spans.emplace_back(entry_event[parent_entry], entry_event[e]);
  }
  return spans;
}

// F over an event grid from edge lifetimes: entry (i, j), 1-based over
// intervals, counts edges with birth <= j-th event and end >= (i+1)-th.
IntTriangle f_from_spans(const std::vector<std::pair<std::size_t, std::size_t>>& spans,
                         std::size_t n_events) {
  const std::size_t dim = n_events - 1;
  // alive[b][e]: edges born at event b+1 ending at event e+1 (1-based).
  std::vector<std::vector<int>> count(n_events, std::vector<int>(n_events + 1, 0));
  for (auto [b, e] : spans) ++count[b][e];
  // suffix over end, then prefix over birth
  std::vector<std::vector<int>> tail(n_events, std::vector<int>(n_events + 2, 0));
  for (std::size_t b = 0; b < n_events; ++b) {
    for (std::size_t e = n_events; e-- > 0;) {
      tail[b][e] = tail[b][e + 1] + count[b][e];
    }
  }
  IntTriangle f(dim);
  for (std::size_t j = 1; j <= dim; ++j) {
    for (std::size_t i = j; i <= dim; ++i) {
      int acc = 0;
      for (std::size_t b = 0; b < j; ++b) acc += tail[b][i];  // end (0-based) >= i <=> end_1based >= i+1
      f(i, j) = acc;
    }
  }
  return f;
}

RealTriangle w_from_events(const std::vector<Event>& events) {
  const std::size_t dim = events.size() - 1;
  RealTriangle w(dim);
  for (std::size_t i = 1; i <= dim; ++i) {
    for (std::size_t j = 1; j <= i; ++j) {
      w(i, j) = std::abs(events[j - 1].time - events[i].time);
    }
  }
  return w;
}

}  // namespace

IntTriangle detail_extended_f(const HeteroGenealogy& g, const EventGrid& grid) {
  return f_from_spans(edge_spans(g.code, grid.entry_event), grid.events.size());
}

RealTriangle detail_extended_w(const std::vector<Event>& events) {
  return w_from_events(events);
}

IntTriangle extended_f_for_code(const HeteroShapeCode& code,
                                const std::vector<std::size_t>& entry_event,
                                std::size_t n_events) {
  return f_from_spans(edge_spans(code, entry_event), n_events);
}

ExtendedTree build_extended(const HeteroGenealogy& g, double tol) {
  EventGrid grid = build_event_grid(g, tol);
  ExtendedTree out;
  out.events = grid.events;
  out.f = f_from_spans(edge_spans(g.code, grid.entry_event), grid.events.size());
  out.w = w_from_events(out.events);
  out.original_event_index.resize(out.events.size());
  for (std::size_t k = 0; k < out.events.size(); ++k) out.original_event_index[k] = k;
  return out;
}

void ExtendedTree::reduce_to_original(IntTriangle& f_out, RealTriangle& w_out) const {
  const std::size_t n_orig = original_event_index.size();
  if (n_orig < 2) throw std::logic_error("grid needs at least two events");
  const std::size_t dim = n_orig - 1;
  f_out = IntTriangle(dim);
  w_out = RealTriangle(dim);
  // Row i of the original grid ends at original event i+1; column j
  // starts at original event j.  Both map through the padded positions.
  for (std::size_t i = 1; i <= dim; ++i) {
    const std::size_t row = original_event_index[i] /* 1-based event i+1 */;
    for (std::size_t j = 1; j <= i; ++j) {
      const std::size_t col = original_event_index[j - 1] + 1;
      f_out(i, j) = f(row, col);
      w_out(i, j) = w(row, col);
    }
  }
}

}  // namespace rts
