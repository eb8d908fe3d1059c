#include "rts/codes.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace rts {

namespace {

CodeValidation code_fail(std::size_t pos, std::string reason) {
  return CodeValidation{CodeViolation{pos, std::move(reason)}};
}

}  // namespace

CodeValidation RankedShapeCode::validate(const std::vector<int>& t) {
  if (t.empty()) return code_fail(0, "code must have length n-1 >= 1");
  if (t[0] != 1) return code_fail(1, "t[1] must be 1 (sentinel parent of the root)");
  std::vector<int> uses(t.size() + 2, 0);
  for (std::size_t i = 2; i <= t.size(); ++i) {
    const int v = t[i - 1];
    if (v < 2 || v > static_cast<int>(i)) {
      return code_fail(i, "entry must lie in [2, i]");
    }
    if (++uses[v] > 2) return code_fail(i, "label appears more than twice");
  }
  return CodeValidation{};
}

RankedShapeCode RankedShapeCode::from_entries(std::vector<int> t) {
  CodeValidation v = validate(t);
  if (!v.ok()) {
    throw std::invalid_argument("invalid shape code at position " +
                                std::to_string(v.violation->position) + ": " +
                                v.violation->reason);
  }
  return RankedShapeCode(std::move(t), Unchecked{});
}

RankedShapeCode RankedShapeCode::caterpillar(std::size_t n_leaves) {
  if (n_leaves < 2) throw std::invalid_argument("need n >= 2");
  std::vector<int> t(n_leaves - 1);
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = static_cast<int>(k) + 1;
  return RankedShapeCode(std::move(t), Unchecked{});
}

CodeValidation HeteroShapeCode::validate(const std::vector<int>& t,
                                         const std::vector<uint8_t>& sigma) {
  if (t.size() != sigma.size()) return code_fail(0, "t and sigma must have equal length");
  if (t.size() < 3 || t.size() % 2 == 0) return code_fail(0, "length must be 2n-1 >= 3");
  const std::size_t n = (t.size() + 1) / 2;
  if (t[0] != 1 || sigma[0] != 1) {
    return code_fail(1, "sequence must start with the root: t[1]=1, sigma[1]=1");
  }
  std::size_t ones = 0;
  for (uint8_t s : sigma) {
    if (s != 0 && s != 1) return code_fail(0, "sigma entries must be 0 or 1");
    ones += s;
  }
  if (ones != n - 1) return code_fail(0, "sigma must contain exactly n-1 ones");
  // property 3 (n zeros) follows from the length check and property 2.

  std::vector<int> uses(n + 2, 0);
  std::size_t coal_seen = 1;  // the root
  for (std::size_t i = 2; i <= t.size(); ++i) {
    const int v = t[i - 1];
    if (v < 2 || v > static_cast<int>(n)) return code_fail(i, "parent label out of range");
    if (++uses[v] > 2) return code_fail(i, "label appears more than twice");
    if (v > static_cast<int>(coal_seen) + 1) {
      return code_fail(i, "parent must already exist: t[i] <= 1 + #coalescences before i");
    }
    coal_seen += sigma[i - 1];
  }
  for (int label = 2; label <= static_cast<int>(n); ++label) {
    if (uses[label] != 2) return code_fail(0, "label " + std::to_string(label) +
                                                  " must occur exactly twice in t");
  }
  return CodeValidation{};
}

HeteroShapeCode HeteroShapeCode::from_entries(std::vector<int> t, std::vector<uint8_t> sigma) {
  CodeValidation v = validate(t, sigma);
  if (!v.ok()) {
    throw std::invalid_argument("invalid heterochronous code at position " +
                                std::to_string(v.violation->position) + ": " +
                                v.violation->reason);
  }
  return HeteroShapeCode(std::move(t), std::move(sigma), Unchecked{});
}

RankedShapeCode HeteroShapeCode::coalescent_subcode() const {
  std::vector<int> sub;
  sub.reserve(n_leaves() - 1);
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (sigma_[i]) sub.push_back(t_[i]);
  }
  return RankedShapeCode::from_entries(std::move(sub));
}

HeteroShapeCode hetero_replace_t_unchecked(const HeteroShapeCode& base, std::vector<int> t) {
  return HeteroShapeCode(std::move(t), base.sigma(), HeteroShapeCode::Unchecked{});
}

std::size_t cherry_count(const RankedShapeCode& code) {
  const std::size_t n = code.n_leaves();
  std::vector<bool> seen(n + 1, false);
  for (std::size_t i = 1; i < code.entries().size(); ++i) seen[code.entries()[i]] = true;
  std::size_t cherries = 0;
  for (std::size_t label = 2; label <= n; ++label) {
    if (!seen[label]) ++cherries;
  }
  return cherries;
}

IntTriangle code_to_dmatrix(const RankedShapeCode& code) {
  const std::size_t dim = code.entries().size();  // n - 1
  IntTriangle d(dim);
  // D(i, j) = 2 minus the number of children of node j+1 that have
  // bifurcated by the end of interval i, i.e. internal nodes m <= i+1
  // with parent j+1.
  for (std::size_t j = 1; j <= dim; ++j) {
    int remaining = 2;
    for (std::size_t i = j; i <= dim; ++i) {
      // Node i+1 bifurcates at the boundary entering interval i.
      if (i >= 2 && code.entries()[i - 1] == static_cast<int>(j) + 1) --remaining;
      d(i, j) = remaining;
    }
  }
  return d;
}

FMatrix code_to_fmatrix(const RankedShapeCode& code) {
  IntTriangle d = code_to_dmatrix(code);
  IntTriangle f(d.dim());
  for (std::size_t i = 1; i <= d.dim(); ++i) {
    int acc = 0;
    for (std::size_t j = 1; j <= i; ++j) {
      acc += d(i, j);
      f(i, j) = acc;
    }
  }
  return FMatrix::from_triangle(std::move(f));
}

RankedShapeCode fmatrix_to_code(const FMatrix& f) {
  const std::size_t dim = f.dim();
  std::vector<int> t(dim);
  t[0] = 1;
  auto d = [&f](std::size_t i, std::size_t j) {
    return f(i, j) - (j > 1 ? f(i, j - 1) : 0);
  };
  for (std::size_t i = 2; i <= dim; ++i) {
    // Exactly one column's D entry drops between rows i-1 and i; that
    // column names the parent of node i+1.
    int parent = 0;
    for (std::size_t j = 1; j < i; ++j) {
      if (d(i - 1, j) - d(i, j) == 1) {
        parent = static_cast<int>(j) + 1;
        break;
      }
    }
    if (parent == 0) throw std::invalid_argument("no bifurcating column found in row " +
                                                 std::to_string(i));
    t[i - 1] = parent;
  }
  return RankedShapeCode::from_entries(std::move(t));
}

}  // namespace rts
