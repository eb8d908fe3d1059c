#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rts/fmatrix.hpp"

namespace rts {

struct CodeViolation {
  std::size_t position = 0;  // 1-based index into the string
  std::string reason;
};

struct CodeValidation {
  std::optional<CodeViolation> violation;
  bool ok() const { return !violation.has_value(); }
};

// Functional-code string for an isochronous ranked tree shape with n
// leaves: t has length n-1 and t[k] names the parent of the internal
// node ranked k+1.  The root is node 2 and t[1] = 1 is its sentinel
// parent.  No label may appear more than twice (a node has two children).
class RankedShapeCode {
 public:
  static CodeValidation validate(const std::vector<int>& t);
  static RankedShapeCode from_entries(std::vector<int> t);

  // Caterpillar code (1, 2, ..., n-1).
  static RankedShapeCode caterpillar(std::size_t n_leaves);

  std::size_t n_leaves() const { return t_.size() + 1; }
  const std::vector<int>& entries() const { return t_; }
  // Parent label of internal node m (2 <= m <= n); parent_of(2) == 1.
  int parent_of(std::size_t node) const { return t_[node - 2]; }

  bool operator==(const RankedShapeCode& o) const { return t_ == o.t_; }
  bool operator!=(const RankedShapeCode& o) const { return t_ != o.t_; }
  bool operator<(const RankedShapeCode& o) const { return t_ < o.t_; }

 private:
  friend class ShapeEnumerator;
  struct Unchecked {};
  RankedShapeCode(std::vector<int> t, Unchecked) : t_(std::move(t)) {}
  std::vector<int> t_;
};

// Pair-of-strings encoding of a heterochronous ranked tree shape: t and
// sigma both have length 2n-1; entries are ordered by creation time,
// sigma marks coalescences (1) versus sampled leaves (0), and t names
// each node's parent.  The coalescent subsequence of t is a valid
// isochronous code.
class HeteroShapeCode {
 public:
  static CodeValidation validate(const std::vector<int>& t, const std::vector<uint8_t>& sigma);
  static HeteroShapeCode from_entries(std::vector<int> t, std::vector<uint8_t> sigma);

  std::size_t n_leaves() const { return (t_.size() + 1) / 2; }
  std::size_t length() const { return t_.size(); }
  const std::vector<int>& t() const { return t_; }
  const std::vector<uint8_t>& sigma() const { return sigma_; }

  // The isochronous code (t_i : sigma_i = 1).
  RankedShapeCode coalescent_subcode() const;

  bool operator==(const HeteroShapeCode& o) const { return t_ == o.t_ && sigma_ == o.sigma_; }
  bool operator!=(const HeteroShapeCode& o) const { return !(*this == o); }

 private:
  friend HeteroShapeCode hetero_replace_t_unchecked(const HeteroShapeCode&, std::vector<int>);
  struct Unchecked {};
  HeteroShapeCode(std::vector<int> t, std::vector<uint8_t> sigma, Unchecked)
      : t_(std::move(t)), sigma_(std::move(sigma)) {}
  std::vector<int> t_;
  std::vector<uint8_t> sigma_;
};

// Internal helper for proposal kernels that have already re-validated t.
HeteroShapeCode hetero_replace_t_unchecked(const HeteroShapeCode& base, std::vector<int> t);

// Number of internal nodes subtending two leaves; equals the count of
// labels in 2..n absent from the code string.
std::size_t cherry_count(const RankedShapeCode& code);

// Conversions through the intermediate D-matrix, where D(i, j) tracks
// how many children of node j+1 are still unbifurcated at the end of
// interval i and F(i, j) is the partial row sum of D.
IntTriangle code_to_dmatrix(const RankedShapeCode& code);
FMatrix code_to_fmatrix(const RankedShapeCode& code);
RankedShapeCode fmatrix_to_code(const FMatrix& f);

}  // namespace rts
