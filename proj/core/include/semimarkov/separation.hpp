#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semimarkov/graph.hpp"

namespace semimarkov {

inline constexpr std::size_t kDefaultMaxObservables = 10;

/// True iff both edges of `path` incident to the interior vertex `v` carry an arrow at v.
/// Throws PreconditionError if v is an endpoint of the path or not on it.
bool is_collider_on(const MixedGraph& g, const Path& path, std::string_view v);

/// d-separation by reachability over (vertex, arrived-head-on) states. A collider is
/// passable iff it has a descendant in w; a non-collider iff it is not in w.
/// Requires a != b, a and b not in w, and no circle marks.
bool d_separated(const MixedGraph& m, std::string_view a, std::string_view b,
                 const std::vector<std::string>& w);
bool d_separated(const MixedGraph& m, std::size_t a, std::size_t b, VertexSet w);

/// Literal check over every simple path: separated iff no path has all colliders with
/// a descendant in w and all other interior vertices outside w.
bool d_separated_oracle(const MixedGraph& m, std::string_view a, std::string_view b,
                        const std::vector<std::string>& w);
bool d_separated_oracle(const MixedGraph& m, std::size_t a, std::size_t b, VertexSet w);

/// One row of a Signature.
struct SignatureEntry {
  std::string a;
  std::string b;
  std::vector<std::string> w;
  bool separated = false;
};

/// Complete table of d-separation facts over observable pairs and conditioning sets.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<std::string> observables);

  const std::vector<std::string>& observables() const noexcept { return observables_; }

  /// Entry for {a, b} given w (order of a and b is irrelevant).
  bool separated(std::string_view a, std::string_view b, const std::vector<std::string>& w) const;
  bool separated(std::size_t a, std::size_t b, VertexSet w) const;
  void set(std::size_t a, std::size_t b, VertexSet w, bool separated);

  /// Entries ordered by pair (name order) and then by conditioning set (size, then
  /// names). This is the order used to pick equivalence witnesses.
  std::vector<SignatureEntry> entries() const;

  /// First entry (in entries() order) where the two signatures differ.
  std::optional<SignatureEntry> first_difference(const Signature& other) const;

  bool operator==(const Signature&) const = default;

  /// Conditioning sets over k elements, ordered by size then lexicographically.
  static std::vector<VertexSet> subset_order(std::size_t k);

 private:
  std::size_t pair_index(std::size_t a, std::size_t b) const;

  std::vector<std::string> observables_;
  // table_[pair_index][w] with w a bit set over observable positions.
  std::vector<std::vector<std::uint8_t>> table_;
};

/// d-separation fact for every observable pair and every conditioning subset of the
/// remaining observables. Throws BoundError above `max_observables`.
Signature d_separation_signature(const MixedGraph& m,
                                 std::size_t max_observables = kDefaultMaxObservables);

struct InducingClassification {
  bool exists = false;
  bool into_a = false;
  bool into_b = false;

  bool operator==(const InducingClassification&) const = default;
};

/// Inducing paths between a and b relative to s: every interior vertex in s is a
/// collider and every interior collider is an ancestor of a or b.
InducingClassification classify_inducing(const MixedGraph& m, const std::vector<std::string>& s,
                                         std::string_view a, std::string_view b);
/// Index form. `ancestors` must come from ancestor_sets(m).
InducingClassification classify_inducing(const MixedGraph& m, VertexSet s, std::size_t a,
                                         std::size_t b, const std::vector<VertexSet>& ancestors);

/// Same classification by filtering enumerate_simple_paths; reference for tests.
InducingClassification classify_inducing_oracle(const MixedGraph& m, VertexSet s, std::size_t a,
                                                std::size_t b);

/// IPG over s (default: all observables). Edge iff an inducing path exists; the mark
/// at an endpoint is an arrow iff some inducing path is into it.
MixedGraph ipg_of(const MixedGraph& m);
MixedGraph ipg_of(const MixedGraph& m, const std::vector<std::string>& s);

/// True iff classify_inducing(...).exists agrees with "no subset of s minus {a, b}
/// d-separates a and b".
bool inducing_iff_no_separator_check(const MixedGraph& m, const std::vector<std::string>& s,
                                     std::string_view a, std::string_view b);

}  // namespace semimarkov
