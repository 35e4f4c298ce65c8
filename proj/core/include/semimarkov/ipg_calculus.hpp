#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "semimarkov/graph.hpp"

namespace semimarkov {

inline constexpr std::size_t kDefaultMaxCircles = 16;

enum class Rule { R1, R2 };

/// One firing of a closure rule.
///
/// R1: A ip-> B, B ip<-> C and B an ancestor of C demand an edge between A and C
/// with an arrow at C; when the pair is empty the edge added is A ip-> C.
/// R2: a path of ip<-> edges between A and B whose vertices are all ancestors of A
/// or B demands A ip<-> B.
struct RuleInstance {
  Rule rule = Rule::R1;
  /// A ip-> C for R1, A ip<-> B for R2.
  Edge demanded;
  /// R1: {A, B, C}. R2: the bidirected path from A to B.
  std::vector<std::string> witness;

  std::string describe() const;
  bool operator==(const RuleInstance&) const = default;
};

/// Every R1 demand of g (satisfied or not). g must carry only tail/arrow marks.
std::vector<RuleInstance> r1_consequences(const MixedGraph& g);
/// Every R2 demand of g (satisfied or not), one per vertex pair.
std::vector<RuleInstance> r2_consequences(const MixedGraph& g);

/// Whether g already contains what the instance demands.
bool satisfied(const MixedGraph& g, const RuleInstance& instance);

struct ClosureConflict {
  std::string message;
  std::optional<RuleInstance> instance;
};

struct ClosureResult {
  std::optional<MixedGraph> graph;
  std::optional<ClosureConflict> conflict;

  explicit operator bool() const noexcept { return graph.has_value(); }
};

/// Adds demanded edges until R1 and R2 hold. A demand that contradicts an existing
/// edge, or an addition that closes a directed cycle, is reported as a conflict.
ClosureResult closure(const MixedGraph& g);

struct IpgDiagnosis {
  bool valid = false;
  std::vector<std::string> problems;

  explicit operator bool() const noexcept { return valid; }
};

/// Valid iff observable-only, every edge tail-arrow or arrow-arrow, the directed part
/// is acyclic and every R1/R2 demand is already met.
IpgDiagnosis is_valid_ipg(const MixedGraph& g);

/// Every assignment of the circles of `mdg` (per adjacency: A->B, B->A or A<->B) that
/// respects the definite marks and noncollider triples and is a valid IPG. Sorted by
/// native serialization. Throws BoundError above `max_circles` circle marks.
std::vector<MixedGraph> completions(const MixedGraph& mdg,
                                    std::size_t max_circles = kDefaultMaxCircles);

/// Marks shared by every input are kept, the rest become circles. An unshielded
/// triple is recorded as a noncollider iff no input makes it a collider.
/// Throws PreconditionError if the inputs do not share vertices and adjacencies.
MixedGraph common_marks(const std::vector<MixedGraph>& ipgs);

}  // namespace semimarkov
