#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semimarkov/graph.hpp"
#include "semimarkov/ipg_calculus.hpp"
#include "semimarkov/separation.hpp"

namespace semimarkov {

/// Auto picks Exact below 8 observables when the skeleton has at most `max_circles`
/// circle marks, Tetrad otherwise.
enum class MdgMode { Auto, Tetrad, Exact };

std::string_view to_string(MdgMode mode);
std::optional<MdgMode> mdg_mode_from_string(std::string_view text);

struct MdgOptions {
  MdgMode mode = MdgMode::Auto;
  std::size_t max_observables = kDefaultMaxObservables;
  std::size_t max_circles = kDefaultMaxCircles;
};

/// Mode that `options.mode` resolves to for m.
MdgMode resolve_mode(const MixedGraph& m, const MdgOptions& options);

/// Marginal dependency graph of m.
///
/// Tetrad: IPG skeleton with circle marks; an unshielded A - B - C becomes a collider iff
/// no Z over the other observables separates A and C given {B} and Z, otherwise it is
/// recorded as a noncollider. Then, to a fixed point, a recorded noncollider with an
/// arrow at its center on one edge gets a tail at the center on the other (circles only).
///
/// Exact: common_marks over the completions of the skeleton that have an expansion with
/// the same d-separation signature as m. Throws InvariantError if none does.
MixedGraph mdg_of(const MixedGraph& m, const MdgOptions& options = {});

struct EquivalenceVerdict {
  bool equivalent = false;
  /// First differing signature entry when not equivalent (separated is m1's value).
  std::optional<SignatureEntry> witness;
  bool mdg_agreement = false;
};

/// Text for a witness, e.g. "A _||_ C | {} differs".
std::string describe_witness(const SignatureEntry& entry);

/// Equivalent iff the d-separation signatures match; mdg_agreement compares mdg_of in the
/// selected mode. Throws PreconditionError if the observable names differ.
EquivalenceVerdict semi_markov_equivalent(const MixedGraph& m1, const MixedGraph& m2,
                                          const MdgOptions& options = {});

/// Each X <-> Y of a correlated-error model becomes a latent K_XY with K_XY -> X and
/// K_XY -> Y; directed edges are copied.
MixedGraph pearl_to_dag(const MixedGraph& pm);

enum class PearlRule { Rule1, Rule2, Rule1Prime, Rule2Prime };

std::string_view to_string(PearlRule rule);
std::optional<PearlRule> pearl_rule_from_string(std::string_view text);

/// Side conditions of a rule for the designated edge between x and y. The edge must be
/// x -> y; rules 1 and 1' also accept x <-> y (the way back). "Neighbor" means joined by
/// <->. Throws PreconditionError for a missing or wrongly shaped edge.
bool pearl_rule_check(const MixedGraph& pm, std::string_view x, std::string_view y,
                      PearlRule rule);

/// Applies the rule: 1/1' swap x -> y and x <-> y, 2/2' reverse x -> y. Throws
/// PreconditionError if the check fails or the result has a directed cycle.
MixedGraph pearl_apply(const MixedGraph& pm, std::string_view x, std::string_view y,
                       PearlRule rule);

/// The reversal counterexample for rule 2, end to end.
struct CounterexampleReport {
  MixedGraph pearl_before{Role::Pearl};
  MixedGraph pearl_after{Role::Pearl};
  MixedGraph model_before;
  MixedGraph model_after;
  MixedGraph ipg_before{Role::Ipg};
  MixedGraph ipg_after{Role::Ipg};
  /// Adjacencies of ipg_after missing from ipg_before, as name pairs (a < b).
  std::vector<std::pair<std::string, std::string>> gained;
  std::vector<std::pair<std::string, std::string>> lost;
  EquivalenceVerdict verdict;

  std::string describe() const;
};

CounterexampleReport counterexample_report();

}  // namespace semimarkov
