#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "semimarkov/graph.hpp"

namespace semimarkov {

inline constexpr std::size_t kDefaultMaxVertices = 12;

/// RE: drops the directed edge from -> to. Throws PreconditionError if absent.
MixedGraph remove_edge(const MixedGraph& m, std::string_view from, std::string_view to);

/// CV: rewrites every endpoint v1 to v2, merges duplicate edges, drops self-loops and
/// deletes v1. A merged edge stays hidden only if all its sources were hidden.
/// Throws PreconditionError when v1 == v2, a name is unknown or the result is cyclic.
MixedGraph collapse_vertices(const MixedGraph& m, std::string_view v1, std::string_view v2);

/// EL / EL*: [v1 -> v2, l1 -> v2, l1 -> v3] becomes [v1 -> l1, l1 -> v2, l1 -> v3], plus a
/// fresh latent l2 -> v2, l2 -> v3 unless `star`. Throws PreconditionError when the
/// pattern is absent or the result is cyclic.
MixedGraph embed_latent(const MixedGraph& m, std::string_view v1, std::string_view v2,
                        std::string_view v3, std::string_view l1, bool star);

/// CL: [l1 -> v, l2 -> v] becomes [l1 -> l2, l2 -> v]. Throws PreconditionError when the
/// pattern is absent or the result is cyclic.
MixedGraph connect_latents(const MixedGraph& m, std::string_view l1, std::string_view l2,
                           std::string_view v);

enum class HiddenEdge { None, AToB, BToA };

/// Hidden-edge choice for one bidirected IPG edge a <-> b (a < b).
struct BidirectedChoice {
  std::string a;
  std::string b;
  HiddenEdge hidden = HiddenEdge::None;

  bool operator==(const BidirectedChoice&) const = default;
};

/// One entry per bidirected edge of the source IPG, in edge order.
using ExpansionChoice = std::vector<BidirectedChoice>;

/// Name of the latent standing for a <-> b in an expansion.
std::string expansion_latent_name(std::string_view a, std::string_view b);

/// Every choice for g, ordered with None < AToB < BToA and the first edge varying slowest.
std::vector<ExpansionChoice> expansion_choices(const MixedGraph& g);

/// Candidate model for one choice, unchecked: A -> B per ip->, L_AB -> A and L_AB -> B per
/// ip<->, plus the chosen hidden edge. May be cyclic or entail another IPG.
MixedGraph build_expansion(const MixedGraph& g, const ExpansionChoice& choice);

/// Candidates whose IPG is g, in expansion_choices order. Throws PreconditionError if
/// g is not a valid IPG.
std::vector<MixedGraph> expansions(const MixedGraph& g);

/// True iff removing from -> to changes the IPG of m.
bool is_essential_edge(const MixedGraph& m, std::string_view from, std::string_view to);

/// Pattern test on an expansion: A -> C <- L -> B with C observable, L latent and C an
/// ancestor of B. Throws PreconditionError if m1 is not expansion-shaped or the edge is
/// not a visible observable edge.
bool lemma4_nonessential(const MixedGraph& m1, std::string_view from, std::string_view to);

/// All models other than m reachable by RE/CV steps with the same IPG, deduplicated
/// modulo latent names and sorted by canonical form. Throws BoundError when m has more
/// than `max_vertices` vertices.
std::vector<MixedGraph> enumerate_reductions(const MixedGraph& m,
                                             std::size_t max_vertices = kDefaultMaxVertices);

/// True iff enumerate_reductions(m) is empty (stops at the first reduction found).
bool is_minimal(const MixedGraph& m, std::size_t max_vertices = kDefaultMaxVertices);

// Pipeline stages. Each keeps the IPG of its input fixed.

/// Removes non-essential visible observable edges until none is left.
MixedGraph prune_nonessential_edges(const MixedGraph& m);
/// End states of every order of removing latents (with their edges).
std::vector<MixedGraph> latent_removals(const MixedGraph& m);
/// End states of every order of collapsing latent pairs.
std::vector<MixedGraph> latent_collapses(const MixedGraph& m);
/// Every state reachable through EL / EL* steps, excluding m. A step is accepted when the
/// IPG is unchanged and the result is minimal.
std::vector<MixedGraph> latent_embeddings(const MixedGraph& m);
/// Every state reachable through CL steps, excluding m, accepted as for EL.
std::vector<MixedGraph> latent_connections(const MixedGraph& m);

/// Minimal models entailing g, deduplicated modulo latent names and sorted by canonical
/// form. Throws PreconditionError for an invalid IPG and BoundError when an expansion
/// exceeds `max_vertices`.
std::vector<MixedGraph> minimal_models(const MixedGraph& g,
                                       std::size_t max_vertices = kDefaultMaxVertices);

}  // namespace semimarkov
