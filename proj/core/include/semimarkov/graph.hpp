#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semimarkov/errors.hpp"

namespace semimarkov {

/// Bit set over vertex indices of one graph. Graphs hold at most 64 vertices.
using VertexSet = std::uint64_t;
inline constexpr std::size_t kMaxVertices = 64;

inline constexpr VertexSet bit(std::size_t i) { return VertexSet{1} << i; }
inline constexpr bool contains(VertexSet s, std::size_t i) { return (s >> i) & 1U; }

template <typename F>
void for_each_bit(VertexSet s, F&& f) {
  while (s != 0) {
    f(static_cast<std::size_t>(std::countr_zero(s)));
    s &= s - 1;
  }
}

/// Endpoint mark of an edge.
enum class Mark : std::uint8_t { Tail, Arrow, Circle };

enum class VertexKind : std::uint8_t { Observable, Latent };

/// What a graph stands for; each role has its own invariants (see MixedGraph::validate).
enum class Role : std::uint8_t { CausalDag, Ipg, Mdg, Pearl };

std::string_view to_string(Role role);
std::optional<Role> role_from_string(std::string_view text);
std::string_view to_string(Mark mark);

struct Vertex {
  std::string name;
  VertexKind kind = VertexKind::Observable;

  bool operator==(const Vertex&) const = default;
};

/// Edge between two named vertices, with one mark per endpoint.
struct Edge {
  std::string u;
  std::string v;
  Mark at_u = Mark::Tail;
  Mark at_v = Mark::Arrow;
  bool hidden = false;

  /// Mark at the named endpoint. Throws PreconditionError if it is not an endpoint.
  Mark mark_at(std::string_view endpoint) const;
  bool operator==(const Edge&) const = default;
};

/// Unshielded triple a - center - c, stored with a < c.
struct Triple {
  std::string a;
  std::string center;
  std::string c;

  auto operator<=>(const Triple&) const = default;
};

/// Simple path: consecutive vertices are adjacent, no vertex repeats.
struct Path {
  std::vector<std::string> vertices;
  std::vector<Edge> edges;

  bool operator==(const Path&) const = default;
};

/// Vertex/edge container shared by causal DAGs, IPGs, MDGs and correlated-error models.
///
/// Vertices are kept sorted by name, so vertex indices are canonical. At most one
/// edge joins any pair of vertices; the edge carries a mark at each endpoint.
/// Mutators check local invariants (no self-loops, no duplicates); role-level
/// invariants are checked by validate().
class MixedGraph {
 public:
  explicit MixedGraph(Role role = Role::CausalDag) : role_(role) {}

  Role role() const noexcept { return role_; }
  /// Same vertices and edges under another role. Noncollider triples are dropped
  /// unless the new role is Mdg.
  MixedGraph with_role(Role role) const;

  std::size_t size() const noexcept { return vertices_.size(); }
  bool empty() const noexcept { return vertices_.empty(); }
  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  const std::string& name(std::size_t i) const { return vertices_[i].name; }
  VertexKind kind(std::size_t i) const { return vertices_[i].kind; }
  bool is_latent(std::size_t i) const { return vertices_[i].kind == VertexKind::Latent; }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Index of a vertex; throws PreconditionError for unknown names.
  std::size_t index(std::string_view name) const;

  VertexSet observables() const noexcept { return observables_; }
  VertexSet latents() const noexcept;
  std::vector<std::string> observable_names() const;

  /// Inserts a vertex, keeping name order. Indices of later vertices shift by one.
  void add_vertex(std::string name, VertexKind kind = VertexKind::Observable);
  /// Deletes a vertex and its incident edges and triples.
  void remove_vertex(std::size_t i);

  bool adjacent(std::size_t i, std::size_t j) const { return cell(i, j) != 0; }
  /// Mark at j on the edge i - j, if the edge exists.
  std::optional<Mark> mark_at(std::size_t i, std::size_t j) const;
  /// Mark at j on the edge i - j; the edge must exist.
  Mark mark(std::size_t i, std::size_t j) const { return static_cast<Mark>(cell(i, j) - 1); }
  bool hidden(std::size_t i, std::size_t j) const { return hidden_[i * size() + j] != 0; }

  /// i -> j (tail at i, arrow at j).
  bool directed(std::size_t i, std::size_t j) const {
    return adjacent(i, j) && mark(j, i) == Mark::Tail && mark(i, j) == Mark::Arrow;
  }
  /// i <-> j.
  bool bidirected(std::size_t i, std::size_t j) const {
    return adjacent(i, j) && mark(j, i) == Mark::Arrow && mark(i, j) == Mark::Arrow;
  }

  void add_edge(std::size_t i, std::size_t j, Mark at_i, Mark at_j, bool hidden = false);
  void add_edge(std::string_view u, std::string_view v, Mark at_u, Mark at_v,
                bool hidden = false) {
    add_edge(index(u), index(v), at_u, at_v, hidden);
  }
  void add_directed(std::string_view u, std::string_view v, bool hidden = false) {
    add_edge(u, v, Mark::Tail, Mark::Arrow, hidden);
  }
  void add_bidirected(std::string_view u, std::string_view v) {
    add_edge(u, v, Mark::Arrow, Mark::Arrow);
  }
  /// Replaces the marks of an existing edge.
  void set_marks(std::size_t i, std::size_t j, Mark at_i, Mark at_j);
  void set_hidden(std::size_t i, std::size_t j, bool hidden);
  void remove_edge(std::size_t i, std::size_t j);

  std::size_t num_edges() const noexcept { return num_edges_; }
  /// Edges in canonical order (see format.hpp for the orientation convention).
  std::vector<Edge> edges() const;

  /// Vertices j with an edge j -> i.
  VertexSet parents(std::size_t i) const;
  /// Vertices j with an edge i -> j.
  VertexSet children(std::size_t i) const;
  VertexSet neighbors(std::size_t i) const;
  /// Vertices j with an edge i <-> j.
  VertexSet spouses(std::size_t i) const;

  const std::vector<Triple>& noncolliders() const noexcept { return noncolliders_; }
  /// Records a definite non-collider a - center - c (Mdg role only).
  void add_noncollider(std::string_view a, std::string_view center, std::string_view c);
  bool is_noncollider(std::size_t a, std::size_t center, std::size_t c) const;

  /// Throws InvariantError if the graph breaks an invariant of its role.
  void validate() const;

  bool operator==(const MixedGraph& other) const;

 private:
  std::uint8_t cell(std::size_t i, std::size_t j) const { return marks_[i * size() + j]; }
  std::uint8_t& cell(std::size_t i, std::size_t j) { return marks_[i * size() + j]; }
  void rebuild_masks();

  Role role_;
  std::vector<Vertex> vertices_;
  // marks_[i * n + j] = 1 + mark at j of the edge i - j, 0 when not adjacent.
  std::vector<std::uint8_t> marks_;
  std::vector<std::uint8_t> hidden_;
  std::vector<Triple> noncolliders_;
  VertexSet observables_ = 0;
  std::size_t num_edges_ = 0;
};

/// Canonical order of two names for an edge line: tail before circle before arrow,
/// ties broken by name.
Edge oriented_edge(const MixedGraph& g, std::size_t i, std::size_t j);

/// ancestors[v] = every u with a directed path u -> ... -> v, including v itself.
/// Only tail-arrow edges count. Works on cyclic graphs.
std::vector<VertexSet> ancestor_sets(const MixedGraph& g);
std::vector<std::string> ancestors(const MixedGraph& g, std::string_view v);

bool is_acyclic_directed(const MixedGraph& g);

/// Every simple path between a and b regardless of marks, sorted lexicographically
/// by vertex-name sequence.
std::vector<Path> enumerate_simple_paths(const MixedGraph& g, std::string_view a,
                                         std::string_view b);

/// Index form of enumerate_simple_paths, in discovery order.
std::vector<std::vector<std::size_t>> simple_paths(const MixedGraph& g, std::size_t a,
                                                   std::size_t b);

/// True iff a bijection fixing observables by name and mapping latents to latents
/// carries the edges of m1 exactly onto those of m2. Hidden flags are ignored.
bool isomorphic_modulo_latents(const MixedGraph& m1, const MixedGraph& m2);

/// Text that is equal for two graphs iff they are isomorphic modulo latents.
std::string canonical_form_modulo_latents(const MixedGraph& m);

/// Fresh latent name derived from `stem`, unused in g.
std::string fresh_name(const MixedGraph& g, std::string stem);

}  // namespace semimarkov
