#include "semimarkov/graph.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <numeric>
#include <sstream>

namespace semimarkov {

namespace {

int mark_rank(Mark m) {
  switch (m) {
    case Mark::Tail:
      return 0;
    case Mark::Circle:
      return 1;
    case Mark::Arrow:
      return 2;
  }
  return 0;
}

}  // namespace

std::string_view to_string(Role role) {
  switch (role) {
    case Role::CausalDag:
      return "causal-dag";
    case Role::Ipg:
      return "ipg";
    case Role::Mdg:
      return "mdg";
    case Role::Pearl:
      return "pearl";
  }
  return "causal-dag";
}

std::optional<Role> role_from_string(std::string_view text) {
  for (Role r : {Role::CausalDag, Role::Ipg, Role::Mdg, Role::Pearl}) {
    if (to_string(r) == text) return r;
  }
  return std::nullopt;
}

std::string_view to_string(Mark mark) {
  switch (mark) {
    case Mark::Tail:
      return "tail";
    case Mark::Arrow:
      return "arrow";
    case Mark::Circle:
      return "circle";
  }
  return "tail";
}

Mark Edge::mark_at(std::string_view endpoint) const {
  if (endpoint == u) return at_u;
  if (endpoint == v) return at_v;
  throw PreconditionError("'" + std::string(endpoint) + "' is not an endpoint of edge " + u +
                          " - " + v);
}

MixedGraph MixedGraph::with_role(Role role) const {
  MixedGraph g = *this;
  g.role_ = role;
  if (role != Role::Mdg) g.noncolliders_.clear();
  return g;
}

std::optional<std::size_t> MixedGraph::find(std::string_view name) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), name,
                             [](const Vertex& v, std::string_view n) { return v.name < n; });
  if (it == vertices_.end() || it->name != name) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

std::size_t MixedGraph::index(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw PreconditionError("unknown vertex '" + std::string(name) + "'");
}

VertexSet MixedGraph::latents() const noexcept {
  const VertexSet all = size() == 64 ? ~VertexSet{0} : bit(size()) - 1;
  return all & ~observables_;
}

std::vector<std::string> MixedGraph::observable_names() const {
  std::vector<std::string> out;
  for (const auto& v : vertices_) {
    if (v.kind == VertexKind::Observable) out.push_back(v.name);
  }
  return out;
}

void MixedGraph::add_vertex(std::string name, VertexKind kind) {
  if (name.empty()) throw InvariantError("vertex names must be nonempty");
  if (find(name)) throw InvariantError("duplicate vertex '" + name + "'");
  if (size() >= kMaxVertices) {
    throw BoundError("graphs hold at most " + std::to_string(kMaxVertices) + " vertices");
  }
  const std::size_t n = size();
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), name,
                             [](const Vertex& v, const std::string& key) { return v.name < key; });
  const auto pos = static_cast<std::size_t>(it - vertices_.begin());
  vertices_.insert(it, Vertex{std::move(name), kind});

  std::vector<std::uint8_t> marks((n + 1) * (n + 1), 0);
  std::vector<std::uint8_t> hidden((n + 1) * (n + 1), 0);
  auto shift = [pos](std::size_t k) { return k < pos ? k : k + 1; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      marks[shift(i) * (n + 1) + shift(j)] = marks_[i * n + j];
      hidden[shift(i) * (n + 1) + shift(j)] = hidden_[i * n + j];
    }
  }
  marks_ = std::move(marks);
  hidden_ = std::move(hidden);
  rebuild_masks();
}

void MixedGraph::remove_vertex(std::size_t victim) {
  const std::size_t n = size();
  const std::string gone = vertices_[victim].name;
  std::vector<std::uint8_t> marks((n - 1) * (n - 1), 0);
  std::vector<std::uint8_t> hidden((n - 1) * (n - 1), 0);
  auto shift = [victim](std::size_t k) { return k < victim ? k : k - 1; };
  for (std::size_t i = 0; i < n; ++i) {
    if (i == victim) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == victim) continue;
      marks[shift(i) * (n - 1) + shift(j)] = marks_[i * n + j];
      hidden[shift(i) * (n - 1) + shift(j)] = hidden_[i * n + j];
    }
  }
  vertices_.erase(vertices_.begin() + static_cast<std::ptrdiff_t>(victim));
  marks_ = std::move(marks);
  hidden_ = std::move(hidden);
  std::erase_if(noncolliders_, [&](const Triple& t) {
    return t.a == gone || t.center == gone || t.c == gone;
  });
  rebuild_masks();
}

void MixedGraph::rebuild_masks() {
  observables_ = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (vertices_[i].kind == VertexKind::Observable) observables_ |= bit(i);
  }
  num_edges_ = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) {
      if (adjacent(i, j)) ++num_edges_;
    }
  }
}

std::optional<Mark> MixedGraph::mark_at(std::size_t i, std::size_t j) const {
  if (!adjacent(i, j)) return std::nullopt;
  return mark(i, j);
}

void MixedGraph::add_edge(std::size_t i, std::size_t j, Mark at_i, Mark at_j, bool hidden) {
  if (i == j) throw InvariantError("self-loop on '" + name(i) + "'");
  if (adjacent(i, j)) {
    throw InvariantError("duplicate edge between '" + name(i) + "' and '" + name(j) + "'");
  }
  cell(j, i) = static_cast<std::uint8_t>(static_cast<int>(at_i) + 1);
  cell(i, j) = static_cast<std::uint8_t>(static_cast<int>(at_j) + 1);
  hidden_[i * size() + j] = hidden_[j * size() + i] = hidden ? 1 : 0;
  ++num_edges_;
}

void MixedGraph::set_marks(std::size_t i, std::size_t j, Mark at_i, Mark at_j) {
  if (!adjacent(i, j)) {
    throw PreconditionError("no edge between '" + name(i) + "' and '" + name(j) + "'");
  }
  cell(j, i) = static_cast<std::uint8_t>(static_cast<int>(at_i) + 1);
  cell(i, j) = static_cast<std::uint8_t>(static_cast<int>(at_j) + 1);
}

void MixedGraph::set_hidden(std::size_t i, std::size_t j, bool hidden) {
  if (!adjacent(i, j)) {
    throw PreconditionError("no edge between '" + name(i) + "' and '" + name(j) + "'");
  }
  hidden_[i * size() + j] = hidden_[j * size() + i] = hidden ? 1 : 0;
}

void MixedGraph::remove_edge(std::size_t i, std::size_t j) {
  if (!adjacent(i, j)) {
    throw PreconditionError("no edge between '" + name(i) + "' and '" + name(j) + "'");
  }
  cell(i, j) = cell(j, i) = 0;
  hidden_[i * size() + j] = hidden_[j * size() + i] = 0;
  --num_edges_;
}

Edge oriented_edge(const MixedGraph& g, std::size_t i, std::size_t j) {
  Mark at_i = g.mark(j, i);
  Mark at_j = g.mark(i, j);
  const bool swap = mark_rank(at_i) > mark_rank(at_j) ||
                    (mark_rank(at_i) == mark_rank(at_j) && g.name(i) > g.name(j));
  if (swap) {
    std::swap(i, j);
    std::swap(at_i, at_j);
  }
  return Edge{g.name(i), g.name(j), at_i, at_j, g.hidden(i, j)};
}

std::vector<Edge> MixedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges_);
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) {
      if (adjacent(i, j)) out.push_back(oriented_edge(*this, i, j));
    }
  }
  std::sort(out.begin(), out.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.u, x.v) < std::tie(y.u, y.v);
  });
  return out;
}

VertexSet MixedGraph::parents(std::size_t i) const {
  VertexSet s = 0;
  for (std::size_t j = 0; j < size(); ++j) {
    if (directed(j, i)) s |= bit(j);
  }
  return s;
}

VertexSet MixedGraph::children(std::size_t i) const {
  VertexSet s = 0;
  for (std::size_t j = 0; j < size(); ++j) {
    if (directed(i, j)) s |= bit(j);
  }
  return s;
}

VertexSet MixedGraph::neighbors(std::size_t i) const {
  VertexSet s = 0;
  for (std::size_t j = 0; j < size(); ++j) {
    if (adjacent(i, j)) s |= bit(j);
  }
  return s;
}

VertexSet MixedGraph::spouses(std::size_t i) const {
  VertexSet s = 0;
  for (std::size_t j = 0; j < size(); ++j) {
    if (bidirected(i, j)) s |= bit(j);
  }
  return s;
}

void MixedGraph::add_noncollider(std::string_view a, std::string_view center,
                                 std::string_view c) {
  index(a);
  index(center);
  index(c);
  Triple t{std::string(std::min(a, c)), std::string(center), std::string(std::max(a, c))};
  if (std::find(noncolliders_.begin(), noncolliders_.end(), t) == noncolliders_.end()) {
    noncolliders_.insert(std::upper_bound(noncolliders_.begin(), noncolliders_.end(), t), t);
  }
}

bool MixedGraph::is_noncollider(std::size_t a, std::size_t center, std::size_t c) const {
  if (a > c) std::swap(a, c);
  const Triple t{name(a), name(center), name(c)};
  return std::binary_search(noncolliders_.begin(), noncolliders_.end(), t);
}

void MixedGraph::validate() const {
  const std::string role_name(to_string(role_));
  for (std::size_t i = 0; i < size(); ++i) {
    if (role_ != Role::CausalDag && is_latent(i)) {
      throw InvariantError("latent vertex '" + name(i) + "' in a " + role_name + " graph");
    }
    for (std::size_t j = i + 1; j < size(); ++j) {
      if (!adjacent(i, j)) continue;
      const Mark mi = mark(j, i);
      const Mark mj = mark(i, j);
      const std::string pair = "'" + name(i) + "' - '" + name(j) + "'";
      if (mi == Mark::Tail && mj == Mark::Tail) {
        throw InvariantError("tail-tail edge " + pair);
      }
      const bool has_circle = mi == Mark::Circle || mj == Mark::Circle;
      if (role_ != Role::Mdg && has_circle) {
        throw InvariantError("circle mark on edge " + pair + " in a " + role_name + " graph");
      }
      if (role_ == Role::CausalDag && mi == Mark::Arrow && mj == Mark::Arrow) {
        throw InvariantError("bidirected edge " + pair + " in a causal-dag graph");
      }
      if (role_ != Role::CausalDag && hidden(i, j)) {
        throw InvariantError("hidden edge " + pair + " outside a causal-dag graph");
      }
      if (hidden(i, j) && !(directed(i, j) || directed(j, i))) {
        throw InvariantError("hidden edge " + pair + " must be tail-arrow");
      }
    }
  }
  if ((role_ == Role::CausalDag || role_ == Role::Pearl) && !is_acyclic_directed(*this)) {
    throw InvariantError("directed cycle in a " + role_name + " graph");
  }
  if (role_ != Role::Mdg && !noncolliders_.empty()) {
    throw InvariantError("noncollider triples are only allowed in mdg graphs");
  }
  for (const auto& t : noncolliders_) {
    const auto a = index(t.a);
    const auto b = index(t.center);
    const auto c = index(t.c);
    if (a == b || b == c || a == c || !adjacent(a, b) || !adjacent(b, c) || adjacent(a, c)) {
      throw InvariantError("noncollider " + t.a + " " + t.center + " " + t.c +
                           " is not an unshielded triple");
    }
  }
}

bool MixedGraph::operator==(const MixedGraph& other) const {
  return role_ == other.role_ && vertices_ == other.vertices_ && marks_ == other.marks_ &&
         hidden_ == other.hidden_ && noncolliders_ == other.noncolliders_;
}

std::vector<VertexSet> ancestor_sets(const MixedGraph& g) {
  const std::size_t n = g.size();
  std::vector<VertexSet> parents(n);
  for (std::size_t i = 0; i < n; ++i) parents[i] = g.parents(i);
  std::vector<VertexSet> anc(n);
  for (std::size_t v = 0; v < n; ++v) {
    VertexSet seen = bit(v);
    VertexSet frontier = bit(v);
    while (frontier != 0) {
      VertexSet next = 0;
      for_each_bit(frontier, [&](std::size_t u) { next |= parents[u]; });
      frontier = next & ~seen;
      seen |= next;
    }
    anc[v] = seen;
  }
  return anc;
}

std::vector<std::string> ancestors(const MixedGraph& g, std::string_view v) {
  const auto set = ancestor_sets(g)[g.index(v)];
  std::vector<std::string> out;
  for_each_bit(set, [&](std::size_t i) { out.push_back(g.name(i)); });
  return out;
}

bool is_acyclic_directed(const MixedGraph& g) {
  // Kahn's algorithm on the tail-arrow relation.
  const std::size_t n = g.size();
  std::vector<int> indegree(n, 0);
  for (std::size_t i = 0; i < n; ++i) indegree[i] = std::popcount(g.parents(i));
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::size_t removed = 0;
  while (!ready.empty()) {
    const auto u = ready.back();
    ready.pop_back();
    ++removed;
    for_each_bit(g.children(u), [&](std::size_t c) {
      if (--indegree[c] == 0) ready.push_back(c);
    });
  }
  return removed == n;
}

std::vector<std::vector<std::size_t>> simple_paths(const MixedGraph& g, std::size_t a,
                                                   std::size_t b) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> stack{a};
  std::vector<VertexSet> nbrs(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) nbrs[i] = g.neighbors(i);

  auto dfs = [&](auto&& self, std::size_t u, VertexSet visited) -> void {
    if (u == b) {
      out.push_back(stack);
      return;
    }
    for_each_bit(nbrs[u] & ~visited, [&](std::size_t w) {
      stack.push_back(w);
      self(self, w, visited | bit(w));
      stack.pop_back();
    });
  };
  dfs(dfs, a, bit(a));
  return out;
}

std::vector<Path> enumerate_simple_paths(const MixedGraph& g, std::string_view a,
                                         std::string_view b) {
  const auto ia = g.index(a);
  const auto ib = g.index(b);
  if (ia == ib) throw PreconditionError("path endpoints must differ");
  auto raw = simple_paths(g, ia, ib);
  std::sort(raw.begin(), raw.end());
  std::vector<Path> out;
  out.reserve(raw.size());
  for (const auto& p : raw) {
    Path path;
    for (std::size_t k = 0; k < p.size(); ++k) {
      path.vertices.push_back(g.name(p[k]));
      if (k + 1 < p.size()) {
        path.edges.push_back(
            Edge{g.name(p[k]), g.name(p[k + 1]), g.mark(p[k + 1], p[k]), g.mark(p[k], p[k + 1]),
                 g.hidden(p[k], p[k + 1])});
      }
    }
    out.push_back(std::move(path));
  }
  return out;
}

namespace {

std::vector<std::size_t> latent_indices(const MixedGraph& m) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.is_latent(i)) out.push_back(i);
  }
  return out;
}

bool same_observables(const MixedGraph& m1, const MixedGraph& m2) {
  return m1.observable_names() == m2.observable_names();
}

}  // namespace

bool isomorphic_modulo_latents(const MixedGraph& m1, const MixedGraph& m2) {
  if (!same_observables(m1, m2) || m1.size() != m2.size() || m1.num_edges() != m2.num_edges()) {
    return false;
  }
  const auto lat1 = latent_indices(m1);
  auto lat2 = latent_indices(m2);
  // Index map m1 -> m2: observables by name, latents by the current permutation.
  std::vector<std::size_t> map(m1.size());
  for (std::size_t i = 0; i < m1.size(); ++i) {
    if (!m1.is_latent(i)) map[i] = m2.index(m1.name(i));
  }
  do {
    for (std::size_t k = 0; k < lat1.size(); ++k) map[lat1[k]] = lat2[k];
    bool ok = true;
    for (std::size_t i = 0; i < m1.size() && ok; ++i) {
      for (std::size_t j = 0; j < m1.size() && ok; ++j) {
        ok = m1.mark_at(i, j) == m2.mark_at(map[i], map[j]);
      }
    }
    if (ok) return true;
  } while (std::next_permutation(lat2.begin(), lat2.end()));
  return false;
}

std::string canonical_form_modulo_latents(const MixedGraph& m) {
  const auto lat = latent_indices(m);
  // Invariant per latent: marks towards every observable, plus latent degree.
  std::vector<std::string> invariant(m.size());
  for (auto l : lat) {
    std::string s;
    std::size_t latent_degree[3] = {0, 0, 0};
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (!m.adjacent(l, j)) continue;
      const int at_l = static_cast<int>(m.mark(j, l));
      const int at_j = static_cast<int>(m.mark(l, j));
      if (m.is_latent(j)) {
        latent_degree[at_l]++;
      } else {
        s += m.name(j) + ':' + static_cast<char>('0' + at_l) + static_cast<char>('0' + at_j) + ',';
      }
    }
    s += '|' + std::to_string(latent_degree[0]) + '.' + std::to_string(latent_degree[1]) + '.' +
         std::to_string(latent_degree[2]);
    invariant[l] = std::move(s);
  }
  auto order = lat;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return invariant[x] < invariant[y]; });
  // Groups of latents with equal invariants are permuted among themselves.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t k = 0; k < order.size();) {
    std::size_t e = k + 1;
    while (e < order.size() && invariant[order[e]] == invariant[order[k]]) ++e;
    groups.emplace_back(k, e);
    k = e;
  }

  auto render = [&](const std::vector<std::size_t>& ordering) {
    std::vector<std::string> label(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m.is_latent(i)) label[i] = m.name(i);
    }
    for (std::size_t k = 0; k < ordering.size(); ++k) {
      label[ordering[k]] = "\x01" + std::to_string(k);
    }
    std::vector<std::string> lines;
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = 0; j < m.size(); ++j) {
        if (i == j || !m.adjacent(i, j)) continue;
        if (label[i] > label[j]) continue;
        lines.push_back(label[i] + ' ' + static_cast<char>('0' + static_cast<int>(m.mark(j, i))) +
                        static_cast<char>('0' + static_cast<int>(m.mark(i, j))) + ' ' + label[j]);
      }
    }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) out += l + ';';
    return out;
  };

  std::string header;
  for (const auto& name : m.observable_names()) header += name + ',';
  header += '#' + std::to_string(lat.size()) + '/';

  std::string best;
  bool first = true;
  auto recurse = [&](auto&& self, std::size_t group) -> void {
    if (group == groups.size()) {
      auto candidate = render(order);
      if (first || candidate < best) {
        best = std::move(candidate);
        first = false;
      }
      return;
    }
    auto [lo, hi] = groups[group];
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(lo),
              order.begin() + static_cast<std::ptrdiff_t>(hi));
    do {
      self(self, group + 1);
    } while (std::next_permutation(order.begin() + static_cast<std::ptrdiff_t>(lo),
                                   order.begin() + static_cast<std::ptrdiff_t>(hi)));
  };
  recurse(recurse, 0);
  return header + best;
}

std::string fresh_name(const MixedGraph& g, std::string stem) {
  if (!g.find(stem)) return stem;
  for (int k = 2;; ++k) {
    std::string candidate = stem + "_" + std::to_string(k);
    if (!g.find(candidate)) return candidate;
  }
}

}  // namespace semimarkov
