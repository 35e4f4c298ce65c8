#include "semimarkov/separation.hpp"

#include <algorithm>

namespace semimarkov {

namespace {

void require_marks(const MixedGraph& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (m.adjacent(i, j) && (m.mark(i, j) == Mark::Circle || m.mark(j, i) == Mark::Circle)) {
        throw PreconditionError("d-separation is undefined on circle-marked edges");
      }
    }
  }
}

VertexSet names_to_set(const MixedGraph& m, const std::vector<std::string>& names) {
  VertexSet s = 0;
  for (const auto& n : names) s |= bit(m.index(n));
  return s;
}

void check_query(const MixedGraph& m, std::size_t a, std::size_t b, VertexSet w) {
  if (a == b) throw PreconditionError("d-separation endpoints must differ");
  if (contains(w, a) || contains(w, b)) {
    throw PreconditionError("conditioning set must exclude the endpoints");
  }
  require_marks(m);
}

}  // namespace

bool is_collider_on(const MixedGraph& g, const Path& path, std::string_view v) {
  const auto& vs = path.vertices;
  auto it = std::find(vs.begin(), vs.end(), v);
  if (it == vs.end()) throw PreconditionError("'" + std::string(v) + "' is not on the path");
  const auto k = static_cast<std::size_t>(it - vs.begin());
  if (k == 0 || k + 1 == vs.size()) {
    throw PreconditionError("'" + std::string(v) + "' is an endpoint of the path");
  }
  const auto center = g.index(v);
  const auto prev = g.index(vs[k - 1]);
  const auto next = g.index(vs[k + 1]);
  if (!g.adjacent(prev, center) || !g.adjacent(center, next)) {
    throw PreconditionError("path is not a path of the graph");
  }
  return g.mark(prev, center) == Mark::Arrow && g.mark(next, center) == Mark::Arrow;
}

bool d_separated(const MixedGraph& m, std::size_t a, std::size_t b, VertexSet w) {
  check_query(m, a, b, w);
  const auto anc = ancestor_sets(m);
  VertexSet active_colliders = 0;  // vertices with a descendant in w
  for_each_bit(w, [&](std::size_t x) { active_colliders |= anc[x]; });

  const std::size_t n = m.size();
  std::vector<VertexSet> nbrs(n);
  for (std::size_t i = 0; i < n; ++i) nbrs[i] = m.neighbors(i);

  // visited[head][v]: v was reached with (head ? arrow : tail/none) at v.
  VertexSet visited[2] = {0, 0};
  std::vector<std::pair<std::size_t, bool>> stack;
  for_each_bit(nbrs[a], [&](std::size_t u) {
    const bool head = m.mark(a, u) == Mark::Arrow;
    if (!contains(visited[head], u)) {
      visited[head] |= bit(u);
      stack.emplace_back(u, head);
    }
  });
  while (!stack.empty()) {
    auto [v, head] = stack.back();
    stack.pop_back();
    if (v == b) return false;
    bool found = false;
    for_each_bit(nbrs[v] & ~bit(a), [&](std::size_t x) {
      if (found) return;
      const bool collider = head && m.mark(x, v) == Mark::Arrow;
      const bool pass = collider ? contains(active_colliders, v) : !contains(w, v);
      if (!pass) return;
      const bool next_head = m.mark(v, x) == Mark::Arrow;
      if (contains(visited[next_head], x)) return;
      if (x == b) {
        found = true;
        return;
      }
      visited[next_head] |= bit(x);
      stack.emplace_back(x, next_head);
    });
    if (found) return false;
  }
  return true;
}

bool d_separated(const MixedGraph& m, std::string_view a, std::string_view b,
                 const std::vector<std::string>& w) {
  return d_separated(m, m.index(a), m.index(b), names_to_set(m, w));
}

bool d_separated_oracle(const MixedGraph& m, std::size_t a, std::size_t b, VertexSet w) {
  check_query(m, a, b, w);
  const std::size_t n = m.size();
  // Descendants (including the vertex itself) by forward search over children.
  std::vector<VertexSet> descendants(n);
  for (std::size_t v = 0; v < n; ++v) {
    VertexSet seen = bit(v);
    std::vector<std::size_t> todo{v};
    while (!todo.empty()) {
      const auto u = todo.back();
      todo.pop_back();
      for_each_bit(m.children(u) & ~seen, [&](std::size_t c) {
        seen |= bit(c);
        todo.push_back(c);
      });
    }
    descendants[v] = seen;
  }
  for (const auto& path : simple_paths(m, a, b)) {
    bool connecting = true;
    for (std::size_t k = 1; k + 1 < path.size() && connecting; ++k) {
      const auto v = path[k];
      const bool collider =
          m.mark(path[k - 1], v) == Mark::Arrow && m.mark(path[k + 1], v) == Mark::Arrow;
      connecting = collider ? (descendants[v] & w) != 0 : !contains(w, v);
    }
    if (connecting) return false;
  }
  return true;
}

bool d_separated_oracle(const MixedGraph& m, std::string_view a, std::string_view b,
                        const std::vector<std::string>& w) {
  return d_separated_oracle(m, m.index(a), m.index(b), names_to_set(m, w));
}

Signature::Signature(std::vector<std::string> observables)
    : observables_(std::move(observables)) {
  std::sort(observables_.begin(), observables_.end());
  const std::size_t n = observables_.size();
  table_.assign(n * (n - (n > 0 ? 1 : 0)) / 2, std::vector<std::uint8_t>(std::size_t{1} << n, 0));
}

std::size_t Signature::pair_index(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  const std::size_t n = observables_.size();
  // Row-major index of (a, b) in the strict upper triangle.
  return a * n - a * (a + 1) / 2 + (b - a - 1);
}

bool Signature::separated(std::size_t a, std::size_t b, VertexSet w) const {
  return table_[pair_index(a, b)][w] != 0;
}

void Signature::set(std::size_t a, std::size_t b, VertexSet w, bool separated) {
  table_[pair_index(a, b)][w] = separated ? 1 : 0;
}

bool Signature::separated(std::string_view a, std::string_view b,
                          const std::vector<std::string>& w) const {
  auto pos = [&](std::string_view name) {
    auto it = std::lower_bound(observables_.begin(), observables_.end(), name);
    if (it == observables_.end() || *it != name) {
      throw PreconditionError("'" + std::string(name) + "' is not an observable of the signature");
    }
    return static_cast<std::size_t>(it - observables_.begin());
  };
  const auto ia = pos(a);
  const auto ib = pos(b);
  if (ia == ib) throw PreconditionError("signature pair must be two distinct observables");
  VertexSet set = 0;
  for (const auto& x : w) set |= bit(pos(x));
  if (contains(set, ia) || contains(set, ib)) {
    throw PreconditionError("conditioning set must exclude the pair");
  }
  return separated(ia, ib, set);
}

std::vector<VertexSet> Signature::subset_order(std::size_t k) {
  std::vector<VertexSet> subsets;
  for (VertexSet s = 0; s < (VertexSet{1} << k); ++s) subsets.push_back(s);
  std::sort(subsets.begin(), subsets.end(), [](VertexSet x, VertexSet y) {
    const int px = std::popcount(x);
    const int py = std::popcount(y);
    if (px != py) return px < py;
    // Lexicographic on ascending element lists.
    while (x != 0 && y != 0) {
      const int lx = std::countr_zero(x);
      const int ly = std::countr_zero(y);
      if (lx != ly) return lx < ly;
      x &= x - 1;
      y &= y - 1;
    }
    return false;
  });
  return subsets;
}

std::vector<SignatureEntry> Signature::entries() const {
  std::vector<SignatureEntry> out;
  const std::size_t n = observables_.size();
  const auto order = subset_order(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (VertexSet w : order) {
        if (contains(w, a) || contains(w, b)) continue;
        SignatureEntry e{observables_[a], observables_[b], {}, separated(a, b, w)};
        for_each_bit(w, [&](std::size_t x) { e.w.push_back(observables_[x]); });
        out.push_back(std::move(e));
      }
    }
  }
  return out;
}

std::optional<SignatureEntry> Signature::first_difference(const Signature& other) const {
  if (observables_ != other.observables_) {
    throw PreconditionError("signatures over different observables are not comparable");
  }
  const std::size_t n = observables_.size();
  const auto order = subset_order(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (VertexSet w : order) {
        if (contains(w, a) || contains(w, b)) continue;
        if (separated(a, b, w) == other.separated(a, b, w)) continue;
        SignatureEntry e{observables_[a], observables_[b], {}, separated(a, b, w)};
        for_each_bit(w, [&](std::size_t x) { e.w.push_back(observables_[x]); });
        return e;
      }
    }
  }
  return std::nullopt;
}

Signature d_separation_signature(const MixedGraph& m, std::size_t max_observables) {
  auto names = m.observable_names();
  if (names.size() < 2) throw PreconditionError("a signature needs at least two observables");
  if (names.size() > max_observables) {
    throw BoundError("signature over " + std::to_string(names.size()) +
                     " observables exceeds the bound of " + std::to_string(max_observables));
  }
  Signature sig(names);
  const std::size_t n = names.size();
  std::vector<std::size_t> graph_index(n);
  for (std::size_t k = 0; k < n; ++k) graph_index[k] = m.index(names[k]);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (VertexSet w = 0; w < (VertexSet{1} << n); ++w) {
        if (contains(w, a) || contains(w, b)) continue;
        VertexSet gw = 0;
        for_each_bit(w, [&](std::size_t x) { gw |= bit(graph_index[x]); });
        sig.set(a, b, w, d_separated(m, graph_index[a], graph_index[b], gw));
      }
    }
  }
  return sig;
}

InducingClassification classify_inducing(const MixedGraph& m, VertexSet s, std::size_t a,
                                         std::size_t b, const std::vector<VertexSet>& ancestors) {
  const VertexSet anc_ab = ancestors[a] | ancestors[b];
  const std::size_t n = m.size();
  std::vector<VertexSet> nbrs(n);
  for (std::size_t i = 0; i < n; ++i) nbrs[i] = m.neighbors(i);

  InducingClassification out;
  // Depth-first over simple paths from a, pruning as soon as an interior vertex fails.
  auto dfs = [&](auto&& self, std::size_t prev, std::size_t u, VertexSet visited,
                 bool into_a) -> bool {
    const bool head_at_u = m.mark(prev, u) == Mark::Arrow;
    bool done = false;
    for_each_bit(nbrs[u] & ~visited, [&](std::size_t x) {
      if (done) return;
      const bool collider = head_at_u && m.mark(x, u) == Mark::Arrow;
      const bool ok = collider ? contains(anc_ab, u) : !contains(s, u);
      if (!ok) return;
      if (x == b) {
        out.exists = true;
        out.into_a |= into_a;
        out.into_b |= m.mark(u, b) == Mark::Arrow;
        done = out.into_a && out.into_b;
        return;
      }
      done = self(self, u, x, visited | bit(x), into_a);
    });
    return done;
  };
  for_each_bit(nbrs[a], [&](std::size_t u) {
    if (out.into_a && out.into_b) return;
    const bool into_a = m.mark(u, a) == Mark::Arrow;
    if (u == b) {
      out.exists = true;
      out.into_a |= into_a;
      out.into_b |= m.mark(a, b) == Mark::Arrow;
      return;
    }
    dfs(dfs, a, u, bit(a) | bit(u), into_a);
  });
  return out;
}

InducingClassification classify_inducing_oracle(const MixedGraph& m, VertexSet s, std::size_t a,
                                                std::size_t b) {
  const auto anc = ancestor_sets(m);
  InducingClassification out;
  for (const auto& path : simple_paths(m, a, b)) {
    bool qualifies = true;
    for (std::size_t k = 1; k + 1 < path.size() && qualifies; ++k) {
      const auto v = path[k];
      const bool collider =
          m.mark(path[k - 1], v) == Mark::Arrow && m.mark(path[k + 1], v) == Mark::Arrow;
      if (contains(s, v) && !collider) qualifies = false;
      if (collider && !contains(anc[a] | anc[b], v)) qualifies = false;
    }
    if (!qualifies) continue;
    const bool into_a = m.mark(path[1], a) == Mark::Arrow;
    const bool into_b = m.mark(path[path.size() - 2], b) == Mark::Arrow;
    if (!into_a && !into_b) continue;
    out.exists = true;
    out.into_a |= into_a;
    out.into_b |= into_b;
  }
  return out;
}

InducingClassification classify_inducing(const MixedGraph& m, const std::vector<std::string>& s,
                                         std::string_view a, std::string_view b) {
  const auto ia = m.index(a);
  const auto ib = m.index(b);
  const auto set = names_to_set(m, s);
  if (ia == ib) throw PreconditionError("inducing path endpoints must differ");
  if (!contains(set, ia) || !contains(set, ib)) {
    throw PreconditionError("inducing path endpoints must belong to the relative set");
  }
  if ((set & ~m.observables()) != 0) {
    throw PreconditionError("the relative set must contain observables only");
  }
  require_marks(m);
  return classify_inducing(m, set, ia, ib, ancestor_sets(m));
}

MixedGraph ipg_of(const MixedGraph& m, const std::vector<std::string>& s) {
  if (s.empty()) throw PreconditionError("an IPG needs at least one vertex");
  require_marks(m);
  const VertexSet set = names_to_set(m, s);
  if ((set & ~m.observables()) != 0) {
    throw PreconditionError("the IPG vertex set must contain observables only");
  }
  const auto anc = ancestor_sets(m);
  MixedGraph g(Role::Ipg);
  std::vector<std::size_t> members;
  for_each_bit(set, [&](std::size_t i) {
    g.add_vertex(m.name(i));
    members.push_back(i);
  });
  // g's vertex order equals m's name order restricted to the set.
  for (std::size_t x = 0; x < members.size(); ++x) {
    for (std::size_t y = x + 1; y < members.size(); ++y) {
      const auto c = classify_inducing(m, set, members[x], members[y], anc);
      if (!c.exists) continue;
      g.add_edge(x, y, c.into_a ? Mark::Arrow : Mark::Tail, c.into_b ? Mark::Arrow : Mark::Tail);
    }
  }
  return g;
}

MixedGraph ipg_of(const MixedGraph& m) { return ipg_of(m, m.observable_names()); }

bool inducing_iff_no_separator_check(const MixedGraph& m, const std::vector<std::string>& s,
                                     std::string_view a, std::string_view b) {
  const auto c = classify_inducing(m, s, a, b);
  const auto ia = m.index(a);
  const auto ib = m.index(b);
  const VertexSet rest = names_to_set(m, s) & ~bit(ia) & ~bit(ib);
  bool separable = false;
  // Enumerate every subset of `rest`.
  VertexSet w = 0;
  do {
    if (d_separated(m, ia, ib, w)) {
      separable = true;
      break;
    }
    w = (w - rest) & rest;
  } while (w != 0);
  return c.exists == !separable;
}

}  // namespace semimarkov
