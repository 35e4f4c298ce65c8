#include "semimarkov/ipg_calculus.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "semimarkov/format.hpp"

namespace semimarkov {

namespace {

void require_ipg_marks(const MixedGraph& g) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      if (!g.adjacent(i, j)) continue;
      const Mark a = g.mark(j, i);
      const Mark b = g.mark(i, j);
      if (a == Mark::Circle || b == Mark::Circle || (a == Mark::Tail && b == Mark::Tail)) {
        throw PreconditionError("edge '" + g.name(i) + "' - '" + g.name(j) +
                                "' is neither ip-> nor ip<->");
      }
    }
  }
}

auto instance_key(const RuleInstance& r) {
  return std::tie(r.rule, r.demanded.u, r.demanded.v, r.witness);
}

std::vector<std::string> cycle_witness(const MixedGraph& g) {
  // Finds one directed cycle by depth-first search with colours.
  const std::size_t n = g.size();
  std::vector<int> colour(n, 0);
  std::vector<std::size_t> stack;
  std::vector<std::string> out;
  auto dfs = [&](auto&& self, std::size_t u) -> bool {
    colour[u] = 1;
    stack.push_back(u);
    bool found = false;
    for_each_bit(g.children(u), [&](std::size_t c) {
      if (found) return;
      if (colour[c] == 1) {
        auto it = std::find(stack.begin(), stack.end(), c);
        for (; it != stack.end(); ++it) out.push_back(g.name(*it));
        out.push_back(g.name(c));
        found = true;
      } else if (colour[c] == 0) {
        found = self(self, c);
      }
    });
    stack.pop_back();
    colour[u] = 2;
    return found;
  };
  for (std::size_t v = 0; v < n && out.empty(); ++v) {
    if (colour[v] == 0) dfs(dfs, v);
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k > 0) out += sep;
    out += parts[k];
  }
  return out;
}

}  // namespace

std::string RuleInstance::describe() const {
  if (rule == Rule::R1) {
    return "R1: " + witness[0] + " ip-> " + witness[1] + ", " + witness[1] + " ip<-> " +
           witness[2] + " and " + witness[1] + " ancestor of " + witness[2] + " demand " +
           demanded.u + " ip-> " + demanded.v;
  }
  return "R2: ip<-> path " + join(witness, " ip<-> ") +
         " through ancestors of its endpoints demands " + demanded.u + " ip<-> " + demanded.v;
}

std::vector<RuleInstance> r1_consequences(const MixedGraph& g) {
  require_ipg_marks(g);
  const auto anc = ancestor_sets(g);
  std::vector<RuleInstance> out;
  for (std::size_t b = 0; b < g.size(); ++b) {
    const VertexSet tails_into_b = g.parents(b);
    const VertexSet spouses = g.spouses(b);
    for_each_bit(tails_into_b, [&](std::size_t a) {
      for_each_bit(spouses, [&](std::size_t c) {
        if (c == a || !contains(anc[c], b)) return;
        out.push_back(RuleInstance{Rule::R1,
                                   Edge{g.name(a), g.name(c), Mark::Tail, Mark::Arrow, false},
                                   {g.name(a), g.name(b), g.name(c)}});
      });
    });
  }
  std::sort(out.begin(), out.end(),
            [](const RuleInstance& x, const RuleInstance& y) { return instance_key(x) < instance_key(y); });
  return out;
}

std::vector<RuleInstance> r2_consequences(const MixedGraph& g) {
  require_ipg_marks(g);
  const auto anc = ancestor_sets(g);
  const std::size_t n = g.size();
  std::vector<VertexSet> spouses(n);
  for (std::size_t i = 0; i < n; ++i) spouses[i] = g.spouses(i);

  std::vector<RuleInstance> out;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const VertexSet allowed = (anc[a] | anc[b]) & ~bit(a) & ~bit(b);
      // Breadth-first search over interior vertices; parent pointers give the witness.
      std::vector<std::size_t> parent(n, n);
      std::vector<std::size_t> queue;
      VertexSet seen = 0;
      for_each_bit(spouses[a] & allowed, [&](std::size_t v) {
        seen |= bit(v);
        parent[v] = a;
        queue.push_back(v);
      });
      std::optional<std::size_t> last;
      for (std::size_t head = 0; head < queue.size() && !last; ++head) {
        const auto v = queue[head];
        if (contains(spouses[v], b)) {
          last = v;
          break;
        }
        for_each_bit(spouses[v] & allowed & ~seen, [&](std::size_t x) {
          seen |= bit(x);
          parent[x] = v;
          queue.push_back(x);
        });
      }
      if (!last) continue;
      std::vector<std::string> path{g.name(b)};
      for (std::size_t v = *last; v != a; v = parent[v]) path.push_back(g.name(v));
      path.push_back(g.name(a));
      std::reverse(path.begin(), path.end());
      out.push_back(RuleInstance{
          Rule::R2, Edge{g.name(a), g.name(b), Mark::Arrow, Mark::Arrow, false}, std::move(path)});
    }
  }
  return out;
}

bool satisfied(const MixedGraph& g, const RuleInstance& instance) {
  const auto u = g.index(instance.demanded.u);
  const auto v = g.index(instance.demanded.v);
  if (instance.rule == Rule::R1) return g.adjacent(u, v) && g.mark(u, v) == Mark::Arrow;
  return g.bidirected(u, v);
}

ClosureResult closure(const MixedGraph& g) {
  require_ipg_marks(g);
  MixedGraph current = g;
  if (!is_acyclic_directed(current)) {
    return {std::nullopt,
            ClosureConflict{"directed cycle " + join(cycle_witness(current), " -> "), std::nullopt}};
  }
  for (bool changed = true; changed;) {
    changed = false;
    auto demands = r1_consequences(current);
    auto r2 = r2_consequences(current);
    demands.insert(demands.end(), r2.begin(), r2.end());
    for (const auto& inst : demands) {
      if (satisfied(current, inst)) continue;
      const auto u = current.index(inst.demanded.u);
      const auto v = current.index(inst.demanded.v);
      if (current.adjacent(u, v)) {
        const auto existing = oriented_edge(current, u, v);
        return {std::nullopt,
                ClosureConflict{inst.describe() + ", but the graph has " + existing.u + " " +
                                    connector(existing.at_u, existing.at_v) + " " + existing.v,
                                inst}};
      }
      current.add_edge(u, v, inst.demanded.at_u, inst.demanded.at_v);
      if (!is_acyclic_directed(current)) {
        return {std::nullopt,
                ClosureConflict{inst.describe() + ", which closes the directed cycle " +
                                    join(cycle_witness(current), " -> "),
                                inst}};
      }
      changed = true;
    }
  }
  return {std::move(current), std::nullopt};
}

IpgDiagnosis is_valid_ipg(const MixedGraph& g) {
  IpgDiagnosis d;
  bool marks_ok = true;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.is_latent(i)) d.problems.push_back("latent vertex '" + g.name(i) + "'");
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      if (!g.adjacent(i, j)) continue;
      const Mark a = g.mark(j, i);
      const Mark b = g.mark(i, j);
      const auto e = oriented_edge(g, i, j);
      if (a == Mark::Circle || b == Mark::Circle) {
        d.problems.push_back("circle mark on " + e.u + " " + connector(e.at_u, e.at_v) + " " + e.v);
        marks_ok = false;
      } else if (a == Mark::Tail && b == Mark::Tail) {
        d.problems.push_back("tail-tail edge " + e.u + " - " + e.v);
        marks_ok = false;
      }
    }
  }
  if (!marks_ok) return d;
  if (!is_acyclic_directed(g)) {
    d.problems.push_back("directed cycle " + join(cycle_witness(g), " -> "));
  }
  auto demands = r1_consequences(g);
  auto r2 = r2_consequences(g);
  demands.insert(demands.end(), r2.begin(), r2.end());
  for (const auto& inst : demands) {
    if (!satisfied(g, inst)) d.problems.push_back(inst.describe());
  }
  d.valid = d.problems.empty();
  return d;
}

std::vector<MixedGraph> completions(const MixedGraph& mdg, std::size_t max_circles) {
  mdg.validate();
  struct Slot {
    std::size_t i;
    std::size_t j;
    std::vector<std::pair<Mark, Mark>> options;  // (mark at i, mark at j)
  };
  std::size_t circles = 0;
  std::vector<Slot> slots;
  MixedGraph base(Role::Ipg);
  for (const auto& v : mdg.vertices()) base.add_vertex(v.name, v.kind);
  for (std::size_t i = 0; i < mdg.size(); ++i) {
    for (std::size_t j = i + 1; j < mdg.size(); ++j) {
      if (!mdg.adjacent(i, j)) continue;
      const Mark mi = mdg.mark(j, i);
      const Mark mj = mdg.mark(i, j);
      circles += (mi == Mark::Circle) + (mj == Mark::Circle);
      Slot slot{i, j, {}};
      for (auto [oi, oj] : {std::pair{Mark::Tail, Mark::Arrow}, std::pair{Mark::Arrow, Mark::Tail},
                            std::pair{Mark::Arrow, Mark::Arrow}}) {
        if ((mi == Mark::Circle || mi == oi) && (mj == Mark::Circle || mj == oj)) {
          slot.options.emplace_back(oi, oj);
        }
      }
      if (slot.options.empty()) {
        throw PreconditionError("edge '" + mdg.name(i) + "' - '" + mdg.name(j) +
                                "' has no ip-> or ip<-> completion");
      }
      base.add_edge(i, j, slot.options.front().first, slot.options.front().second);
      slots.push_back(std::move(slot));
    }
  }
  if (circles > max_circles) {
    throw BoundError(std::to_string(circles) + " circle marks exceed the bound of " +
                     std::to_string(max_circles));
  }

  // Noncollider triples as index triples; checked as soon as both edges are fixed.
  struct Triplet {
    std::size_t a, b, c;
  };
  std::vector<Triplet> triples;
  for (const auto& t : mdg.noncolliders()) {
    triples.push_back({mdg.index(t.a), mdg.index(t.center), mdg.index(t.c)});
  }
  auto slot_of = [&](std::size_t x, std::size_t y) {
    if (x > y) std::swap(x, y);
    for (std::size_t k = 0; k < slots.size(); ++k) {
      if (slots[k].i == x && slots[k].j == y) return k;
    }
    return slots.size();
  };
  std::vector<std::vector<Triplet>> triples_closing_at(slots.size());
  for (const auto& t : triples) {
    const auto k = std::max(slot_of(t.a, t.b), slot_of(t.b, t.c));
    triples_closing_at[k].push_back(t);
  }

  std::vector<MixedGraph> out;
  MixedGraph work = base;
  auto dfs = [&](auto&& self, std::size_t k) -> void {
    if (k == slots.size()) {
      if (is_valid_ipg(work)) out.push_back(work);
      return;
    }
    for (auto [oi, oj] : slots[k].options) {
      work.set_marks(slots[k].i, slots[k].j, oi, oj);
      bool ok = true;
      for (const auto& t : triples_closing_at[k]) {
        if (work.mark(t.a, t.b) == Mark::Arrow && work.mark(t.c, t.b) == Mark::Arrow) ok = false;
      }
      if (ok) self(self, k + 1);
    }
  };
  dfs(dfs, 0);

  std::vector<std::pair<std::string, std::size_t>> keyed;
  for (std::size_t k = 0; k < out.size(); ++k) keyed.emplace_back(serialize_graph(out[k]), k);
  std::sort(keyed.begin(), keyed.end());
  std::vector<MixedGraph> sorted;
  for (const auto& [text, k] : keyed) sorted.push_back(std::move(out[k]));
  return sorted;
}

MixedGraph common_marks(const std::vector<MixedGraph>& ipgs) {
  if (ipgs.empty()) throw PreconditionError("common_marks needs at least one graph");
  const auto& first = ipgs.front();
  for (const auto& g : ipgs) {
    bool same = g.vertices() == first.vertices();
    for (std::size_t i = 0; same && i < g.size(); ++i) {
      for (std::size_t j = i + 1; same && j < g.size(); ++j) {
        same = g.adjacent(i, j) == first.adjacent(i, j);
      }
    }
    if (!same) throw PreconditionError("common_marks inputs do not share a skeleton");
  }
  MixedGraph out(Role::Mdg);
  for (const auto& v : first.vertices()) out.add_vertex(v.name, v.kind);
  for (std::size_t i = 0; i < first.size(); ++i) {
    for (std::size_t j = i + 1; j < first.size(); ++j) {
      if (!first.adjacent(i, j)) continue;
      Mark at_i = first.mark(j, i);
      Mark at_j = first.mark(i, j);
      for (const auto& g : ipgs) {
        if (g.mark(j, i) != at_i) at_i = Mark::Circle;
        if (g.mark(i, j) != at_j) at_j = Mark::Circle;
      }
      out.add_edge(i, j, at_i, at_j);
    }
  }
  for (std::size_t b = 0; b < first.size(); ++b) {
    for (std::size_t a = 0; a < first.size(); ++a) {
      for (std::size_t c = a + 1; c < first.size(); ++c) {
        if (a == b || c == b || !first.adjacent(a, b) || !first.adjacent(b, c) ||
            first.adjacent(a, c)) {
          continue;
        }
        const bool some_collider = std::any_of(ipgs.begin(), ipgs.end(), [&](const MixedGraph& g) {
          return g.mark(a, b) == Mark::Arrow && g.mark(c, b) == Mark::Arrow;
        });
        if (!some_collider) out.add_noncollider(first.name(a), first.name(b), first.name(c));
      }
    }
  }
  return out;
}

}  // namespace semimarkov
