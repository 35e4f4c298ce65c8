#include "semimarkov/construction.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <utility>

#include "semimarkov/ipg_calculus.hpp"
#include "semimarkov/separation.hpp"

namespace semimarkov {

namespace {

using Facts = std::vector<std::uint8_t>;

// Per observable pair (i < j by name): bit 0 adjacent, bit 1 into i, bit 2 into j.
Facts inducing_facts(const MixedGraph& m) {
  const auto anc = ancestor_sets(m);
  const VertexSet obs = m.observables();
  std::vector<std::size_t> idx;
  for_each_bit(obs, [&](std::size_t i) { idx.push_back(i); });
  Facts out;
  out.reserve(idx.size() * (idx.size() - (idx.empty() ? 0 : 1)) / 2);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      const auto c = classify_inducing(m, obs, idx[i], idx[j], anc);
      out.push_back(static_cast<std::uint8_t>((c.exists ? 1 : 0) | (c.into_a ? 2 : 0) |
                                              (c.into_b ? 4 : 0)));
    }
  }
  return out;
}

bool covers(const Facts& have, const Facts& need) {
  for (std::size_t k = 0; k < need.size(); ++k) {
    if ((have[k] & need[k]) != need[k]) return false;
  }
  return true;
}

std::size_t require_vertex(const MixedGraph& m, std::string_view name) {
  auto i = m.find(name);
  if (!i) throw PreconditionError("unknown vertex '" + std::string(name) + "'");
  return *i;
}

void require_directed(const MixedGraph& m, std::size_t u, std::size_t v) {
  if (!m.directed(u, v)) {
    throw PreconditionError("no edge " + m.name(u) + " -> " + m.name(v));
  }
}

// Adds u -> v, merging with an existing u -> v. False if v -> u is already there.
bool merge_directed(MixedGraph& g, std::size_t u, std::size_t v, bool hidden) {
  if (!g.adjacent(u, v)) {
    g.add_edge(u, v, Mark::Tail, Mark::Arrow, hidden);
    return true;
  }
  if (!g.directed(u, v)) return false;
  if (!hidden) g.set_hidden(u, v, false);
  return true;
}

std::optional<MixedGraph> try_collapse(const MixedGraph& m, std::size_t v1, std::size_t v2) {
  MixedGraph out(m.role());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i != v1) out.add_vertex(m.name(i), m.kind(i));
  }
  auto image = [&](std::size_t i) { return out.index(m.name(i == v1 ? v2 : i)); };
  bool ok = true;
  for (std::size_t i = 0; i < m.size() && ok; ++i) {
    for_each_bit(m.children(i), [&](std::size_t j) {
      if (!ok) return;
      const auto a = image(i);
      const auto b = image(j);
      if (a == b) return;
      ok = merge_directed(out, a, b, m.hidden(i, j));
    });
  }
  if (!ok || !is_acyclic_directed(out)) return std::nullopt;
  return out;
}

bool embed_pattern(const MixedGraph& m, std::size_t v1, std::size_t v2, std::size_t v3,
                   std::size_t l1) {
  return !m.is_latent(v1) && !m.is_latent(v2) && !m.is_latent(v3) && m.is_latent(l1) &&
         v1 != v2 && v1 != v3 && v2 != v3 && m.directed(v1, v2) && m.directed(l1, v2) &&
         m.directed(l1, v3);
}

std::optional<MixedGraph> try_embed(const MixedGraph& m, std::size_t v1, std::size_t v2,
                                    std::size_t v3, std::size_t l1, bool star) {
  MixedGraph out = m;
  out.remove_edge(v1, v2);
  if (!merge_directed(out, v1, l1, false)) return std::nullopt;
  if (!star) {
    const auto a = std::min(m.name(v2), m.name(v3));
    const auto b = std::max(m.name(v2), m.name(v3));
    const auto l2 = fresh_name(out, expansion_latent_name(a, b));
    out.add_vertex(l2, VertexKind::Latent);
    out.add_directed(l2, m.name(v2));
    out.add_directed(l2, m.name(v3));
  }
  if (!is_acyclic_directed(out)) return std::nullopt;
  return out;
}

bool connect_pattern(const MixedGraph& m, std::size_t l1, std::size_t l2, std::size_t v) {
  return l1 != l2 && m.is_latent(l1) && m.is_latent(l2) && !m.is_latent(v) &&
         m.directed(l1, v) && m.directed(l2, v);
}

std::optional<MixedGraph> try_connect(const MixedGraph& m, std::size_t l1, std::size_t l2,
                                      std::size_t v) {
  MixedGraph out = m;
  out.remove_edge(l1, v);
  if (!merge_directed(out, l1, l2, false)) return std::nullopt;
  if (!is_acyclic_directed(out)) return std::nullopt;
  return out;
}

bool expansion_shaped(const MixedGraph& m) {
  for (std::size_t l = 0; l < m.size(); ++l) {
    if (!m.is_latent(l)) continue;
    if (m.neighbors(l) != m.children(l)) return false;
    const VertexSet ch = m.children(l);
    if (std::popcount(ch) != 2 || (ch & m.latents()) != 0) return false;
  }
  return true;
}

void check_bound(const MixedGraph& m, std::size_t max_vertices) {
  if (m.size() > max_vertices) {
    throw BoundError("model has " + std::to_string(m.size()) + " vertices, limit is " +
                     std::to_string(max_vertices));
  }
}

// Reductions in normal form: partition the latents (each class may also join one
// observable), take the quotient, then search its acyclic edge subsets. Facts only
// grow with edges, so a subset that misses a target fact is pruned with its subsets.
class ReductionSearch {
 public:
  ReductionSearch(const MixedGraph& m, bool first_only)
      : m_(m), target_(inducing_facts(m)), first_only_(first_only) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m.is_latent(i)) {
        latents_.push_back(i);
      } else {
        observables_.push_back(i);
      }
    }
    assignment_.assign(latents_.size(), 0);
  }

  void run() { assign(0, 0); }
  bool found() const { return !results_.empty(); }
  std::vector<MixedGraph> results() const {
    std::vector<MixedGraph> out;
    for (const auto& [key, g] : results_) out.push_back(g);
    return out;
  }

 private:
  // Class ids below latents_.size() are latent-only classes; the rest map to observables.
  void assign(std::size_t k, std::size_t classes) {
    if (stop()) return;
    if (k == latents_.size()) {
      process(classes);
      return;
    }
    assignment_[k] = classes;
    assign(k + 1, classes + 1);
    for (std::size_t c = 0; c < classes && !stop(); ++c) {
      assignment_[k] = c;
      assign(k + 1, classes);
    }
    for (std::size_t o = 0; o < observables_.size() && !stop(); ++o) {
      assignment_[k] = latents_.size() + o;
      assign(k + 1, classes);
    }
  }

  void process(std::size_t classes) {
    bool identity = true;
    for (std::size_t k = 0; k < latents_.size(); ++k) identity &= assignment_[k] == k;

    std::vector<std::string> image(m_.size());
    for (auto o : observables_) image[o] = m_.name(o);
    std::vector<std::string> class_name(classes);
    for (std::size_t k = 0; k < latents_.size(); ++k) {
      const auto c = assignment_[k];
      if (c < latents_.size()) {
        if (class_name[c].empty()) class_name[c] = m_.name(latents_[k]);
        image[latents_[k]] = class_name[c];
      } else {
        image[latents_[k]] = m_.name(observables_[c - latents_.size()]);
      }
    }

    MixedGraph base(Role::CausalDag);
    for (auto o : observables_) base.add_vertex(m_.name(o));
    for (const auto& n : class_name) base.add_vertex(n, VertexKind::Latent);

    std::map<std::pair<std::size_t, std::size_t>, bool> arcs;  // -> all sources hidden
    for (std::size_t i = 0; i < m_.size(); ++i) {
      for_each_bit(m_.children(i), [&](std::size_t j) {
        const auto a = base.index(image[i]);
        const auto b = base.index(image[j]);
        if (a == b) return;
        auto [it, inserted] = arcs.try_emplace({a, b}, m_.hidden(i, j));
        if (!inserted) it->second = it->second && m_.hidden(i, j);
      });
    }
    std::vector<std::pair<std::size_t, std::size_t>> twins;
    for (const auto& [arc, h] : arcs) {
      if (arc.first < arc.second && arcs.count({arc.second, arc.first})) twins.push_back(arc);
    }
    for (const auto& [arc, h] : arcs) {
      const bool twin = arcs.count({arc.second, arc.first}) != 0;
      if (!twin) base.add_edge(arc.first, arc.second, Mark::Tail, Mark::Arrow, h);
    }
    // A twin pair keeps one direction here; dropping both is reached by the subset search.
    for (std::size_t pick = 0; pick < (std::size_t{1} << twins.size()) && !stop(); ++pick) {
      MixedGraph g = base;
      for (std::size_t t = 0; t < twins.size(); ++t) {
        auto [a, b] = twins[t];
        if ((pick >> t) & 1U) std::swap(a, b);
        g.add_edge(a, b, Mark::Tail, Mark::Arrow, arcs.at({a, b}));
      }
      const auto f = inducing_facts(g);
      if (!covers(f, target_)) continue;
      if (!identity && f == target_ && is_acyclic_directed(g)) record(g);
      std::vector<std::pair<std::size_t, std::size_t>> edges;
      for (std::size_t i = 0; i < g.size(); ++i) {
        for_each_bit(g.children(i), [&](std::size_t j) { edges.emplace_back(i, j); });
      }
      subsets(g, edges, 0);
    }
  }

  void subsets(MixedGraph& g, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
               std::size_t start) {
    for (std::size_t k = start; k < edges.size() && !stop(); ++k) {
      const auto [u, v] = edges[k];
      const bool h = g.hidden(u, v);
      g.remove_edge(u, v);
      const auto f = inducing_facts(g);
      if (covers(f, target_)) {
        if (f == target_ && is_acyclic_directed(g)) record(g);
        subsets(g, edges, k + 1);
      }
      g.add_edge(u, v, Mark::Tail, Mark::Arrow, h);
    }
  }

  void record(const MixedGraph& g) { results_.try_emplace(canonical_form_modulo_latents(g), g); }
  bool stop() const { return first_only_ && !results_.empty(); }

  const MixedGraph& m_;
  Facts target_;
  bool first_only_;
  std::vector<std::size_t> latents_;
  std::vector<std::size_t> observables_;
  std::vector<std::size_t> assignment_;
  std::map<std::string, MixedGraph> results_;
};

using Successors = std::function<std::vector<MixedGraph>(const MixedGraph&)>;

bool minimal_step(const MixedGraph& g) {
  return is_minimal(g, std::max(kDefaultMaxVertices, g.size()));
}

// Explores states reachable through `next` (memoized modulo latent names). Returns the
// terminal states, or every state except the start when `all_states` is set.
std::vector<MixedGraph> explore(const MixedGraph& start, const Successors& next,
                                bool all_states) {
  std::set<std::string> seen{canonical_form_modulo_latents(start)};
  std::map<std::string, MixedGraph> out;
  std::vector<MixedGraph> stack{start};
  bool first = true;
  while (!stack.empty()) {
    MixedGraph cur = std::move(stack.back());
    stack.pop_back();
    auto children = next(cur);
    if (all_states ? !first : children.empty()) {
      out.try_emplace(canonical_form_modulo_latents(cur), cur);
    }
    first = false;
    for (auto& c : children) {
      if (seen.insert(canonical_form_modulo_latents(c)).second) stack.push_back(std::move(c));
    }
  }
  std::vector<MixedGraph> result;
  for (auto& [k, g] : out) result.push_back(std::move(g));
  return result;
}

}  // namespace

MixedGraph remove_edge(const MixedGraph& m, std::string_view from, std::string_view to) {
  const auto u = require_vertex(m, from);
  const auto v = require_vertex(m, to);
  require_directed(m, u, v);
  MixedGraph out = m;
  out.remove_edge(u, v);
  return out;
}

MixedGraph collapse_vertices(const MixedGraph& m, std::string_view v1, std::string_view v2) {
  const auto a = require_vertex(m, v1);
  const auto b = require_vertex(m, v2);
  if (a == b) throw PreconditionError("cannot collapse a vertex into itself");
  auto out = try_collapse(m, a, b);
  if (!out) {
    throw PreconditionError("collapsing " + m.name(a) + " into " + m.name(b) +
                            " creates a directed cycle");
  }
  return *out;
}

MixedGraph embed_latent(const MixedGraph& m, std::string_view v1, std::string_view v2,
                        std::string_view v3, std::string_view l1, bool star) {
  const auto a = require_vertex(m, v1);
  const auto b = require_vertex(m, v2);
  const auto c = require_vertex(m, v3);
  const auto l = require_vertex(m, l1);
  if (!embed_pattern(m, a, b, c, l)) {
    throw PreconditionError("pattern " + std::string(v1) + " -> " + std::string(v2) + ", " +
                            std::string(l1) + " -> " + std::string(v2) + ", " +
                            std::string(l1) + " -> " + std::string(v3) + " is absent");
  }
  auto out = try_embed(m, a, b, c, l, star);
  if (!out) throw PreconditionError("embedding " + std::string(l1) + " creates a directed cycle");
  return *out;
}

MixedGraph connect_latents(const MixedGraph& m, std::string_view l1, std::string_view l2,
                           std::string_view v) {
  const auto a = require_vertex(m, l1);
  const auto b = require_vertex(m, l2);
  const auto c = require_vertex(m, v);
  if (!connect_pattern(m, a, b, c)) {
    throw PreconditionError("pattern " + std::string(l1) + " -> " + std::string(v) + ", " +
                            std::string(l2) + " -> " + std::string(v) + " is absent");
  }
  auto out = try_connect(m, a, b, c);
  if (!out) {
    throw PreconditionError("connecting " + std::string(l1) + " -> " + std::string(l2) +
                            " creates a directed cycle");
  }
  return *out;
}

std::string expansion_latent_name(std::string_view a, std::string_view b) {
  return "L_" + std::string(std::min(a, b)) + std::string(std::max(a, b));
}

std::vector<ExpansionChoice> expansion_choices(const MixedGraph& g) {
  ExpansionChoice base;
  for (const auto& e : g.edges()) {
    if (e.at_u == Mark::Arrow && e.at_v == Mark::Arrow) {
      base.push_back({std::min(e.u, e.v), std::max(e.u, e.v), HiddenEdge::None});
    }
  }
  std::vector<ExpansionChoice> out;
  ExpansionChoice cur = base;
  auto rec = [&](auto& self, std::size_t k) -> void {
    if (k == cur.size()) {
      out.push_back(cur);
      return;
    }
    for (auto h : {HiddenEdge::None, HiddenEdge::AToB, HiddenEdge::BToA}) {
      cur[k].hidden = h;
      self(self, k + 1);
    }
  };
  rec(rec, 0);
  return out;
}

MixedGraph build_expansion(const MixedGraph& g, const ExpansionChoice& choice) {
  MixedGraph out(Role::CausalDag);
  for (const auto& v : g.vertices()) out.add_vertex(v.name);
  for (const auto& e : g.edges()) {
    if (e.at_u == Mark::Tail && e.at_v == Mark::Arrow) out.add_directed(e.u, e.v);
    if (e.at_u == Mark::Arrow && e.at_v == Mark::Tail) out.add_directed(e.v, e.u);
  }
  for (const auto& c : choice) {
    const auto l = fresh_name(out, expansion_latent_name(c.a, c.b));
    out.add_vertex(l, VertexKind::Latent);
    out.add_directed(l, c.a);
    out.add_directed(l, c.b);
    if (c.hidden == HiddenEdge::AToB) out.add_directed(c.a, c.b, true);
    if (c.hidden == HiddenEdge::BToA) out.add_directed(c.b, c.a, true);
  }
  return out;
}

std::vector<MixedGraph> expansions(const MixedGraph& g) {
  const auto target = g.with_role(Role::Ipg);
  const auto diag = is_valid_ipg(target);
  if (!diag) {
    throw PreconditionError("not a valid IPG: " +
                            (diag.problems.empty() ? std::string() : diag.problems.front()));
  }
  std::vector<MixedGraph> out;
  for (const auto& choice : expansion_choices(target)) {
    auto cand = build_expansion(target, choice);
    if (is_acyclic_directed(cand) && ipg_of(cand) == target) out.push_back(std::move(cand));
  }
  return out;
}

bool is_essential_edge(const MixedGraph& m, std::string_view from, std::string_view to) {
  return ipg_of(remove_edge(m, from, to)) != ipg_of(m);
}

bool lemma4_nonessential(const MixedGraph& m1, std::string_view from, std::string_view to) {
  const auto a = require_vertex(m1, from);
  const auto b = require_vertex(m1, to);
  require_directed(m1, a, b);
  if (!expansion_shaped(m1)) {
    throw PreconditionError("model is not an expansion: every latent needs exactly two "
                            "observable children and no other edges");
  }
  if (m1.is_latent(a) || m1.is_latent(b) || m1.hidden(a, b)) {
    throw PreconditionError("edge must be a visible edge between observables");
  }
  const auto anc = ancestor_sets(m1);
  bool found = false;
  for_each_bit(m1.children(a) & m1.observables(), [&](std::size_t c) {
    if (c == b || !contains(anc[b], c)) return;
    for_each_bit(m1.parents(c) & m1.parents(b) & m1.latents(), [&](std::size_t) { found = true; });
  });
  return found;
}

std::vector<MixedGraph> enumerate_reductions(const MixedGraph& m, std::size_t max_vertices) {
  check_bound(m, max_vertices);
  ReductionSearch search(m, false);
  search.run();
  return search.results();
}

bool is_minimal(const MixedGraph& m, std::size_t max_vertices) {
  check_bound(m, max_vertices);
  ReductionSearch search(m, true);
  search.run();
  return !search.found();
}

MixedGraph prune_nonessential_edges(const MixedGraph& m) {
  const auto target = ipg_of(m);
  MixedGraph cur = m;
  auto removable = [&](std::size_t u, std::size_t v) {
    MixedGraph next = cur;
    next.remove_edge(u, v);
    return ipg_of(next) == target;
  };
  if (expansion_shaped(m)) {
    // Pattern-based removals are order independent on a fresh expansion; still guarded.
    std::vector<std::pair<std::string, std::string>> marked;
    for (const auto& e : m.edges()) {
      const auto u = m.index(e.u);
      const auto v = m.index(e.v);
      if (e.hidden || m.is_latent(u) || m.is_latent(v)) continue;
      if (lemma4_nonessential(m, e.u, e.v)) marked.emplace_back(e.u, e.v);
    }
    for (const auto& [a, b] : marked) {
      const auto u = cur.index(a);
      const auto v = cur.index(b);
      if (removable(u, v)) cur.remove_edge(u, v);
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t u = 0; u < cur.size() && !changed; ++u) {
      if (cur.is_latent(u)) continue;
      for_each_bit(cur.children(u) & cur.observables(), [&](std::size_t v) {
        if (changed || cur.hidden(u, v) || !removable(u, v)) return;
        cur.remove_edge(u, v);
        changed = true;
      });
    }
  }
  return cur;
}

std::vector<MixedGraph> latent_removals(const MixedGraph& m) {
  const auto target = ipg_of(m);
  return explore(
      m,
      [&](const MixedGraph& g) {
        std::vector<MixedGraph> out;
        for (std::size_t l = 0; l < g.size(); ++l) {
          if (!g.is_latent(l)) continue;
          MixedGraph next = g;
          next.remove_vertex(l);
          if (ipg_of(next) == target) out.push_back(std::move(next));
        }
        return out;
      },
      false);
}

std::vector<MixedGraph> latent_collapses(const MixedGraph& m) {
  const auto target = ipg_of(m);
  return explore(
      m,
      [&](const MixedGraph& g) {
        std::vector<MixedGraph> out;
        for (std::size_t a = 0; a < g.size(); ++a) {
          for (std::size_t b = a + 1; b < g.size(); ++b) {
            if (!g.is_latent(a) || !g.is_latent(b)) continue;
            auto next = try_collapse(g, b, a);
            if (next && ipg_of(*next) == target) out.push_back(std::move(*next));
          }
        }
        return out;
      },
      false);
}

std::vector<MixedGraph> latent_embeddings(const MixedGraph& m) {
  const auto target = ipg_of(m);
  return explore(
      m,
      [&](const MixedGraph& g) {
        std::vector<MixedGraph> out;
        for (std::size_t v1 = 0; v1 < g.size(); ++v1) {
          if (g.is_latent(v1)) continue;
          for_each_bit(g.children(v1) & g.observables(), [&](std::size_t v2) {
            for_each_bit(g.parents(v2) & g.latents(), [&](std::size_t l1) {
              for_each_bit(g.children(l1) & g.observables(), [&](std::size_t v3) {
                if (!embed_pattern(g, v1, v2, v3, l1)) return;
                for (bool star : {true, false}) {
                  auto next = try_embed(g, v1, v2, v3, l1, star);
                  if (next && ipg_of(*next) == target && minimal_step(*next)) {
                    out.push_back(std::move(*next));
                  }
                }
              });
            });
          });
        }
        return out;
      },
      true);
}

std::vector<MixedGraph> latent_connections(const MixedGraph& m) {
  const auto target = ipg_of(m);
  return explore(
      m,
      [&](const MixedGraph& g) {
        std::vector<MixedGraph> out;
        for (std::size_t v = 0; v < g.size(); ++v) {
          if (g.is_latent(v)) continue;
          const VertexSet lp = g.parents(v) & g.latents();
          for_each_bit(lp, [&](std::size_t l1) {
            for_each_bit(lp, [&](std::size_t l2) {
              if (l1 == l2) return;
              auto next = try_connect(g, l1, l2, v);
              if (next && ipg_of(*next) == target && minimal_step(*next)) {
                out.push_back(std::move(*next));
              }
            });
          });
        }
        return out;
      },
      true);
}

std::vector<MixedGraph> minimal_models(const MixedGraph& g, std::size_t max_vertices) {
  const auto target = g.with_role(Role::Ipg);
  std::size_t bidirected = 0;
  for (const auto& e : target.edges()) bidirected += e.at_u == Mark::Arrow && e.at_v == Mark::Arrow;
  if (target.size() + bidirected > max_vertices) {
    throw BoundError("expansions need " + std::to_string(target.size() + bidirected) +
                     " vertices, limit is " + std::to_string(max_vertices));
  }

  std::map<std::string, MixedGraph> pruned;
  for (const auto& e : expansions(target)) {
    bool redundant = false;
    for (const auto& edge : e.edges()) {
      if (edge.hidden && !is_essential_edge(e, edge.u, edge.v)) redundant = true;
    }
    if (redundant) continue;
    auto p = prune_nonessential_edges(e);
    pruned.try_emplace(canonical_form_modulo_latents(p), std::move(p));
  }

  std::map<std::string, MixedGraph> candidates;
  auto add = [&](std::map<std::string, MixedGraph>& into, std::vector<MixedGraph> gs) {
    for (auto& x : gs) into.try_emplace(canonical_form_modulo_latents(x), std::move(x));
  };
  for (const auto& [k, p] : pruned) {
    for (const auto& r : latent_removals(p)) add(candidates, latent_collapses(r));
  }
  std::map<std::string, MixedGraph> embedded;
  for (const auto& [k, c] : candidates) add(embedded, latent_embeddings(c));
  std::map<std::string, MixedGraph> connected;
  for (const auto& [k, c] : candidates) add(connected, latent_connections(c));
  for (const auto& [k, c] : embedded) add(connected, latent_connections(c));
  embedded.merge(connected);

  std::map<std::string, MixedGraph> out;
  // An end state of the external-latent stages that still reduces is replaced by its
  // minimal reductions. Embedded and connected variants are minimal by construction.
  for (const auto& [k, c] : candidates) {
    const auto bound = std::max(max_vertices, c.size());
    if (is_minimal(c, bound)) {
      out.try_emplace(k, c);
      continue;
    }
    for (auto& r : enumerate_reductions(c, bound)) {
      if (is_minimal(r, bound)) out.try_emplace(canonical_form_modulo_latents(r), std::move(r));
    }
  }
  out.merge(embedded);
  std::vector<MixedGraph> result;
  for (auto& [k, m] : out) result.push_back(std::move(m));
  return result;
}

}  // namespace semimarkov
