#include "semimarkov/equivalence.hpp"

#include <algorithm>
#include <array>
#include <iterator>
#include <sstream>

#include "semimarkov/construction.hpp"
#include "semimarkov/format.hpp"

namespace semimarkov {

namespace {

MixedGraph skeleton(const MixedGraph& ipg) {
  MixedGraph out(Role::Mdg);
  for (const auto& v : ipg.vertices()) out.add_vertex(v.name);
  for (std::size_t i = 0; i < ipg.size(); ++i) {
    for (std::size_t j = i + 1; j < ipg.size(); ++j) {
      if (ipg.adjacent(i, j)) out.add_edge(i, j, Mark::Circle, Mark::Circle);
    }
  }
  return out;
}

// Some Z over obs minus {a, b, c} with a and c separated by {b} and Z.
bool separable_through(const MixedGraph& m, std::size_t a, std::size_t b, std::size_t c) {
  const VertexSet rest = m.observables() & ~(bit(a) | bit(b) | bit(c));
  for (VertexSet z = rest;; z = (z - 1) & rest) {
    if (d_separated(m, a, c, z | bit(b))) return true;
    if (z == 0) break;
  }
  return false;
}

MixedGraph tetrad_mdg(const MixedGraph& m) {
  MixedGraph g = skeleton(ipg_of(m));
  // Skeleton indices equal the indices of the observables among themselves; map back.
  std::vector<std::size_t> in_m;
  for (const auto& v : g.vertices()) in_m.push_back(m.index(v.name));

  std::vector<std::array<std::size_t, 3>> noncolliders;
  for (std::size_t b = 0; b < g.size(); ++b) {
    const VertexSet nb = g.neighbors(b);
    for_each_bit(nb, [&](std::size_t a) {
      for_each_bit(nb, [&](std::size_t c) {
        if (c <= a || g.adjacent(a, c)) return;
        if (separable_through(m, in_m[a], in_m[b], in_m[c])) {
          g.add_noncollider(g.name(a), g.name(b), g.name(c));
          noncolliders.push_back({a, b, c});
        } else {
          g.set_marks(a, b, g.mark(b, a), Mark::Arrow);
          g.set_marks(c, b, g.mark(b, c), Mark::Arrow);
        }
      });
    });
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [a, b, c] : noncolliders) {
      for (auto [x, y] : {std::pair{a, c}, std::pair{c, a}}) {
        if (g.mark(x, b) == Mark::Arrow && g.mark(y, b) == Mark::Circle) {
          g.set_marks(y, b, g.mark(b, y), Mark::Tail);
          changed = true;
        }
      }
    }
  }
  return g;
}

// Compares sig with e on the pairs not adjacent in ipg; callers also require
// ipg_of(e) == ipg, and adjacent pairs are then dependent under every set in both.
bool matches_signature(const MixedGraph& e, const MixedGraph& ipg, const Signature& sig) {
  const auto& obs = sig.observables();
  const auto k = obs.size();
  std::vector<std::size_t> at(k);
  for (std::size_t p = 0; p < k; ++p) at[p] = e.index(obs[p]);
  const VertexSet all = (VertexSet{1} << k) - 1;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      if (ipg.adjacent(ipg.index(obs[a]), ipg.index(obs[b]))) continue;
      const VertexSet rest = all & ~(bit(a) | bit(b));
      // Ascending submasks: small conditioning sets first.
      for (VertexSet w = 0;; w = (w - rest) & rest) {
        VertexSet in_e = 0;
        for_each_bit(w, [&](std::size_t p) { in_e |= bit(at[p]); });
        if (d_separated(e, at[a], at[b], in_e) != sig.separated(a, b, w)) return false;
        if (w == rest) break;
      }
    }
  }
  return true;
}

MixedGraph exact_mdg(const MixedGraph& m, const MdgOptions& options) {
  const auto sig = d_separation_signature(m, options.max_observables);
  std::vector<MixedGraph> kept;
  for (auto& c : completions(skeleton(ipg_of(m)), options.max_circles)) {
    for (const auto& choice : expansion_choices(c)) {
      const auto e = build_expansion(c, choice);
      if (is_acyclic_directed(e) && matches_signature(e, c, sig) && ipg_of(e) == c) {
        kept.push_back(std::move(c));
        break;
      }
    }
  }
  if (kept.empty()) {
    throw InvariantError("no completion of the skeleton reproduces the model's signature");
  }
  return common_marks(kept);
}

std::vector<std::pair<std::string, std::string>> adjacency_pairs(const MixedGraph& g) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      if (g.adjacent(i, j)) out.emplace_back(g.name(i), g.name(j));
    }
  }
  return out;
}

std::size_t pearl_vertex(const MixedGraph& pm, std::string_view name) {
  auto i = pm.find(name);
  if (!i) throw PreconditionError("unknown vertex '" + std::string(name) + "'");
  return *i;
}

bool subset(VertexSet a, VertexSet b) { return (a & ~b) == 0; }

}  // namespace

std::string_view to_string(MdgMode mode) {
  switch (mode) {
    case MdgMode::Auto:
      return "auto";
    case MdgMode::Tetrad:
      return "tetrad";
    case MdgMode::Exact:
      return "exact";
  }
  return "auto";
}

std::optional<MdgMode> mdg_mode_from_string(std::string_view text) {
  for (auto m : {MdgMode::Auto, MdgMode::Tetrad, MdgMode::Exact}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

MdgMode resolve_mode(const MixedGraph& m, const MdgOptions& options) {
  if (options.mode != MdgMode::Auto) return options.mode;
  const auto obs = static_cast<std::size_t>(std::popcount(m.observables()));
  if (obs >= 8) return MdgMode::Tetrad;
  return 2 * ipg_of(m).num_edges() <= options.max_circles ? MdgMode::Exact : MdgMode::Tetrad;
}

MixedGraph mdg_of(const MixedGraph& m, const MdgOptions& options) {
  const auto obs = static_cast<std::size_t>(std::popcount(m.observables()));
  if (obs > options.max_observables) {
    throw BoundError("model has " + std::to_string(obs) + " observables, limit is " +
                     std::to_string(options.max_observables));
  }
  return resolve_mode(m, options) == MdgMode::Exact ? exact_mdg(m, options) : tetrad_mdg(m);
}

std::string describe_witness(const SignatureEntry& entry) {
  std::string w;
  for (const auto& v : entry.w) w += (w.empty() ? "" : ", ") + v;
  return entry.a + " _||_ " + entry.b + " | {" + w + "} differs";
}

EquivalenceVerdict semi_markov_equivalent(const MixedGraph& m1, const MixedGraph& m2,
                                          const MdgOptions& options) {
  if (m1.observable_names() != m2.observable_names()) {
    throw PreconditionError("models have different observables");
  }
  EquivalenceVerdict v;
  const auto s1 = d_separation_signature(m1, options.max_observables);
  const auto s2 = d_separation_signature(m2, options.max_observables);
  v.equivalent = s1 == s2;
  if (!v.equivalent) v.witness = s1.first_difference(s2);
  MdgOptions shared = options;
  shared.mode = resolve_mode(m1, options);
  v.mdg_agreement = mdg_of(m1, shared) == mdg_of(m2, shared);
  return v;
}

MixedGraph pearl_to_dag(const MixedGraph& pm) {
  MixedGraph out(Role::CausalDag);
  for (const auto& v : pm.vertices()) out.add_vertex(v.name);
  for (const auto& e : pm.edges()) {
    if (e.at_u == Mark::Tail && e.at_v == Mark::Arrow) out.add_directed(e.u, e.v);
    if (e.at_u == Mark::Arrow && e.at_v == Mark::Tail) out.add_directed(e.v, e.u);
  }
  for (const auto& e : pm.edges()) {
    if (e.at_u != Mark::Arrow || e.at_v != Mark::Arrow) continue;
    const auto a = std::min(e.u, e.v);
    const auto b = std::max(e.u, e.v);
    const auto k = fresh_name(out, "K_" + a + b);
    out.add_vertex(k, VertexKind::Latent);
    out.add_directed(k, a);
    out.add_directed(k, b);
  }
  return out;
}

std::string_view to_string(PearlRule rule) {
  switch (rule) {
    case PearlRule::Rule1:
      return "1";
    case PearlRule::Rule2:
      return "2";
    case PearlRule::Rule1Prime:
      return "1p";
    case PearlRule::Rule2Prime:
      return "2p";
  }
  return "1";
}

std::optional<PearlRule> pearl_rule_from_string(std::string_view text) {
  for (auto r : {PearlRule::Rule1, PearlRule::Rule2, PearlRule::Rule1Prime, PearlRule::Rule2Prime}) {
    if (to_string(r) == text) return r;
  }
  return std::nullopt;
}

bool pearl_rule_check(const MixedGraph& pm, std::string_view x_name, std::string_view y_name,
                      PearlRule rule) {
  const auto x = pearl_vertex(pm, x_name);
  const auto y = pearl_vertex(pm, y_name);
  const bool swap_rule = rule == PearlRule::Rule1 || rule == PearlRule::Rule1Prime;
  if (!(pm.directed(x, y) || (swap_rule && pm.bidirected(x, y)))) {
    throw PreconditionError("rule " + std::string(to_string(rule)) + " needs an edge " +
                            pm.name(x) + (swap_rule ? " -> or <-> " : " -> ") + pm.name(y));
  }
  const VertexSet others = ~(bit(x) | bit(y));
  const VertexSet nx = pm.spouses(x) & others;
  const VertexSet ny = pm.spouses(y) & others;
  const VertexSet px = pm.parents(x) & others;
  const VertexSet py = pm.parents(y) & others;
  const VertexSet adj_x = pm.neighbors(x);
  const VertexSet adj_y = pm.neighbors(y);
  switch (rule) {
    case PearlRule::Rule1:
      return subset(nx | px, adj_y);
    case PearlRule::Rule2:
      return subset(ny | py, adj_x) && subset(nx | px, adj_y);
    case PearlRule::Rule1Prime:
      return subset(nx, pm.spouses(y)) && subset(px, pm.parents(y));
    case PearlRule::Rule2Prime:
      return subset(ny, pm.children(x)) && subset(nx, pm.children(y)) &&
             subset(px, pm.parents(y));
  }
  return false;
}

MixedGraph pearl_apply(const MixedGraph& pm, std::string_view x_name, std::string_view y_name,
                       PearlRule rule) {
  if (!pearl_rule_check(pm, x_name, y_name, rule)) {
    throw PreconditionError("rule " + std::string(to_string(rule)) + " does not apply to " +
                            std::string(x_name) + " - " + std::string(y_name));
  }
  const auto x = pm.index(x_name);
  const auto y = pm.index(y_name);
  MixedGraph out = pm;
  if (rule == PearlRule::Rule1 || rule == PearlRule::Rule1Prime) {
    if (pm.directed(x, y)) {
      out.set_marks(x, y, Mark::Arrow, Mark::Arrow);
    } else {
      out.set_marks(x, y, Mark::Tail, Mark::Arrow);
    }
  } else {
    out.set_marks(x, y, Mark::Arrow, Mark::Tail);
  }
  if (!is_acyclic_directed(out)) {
    throw PreconditionError("applying rule " + std::string(to_string(rule)) + " to " +
                            pm.name(x) + " - " + pm.name(y) + " creates a directed cycle");
  }
  return out;
}

std::string CounterexampleReport::describe() const {
  std::ostringstream out;
  auto pairs = [](const std::vector<std::pair<std::string, std::string>>& ps) {
    std::string s;
    for (const auto& [a, b] : ps) s += (s.empty() ? "" : ", ") + a + " - " + b;
    return s.empty() ? std::string("none") : s;
  };
  out << "# correlated-error model before\n" << serialize_graph(pearl_before);
  out << "# after reversing C -> D by rule 2\n" << serialize_graph(pearl_after);
  out << "# IPG before\n" << serialize_graph(ipg_before);
  out << "# IPG after\n" << serialize_graph(ipg_after);
  out << "# adjacencies gained: " << pairs(gained) << '\n';
  out << "# adjacencies lost: " << pairs(lost) << '\n';
  out << "# equivalent: " << (verdict.equivalent ? "yes" : "no") << '\n';
  if (verdict.witness) out << "# witness: " << describe_witness(*verdict.witness) << '\n';
  return out.str();
}

CounterexampleReport counterexample_report() {
  CounterexampleReport r;
  r.pearl_before = MixedGraph(Role::Pearl);
  for (const char* v : {"A", "B", "C", "D"}) r.pearl_before.add_vertex(v);
  r.pearl_before.add_directed("A", "B");
  r.pearl_before.add_bidirected("B", "C");
  r.pearl_before.add_directed("B", "D");
  r.pearl_before.add_directed("C", "D");
  r.pearl_after = pearl_apply(r.pearl_before, "C", "D", PearlRule::Rule2);
  r.model_before = pearl_to_dag(r.pearl_before);
  r.model_after = pearl_to_dag(r.pearl_after);
  r.ipg_before = ipg_of(r.model_before);
  r.ipg_after = ipg_of(r.model_after);
  const auto before = adjacency_pairs(r.ipg_before);
  const auto after = adjacency_pairs(r.ipg_after);
  std::set_difference(after.begin(), after.end(), before.begin(), before.end(),
                      std::back_inserter(r.gained));
  std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                      std::back_inserter(r.lost));
  r.verdict = semi_markov_equivalent(r.model_before, r.model_after, {MdgMode::Exact});
  return r;
}

}  // namespace semimarkov
