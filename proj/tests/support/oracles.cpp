#include "oracles.hpp"

#include <deque>

#include "semimarkov/construction.hpp"
#include "semimarkov/format.hpp"

namespace semimarkov::testing {

namespace {

std::string letter(std::size_t i) { return std::string(1, static_cast<char>('A' + i)); }

}  // namespace

MixedGraph graph(const std::string& text) { return parse_graph(text); }

bool dsep_moral(const MixedGraph& m, std::size_t a, std::size_t b, VertexSet w) {
  const std::size_t n = m.size();
  // Ancestral closure of {a, b} and w.
  VertexSet keep = bit(a) | bit(b) | w;
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t v = 0; v < n; ++v) {
      if (!contains(keep, v)) continue;
      const VertexSet p = m.parents(v) & ~keep;
      if (p != 0) {
        keep |= p;
        grew = true;
      }
    }
  }
  std::vector<VertexSet> adj(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (!contains(keep, v)) continue;
    const VertexSet p = m.parents(v);
    for (std::size_t u = 0; u < n; ++u) {
      if (!contains(p, u)) continue;
      adj[u] |= bit(v);
      adj[v] |= bit(u);
      for (std::size_t x = 0; x < n; ++x) {
        if (x != u && contains(p, x)) adj[u] |= bit(x);
      }
    }
  }
  VertexSet seen = bit(a);
  std::vector<std::size_t> stack{a};
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    if (v == b) return false;
    for (std::size_t u = 0; u < n; ++u) {
      if (contains(adj[v], u) && !contains(seen, u) && !contains(w, u)) {
        seen |= bit(u);
        stack.push_back(u);
      }
    }
  }
  return true;
}

Signature moral_signature(const MixedGraph& m) {
  Signature sig(m.observable_names());
  std::vector<std::size_t> obs;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m.is_latent(i)) obs.push_back(i);
  }
  const std::size_t k = obs.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      for (VertexSet w = 0; w < (VertexSet{1} << k); ++w) {
        if (contains(w, i) || contains(w, j)) continue;
        VertexSet wm = 0;
        for (std::size_t t = 0; t < k; ++t) {
          if (contains(w, t)) wm |= bit(obs[t]);
        }
        sig.set(i, j, w, dsep_moral(m, obs[i], obs[j], wm));
      }
    }
  }
  return sig;
}

MixedGraph ipg_by_paths(const MixedGraph& m) {
  const auto anc = ancestor_sets(m);
  MixedGraph out(Role::Ipg);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m.is_latent(i)) out.add_vertex(m.name(i));
  }
  for (std::size_t a = 0; a < m.size(); ++a) {
    for (std::size_t b = a + 1; b < m.size(); ++b) {
      if (m.is_latent(a) || m.is_latent(b)) continue;
      bool any = false;
      bool into_a = false;
      bool into_b = false;
      for (const auto& p : enumerate_simple_paths(m, m.name(a), m.name(b))) {
        bool inducing = true;
        for (std::size_t k = 1; k + 1 < p.vertices.size(); ++k) {
          const auto v = m.index(p.vertices[k]);
          const bool collider = p.edges[k - 1].mark_at(p.vertices[k]) == Mark::Arrow &&
                                p.edges[k].mark_at(p.vertices[k]) == Mark::Arrow;
          if (!m.is_latent(v) && !collider) inducing = false;
          if (collider && !contains(anc[a], v) && !contains(anc[b], v)) inducing = false;
        }
        if (!inducing) continue;
        any = true;
        into_a = into_a || p.edges.front().mark_at(m.name(a)) == Mark::Arrow;
        into_b = into_b || p.edges.back().mark_at(m.name(b)) == Mark::Arrow;
      }
      if (!any) continue;
      out.add_edge(m.name(a), m.name(b), into_a ? Mark::Arrow : Mark::Tail,
                   into_b ? Mark::Arrow : Mark::Tail);
    }
  }
  return out;
}

std::set<std::string> reductions_bfs(const MixedGraph& m) {
  const auto target = ipg_of(m);
  const auto names = m.observable_names();
  std::set<std::string> seen{canonical_form_modulo_latents(m)};
  std::set<std::string> out;
  std::deque<MixedGraph> queue{m};
  while (!queue.empty()) {
    const auto g = queue.front();
    queue.pop_front();
    std::vector<MixedGraph> next;
    for (const auto& e : g.edges()) next.push_back(remove_edge(g, e.u, e.v));
    for (std::size_t a = 0; a < g.size(); ++a) {
      for (std::size_t b = 0; b < g.size(); ++b) {
        if (a == b) continue;
        try {
          next.push_back(collapse_vertices(g, g.name(a), g.name(b)));
        } catch (const PreconditionError&) {
        }
      }
    }
    for (auto& n : next) {
      const auto key = canonical_form_modulo_latents(n);
      if (!seen.insert(key).second) continue;
      if (n.observable_names() == names && ipg_of(n) == target) out.insert(key);
      queue.push_back(std::move(n));
    }
  }
  return out;
}

std::vector<MixedGraph> all_extended_graphs(std::size_t observables) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < observables; ++i) {
    for (std::size_t j = i + 1; j < observables; ++j) pairs.emplace_back(i, j);
  }
  std::size_t total = 1;
  for (std::size_t k = 0; k < pairs.size(); ++k) total *= 4;
  std::vector<MixedGraph> out;
  out.reserve(total);
  for (std::size_t code = 0; code < total; ++code) {
    MixedGraph g(Role::Ipg);
    for (std::size_t i = 0; i < observables; ++i) g.add_vertex(letter(i));
    std::size_t c = code;
    for (auto [i, j] : pairs) {
      switch (c % 4) {
        case 1:
          g.add_directed(letter(i), letter(j));
          break;
        case 2:
          g.add_directed(letter(j), letter(i));
          break;
        case 3:
          g.add_bidirected(letter(i), letter(j));
          break;
        default:
          break;
      }
      c /= 4;
    }
    out.push_back(std::move(g));
  }
  return out;
}

bool directed_paths_respect_ancestry(const MixedGraph& m) {
  const auto ipg = ipg_of(m);
  const auto ipg_anc = ancestor_sets(ipg);
  const auto anc = ancestor_sets(m);
  for (std::size_t i = 0; i < ipg.size(); ++i) {
    for (std::size_t j = 0; j < ipg.size(); ++j) {
      if (i == j || !contains(ipg_anc[j], i)) continue;
      if (!contains(anc[m.index(ipg.name(j))], m.index(ipg.name(i)))) return false;
    }
  }
  return true;
}

std::vector<MixedGraph> all_dags(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<MixedGraph> out;
  // Each pair: none, i -> j, j -> i; keep acyclic ones.
  std::size_t total = 1;
  for (std::size_t k = 0; k < pairs.size(); ++k) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    MixedGraph g(Role::CausalDag);
    for (std::size_t i = 0; i < n; ++i) g.add_vertex(letter(i));
    std::size_t c = code;
    for (auto [i, j] : pairs) {
      if (c % 3 == 1) g.add_directed(letter(i), letter(j));
      if (c % 3 == 2) g.add_directed(letter(j), letter(i));
      c /= 3;
    }
    if (is_acyclic_directed(g)) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace semimarkov::testing
