#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "semimarkov/construction.hpp"
#include "semimarkov/format.hpp"
#include "semimarkov/ipg_calculus.hpp"
#include "semimarkov/random.hpp"
#include "semimarkov/separation.hpp"

namespace semimarkov {
namespace {

using testing::graph;

const char* kShortcut =
    "role causal-dag\nobs A B C\nlat L\nedge A -> B\nedge A -> C\nedge C -> B\n"
    "edge L -> C\nedge L -> B\n";
const char* kConfEdge = "role causal-dag\nobs A B\nlat L\nedge L -> A\nedge L -> B\nedge A -> B\n";
const char* kConf = "role causal-dag\nobs A B\nlat L\nedge L -> A\nedge L -> B\n";

nlohmann::json fixture(const std::string& name) {
  std::ifstream in(std::string(SEMIMARKOV_FIXTURE_DIR) + "/" + name);
  return nlohmann::json::parse(in);
}

bool contains_iso(const std::vector<MixedGraph>& gs, const MixedGraph& g) {
  for (const auto& x : gs) {
    if (isomorphic_modulo_latents(x, g)) return true;
  }
  return false;
}

TEST(RemoveEdge, Examples) {
  EXPECT_EQ(remove_edge(graph("role causal-dag\nobs A B C\nedge A -> B\nedge B -> C\n"), "B", "C"),
            graph("role causal-dag\nobs A B C\nedge A -> B\n"));
  EXPECT_EQ(remove_edge(graph("role causal-dag\nobs A B\nedge A -> B\n"), "A", "B"),
            graph("role causal-dag\nobs A B\n"));
  EXPECT_THROW(remove_edge(graph("role causal-dag\nobs A B\nedge A -> B\n"), "B", "A"),
               PreconditionError);
}

TEST(CollapseVertices, Examples) {
  EXPECT_EQ(collapse_vertices(graph("role causal-dag\nobs A B C\nlat L1 L2\nedge L1 -> A\n"
                                    "edge L1 -> B\nedge L2 -> B\nedge L2 -> C\n"),
                              "L1", "L2"),
            graph("role causal-dag\nobs A B C\nlat L2\nedge L2 -> A\nedge L2 -> B\nedge L2 -> C\n"));
  EXPECT_EQ(collapse_vertices(graph("role causal-dag\nobs A B\nlat L\nedge A -> L\nedge L -> B\n"),
                              "L", "A"),
            graph("role causal-dag\nobs A B\nedge A -> B\n"));
  EXPECT_THROW(collapse_vertices(graph("role causal-dag\nobs A B C\nedge A -> B\nedge B -> C\n"),
                                 "A", "C"),
               PreconditionError);
  EXPECT_THROW(collapse_vertices(graph(kConf), "L", "L"), PreconditionError);
}

TEST(CollapseVertices, HiddenSurvivesOnlyIfAllSourcesHidden) {
  const auto g = graph(
      "role causal-dag\nobs A B\nlat L M\nedge L -> A\nedge M -> A\nedge L -> B\nhidden A -> B\n");
  const auto r = collapse_vertices(g, "M", "L");
  EXPECT_TRUE(r.hidden(r.index("A"), r.index("B")));
}

TEST(EmbedLatent, Examples) {
  const auto m = graph("role causal-dag\nobs A B C\nlat L\nedge A -> B\nedge L -> B\nedge L -> C\n");
  EXPECT_EQ(embed_latent(m, "A", "B", "C", "L", true),
            graph("role causal-dag\nobs A B C\nlat L\nedge A -> L\nedge L -> B\nedge L -> C\n"));
  const auto el = embed_latent(m, "A", "B", "C", "L", false);
  EXPECT_TRUE(isomorphic_modulo_latents(
      el, graph("role causal-dag\nobs A B C\nlat L L2\nedge A -> L\nedge L -> B\nedge L -> C\n"
                "edge L2 -> B\nedge L2 -> C\n")));
  EXPECT_THROW(embed_latent(graph("role causal-dag\nobs A B C\nlat L\nedge A -> B\nedge L -> C\n"),
                            "A", "B", "C", "L", false),
               PreconditionError);
}

TEST(ConnectLatents, Examples) {
  EXPECT_EQ(connect_latents(graph("role causal-dag\nobs A B V\nlat L1 L2\nedge L1 -> A\n"
                                  "edge L1 -> V\nedge L2 -> V\nedge L2 -> B\n"),
                            "L1", "L2", "V"),
            graph("role causal-dag\nobs A B V\nlat L1 L2\nedge L1 -> A\nedge L1 -> L2\n"
                  "edge L2 -> V\nedge L2 -> B\n"));
  EXPECT_EQ(connect_latents(graph("role causal-dag\nobs V\nlat L1 L2\nedge L1 -> V\nedge L2 -> V\n"),
                            "L2", "L1", "V"),
            graph("role causal-dag\nobs V\nlat L1 L2\nedge L2 -> L1\nedge L1 -> V\n"));
  EXPECT_THROW(connect_latents(graph("role causal-dag\nobs V\nlat L1 L2\nedge L1 -> V\n"), "L1",
                               "L2", "V"),
               PreconditionError);
}

TEST(Expansions, DirectedOnly) {
  const auto ex = expansions(graph("role ipg\nobs A B\nedge A -> B\n"));
  ASSERT_EQ(ex.size(), 1U);
  EXPECT_EQ(ex[0], graph("role causal-dag\nobs A B\nedge A -> B\n"));
}

TEST(Expansions, BidirectedEdgeKeepsAllThree) {
  const auto ipg = graph("role ipg\nobs A B\nedge A <-> B\n");
  const auto ex = expansions(ipg);
  ASSERT_EQ(ex.size(), 3U);
  const std::string base = "role causal-dag\nobs A B\nlat L_AB\nedge L_AB -> A\nedge L_AB -> B\n";
  EXPECT_EQ(ex[0], graph(base));
  EXPECT_EQ(ex[1], graph(base + "hidden A -> B\n"));
  EXPECT_EQ(ex[2], graph(base + "hidden B -> A\n"));
  for (const auto& e : ex) EXPECT_EQ(ipg_of(e), ipg);
}

TEST(Expansions, RejectsHiddenEdgeThatChangesTheIpg) {
  const auto j = fixture("hidden_edge.json");
  const auto ipg = parse_graph(j["ipg"].get<std::string>());
  const auto rejected = j["rejected_hidden_edge"].get<std::string>();
  const auto ex = expansions(ipg);
  bool found = false;
  for (const auto& choice : expansion_choices(ipg)) {
    const auto cand = build_expansion(ipg, choice);
    std::string hidden;
    for (const auto& c : choice) {
      if (c.hidden == HiddenEdge::AToB) hidden = c.a + " -> " + c.b;
      if (c.hidden == HiddenEdge::BToA) hidden = c.b + " -> " + c.a;
    }
    const bool kept = std::find(ex.begin(), ex.end(), cand) != ex.end();
    EXPECT_EQ(kept, is_acyclic_directed(cand) && ipg_of(cand) == ipg);
    if (hidden == rejected && is_acyclic_directed(cand)) {
      EXPECT_NE(ipg_of(cand), ipg);
      EXPECT_FALSE(kept);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Expansions, InvalidIpgThrows) {
  EXPECT_THROW(
      expansions(graph("role ipg\nobs A B C D\nedge A -> B\nedge B <-> C\nedge B -> D\nedge D -> C\n")),
      PreconditionError);
}

TEST(EssentialEdge, Examples) {
  EXPECT_FALSE(is_essential_edge(graph(kShortcut), "A", "B"));
  EXPECT_TRUE(is_essential_edge(graph("role causal-dag\nobs A B C\nedge A -> B\nedge B -> C\n"),
                                "A", "B"));
  EXPECT_FALSE(is_essential_edge(
      graph("role causal-dag\nobs A B\nlat L\nedge L -> A\nedge L -> B\nhidden A -> B\n"), "A", "B"));
}

TEST(ColliderPattern, Examples) {
  EXPECT_TRUE(lemma4_nonessential(graph(kShortcut), "A", "B"));
  EXPECT_FALSE(lemma4_nonessential(graph(kConfEdge), "A", "B"));
  EXPECT_FALSE(lemma4_nonessential(
      graph("role causal-dag\nobs A B C\nlat L\nedge A -> B\nedge A -> C\nedge L -> C\n"
            "edge L -> B\n"),
      "A", "B"));
}

TEST(ColliderPattern, RejectsNonExpansions) {
  const auto deep = graph("role causal-dag\nobs A B\nlat L M\nedge M -> L\nedge L -> A\n"
                          "edge L -> B\nedge A -> B\n");
  EXPECT_THROW(lemma4_nonessential(deep, "A", "B"), PreconditionError);
}

TEST(Reductions, Examples) {
  const auto r = enumerate_reductions(graph(kConfEdge));
  EXPECT_TRUE(contains_iso(r, graph(kConf)));
  EXPECT_TRUE(enumerate_reductions(graph(kConf)).empty());
  EXPECT_TRUE(enumerate_reductions(graph("role causal-dag\nobs A B\nedge A -> B\n")).empty());
}

TEST(Reductions, BoundEnforced) {
  EXPECT_THROW(enumerate_reductions(graph(kShortcut), 3), BoundError);
}

TEST(Reductions, AgreeWithBreadthFirstOracle) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 60; ++t) {
    const auto m = random_model(rng, {3, 2, 0.4});
    std::set<std::string> fast;
    for (const auto& r : enumerate_reductions(m)) {
      EXPECT_EQ(ipg_of(r), ipg_of(m));
      fast.insert(canonical_form_modulo_latents(r));
    }
    EXPECT_EQ(fast, testing::reductions_bfs(m)) << serialize_graph(m);
  }
}

TEST(Minimal, Examples) {
  EXPECT_TRUE(is_minimal(graph(kConf)));
  EXPECT_FALSE(is_minimal(graph(kConfEdge)));
  EXPECT_TRUE(is_minimal(graph("role causal-dag\nobs A B\nedge A -> B\n")));
}

TEST(Stages, PruneRemovesShortcutEdge) {
  const auto p = prune_nonessential_edges(graph(kShortcut));
  EXPECT_EQ(ipg_of(p), ipg_of(graph(kShortcut)));
  EXPECT_FALSE(p.adjacent(p.index("A"), p.index("B")));
}

TEST(Stages, RemovalsAndCollapsesKeepTheIpg) {
  const auto m = graph("role causal-dag\nobs A B C\nlat L1 L2 L3\nedge L1 -> A\nedge L1 -> B\n"
                       "edge L2 -> B\nedge L2 -> C\nedge L3 -> A\nedge L3 -> C\nedge L3 -> B\n");
  const auto ipg = ipg_of(m);
  const auto removed = latent_removals(m);
  ASSERT_FALSE(removed.empty());
  for (const auto& r : removed) {
    EXPECT_EQ(ipg_of(r), ipg);
    EXPECT_LT(r.size(), m.size());
  }
  for (const auto& c : latent_collapses(m)) EXPECT_EQ(ipg_of(c), ipg);
}

TEST(Stages, EmbeddingGuardRejectsIpgChange) {
  const auto m = graph("role causal-dag\nobs A B C\nlat L\nedge A -> B\nedge L -> B\nedge L -> C\n");
  const auto star = embed_latent(m, "A", "B", "C", "L", true);
  EXPECT_NE(ipg_of(star), ipg_of(m));
  EXPECT_FALSE(contains_iso(latent_embeddings(m), star));
  for (const auto& e : latent_embeddings(m)) EXPECT_EQ(ipg_of(e), ipg_of(m));
  for (const auto& c : latent_connections(m)) EXPECT_EQ(ipg_of(c), ipg_of(m));
}

TEST(MinimalModels, Examples) {
  auto one = minimal_models(graph("role ipg\nobs A B\nedge A -> B\n"));
  ASSERT_EQ(one.size(), 1U);
  EXPECT_EQ(one[0], graph("role causal-dag\nobs A B\nedge A -> B\n"));

  auto conf = minimal_models(graph("role ipg\nobs A B\nedge A <-> B\n"));
  ASSERT_EQ(conf.size(), 1U);
  EXPECT_TRUE(isomorphic_modulo_latents(conf[0], graph(kConf)));

  auto chain = minimal_models(graph("role ipg\nobs A B C\nedge A -> B\nedge B -> C\n"));
  ASSERT_EQ(chain.size(), 1U);
  EXPECT_EQ(chain[0], graph("role causal-dag\nobs A B C\nedge A -> B\nedge B -> C\n"));
}

TEST(MinimalModels, ErrorsAndBounds) {
  EXPECT_THROW(minimal_models(graph("role ipg\nobs A B C D\nedge A -> B\nedge B <-> C\n"
                                    "edge B -> D\nedge D -> C\n")),
               PreconditionError);
  EXPECT_THROW(minimal_models(graph("role ipg\nobs A B C\nedge A <-> B\nedge B <-> C\n"), 4),
               BoundError);
}

TEST(MinimalModels, RoundTripOnRandomModels) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 25; ++t) {
    const auto m = random_model(rng, {4, 2, 0.35});
    const auto ipg = ipg_of(m);
    const auto out = minimal_models(ipg);
    ASSERT_FALSE(out.empty()) << serialize_graph(m);
    for (std::size_t i = 0; i < out.size(); ++i) {
      EXPECT_EQ(ipg_of(out[i]), ipg);
      EXPECT_TRUE(is_minimal(out[i]));
      for (std::size_t j = i + 1; j < out.size(); ++j) {
        EXPECT_FALSE(isomorphic_modulo_latents(out[i], out[j]));
      }
    }
  }
}

}  // namespace
}  // namespace semimarkov
