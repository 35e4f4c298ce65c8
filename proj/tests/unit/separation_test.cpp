#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "semimarkov/random.hpp"
#include "semimarkov/separation.hpp"

namespace semimarkov {
namespace {

using testing::graph;

const char* kConf = "role causal-dag\nobs A B\nlat L\nedge L -> A\nedge L -> B\n";
const char* kChain = "role causal-dag\nobs A B C\nedge A -> B\nedge B -> C\n";
const char* kCollider = "role causal-dag\nobs A B C\nedge A -> B\nedge C -> B\n";
const char* kReversalBefore =
    "role causal-dag\nobs A B C D\nlat K\nedge A -> B\nedge B -> D\nedge C -> D\n"
    "edge K -> B\nedge K -> C\n";
const char* kReversalAfter =
    "role causal-dag\nobs A B C D\nlat K\nedge A -> B\nedge B -> D\nedge D -> C\n"
    "edge K -> B\nedge K -> C\n";
const char* kShortcut =
    "role causal-dag\nobs A B C\nlat L\nedge A -> B\nedge A -> C\nedge C -> B\n"
    "edge L -> C\nedge L -> B\n";

Path path_of(const MixedGraph& g, std::vector<std::string> vs) {
  Path p;
  for (std::size_t k = 0; k + 1 < vs.size(); ++k) {
    p.edges.push_back(oriented_edge(g, g.index(vs[k]), g.index(vs[k + 1])));
  }
  p.vertices = std::move(vs);
  return p;
}

TEST(Collider, Examples) {
  const auto col = graph(kCollider);
  EXPECT_TRUE(is_collider_on(col, path_of(col, {"A", "B", "C"}), "B"));
  const auto chain = graph(kChain);
  EXPECT_FALSE(is_collider_on(chain, path_of(chain, {"A", "B", "C"}), "B"));
  const auto conf = graph(kConf);
  EXPECT_FALSE(is_collider_on(conf, path_of(conf, {"A", "L", "B"}), "L"));
  EXPECT_THROW(is_collider_on(chain, path_of(chain, {"A", "B", "C"}), "A"), PreconditionError);
}

TEST(DSeparation, Examples) {
  EXPECT_TRUE(d_separated(graph(kChain), "A", "C", {"B"}));
  EXPECT_FALSE(d_separated(graph(kChain), "A", "C", {}));
  EXPECT_TRUE(d_separated(graph(kCollider), "A", "C", {}));
  EXPECT_FALSE(d_separated(graph(kCollider), "A", "C", {"B"}));
  EXPECT_TRUE(d_separated(graph(kReversalBefore), "A", "C", {}));
  EXPECT_FALSE(d_separated(graph(kReversalAfter), "A", "C", {}));
}

TEST(DSeparation, OracleExamples) {
  const auto edge = graph("role causal-dag\nobs A B C\nedge A -> B\n");
  EXPECT_FALSE(d_separated_oracle(edge, "A", "B", {}));
  EXPECT_FALSE(d_separated_oracle(edge, "A", "B", {"C"}));
  EXPECT_TRUE(d_separated_oracle(graph("role causal-dag\nobs A B\n"), "A", "B", {}));
  EXPECT_TRUE(d_separated_oracle(graph(kReversalBefore), "A", "C", {}));
  EXPECT_FALSE(d_separated_oracle(graph(kReversalAfter), "A", "C", {}));
}

TEST(DSeparation, Preconditions) {
  EXPECT_THROW(d_separated(graph(kChain), "A", "A", {}), PreconditionError);
  EXPECT_THROW(d_separated(graph(kChain), "A", "C", {"A"}), PreconditionError);
  EXPECT_THROW(d_separated(graph(kChain), "A", "Z", {}), PreconditionError);
}

TEST(DSeparation, DescendantOfColliderActivates) {
  const auto g = graph("role causal-dag\nobs A B C D\nedge A -> B\nedge C -> B\nedge B -> D\n");
  EXPECT_FALSE(d_separated(g, "A", "C", {"D"}));
}

TEST(DSeparation, FastOracleAndMoralAgree) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 150; ++t) {
    const auto m = random_model(rng, {5, 2, 0.35});
    const auto n = m.size();
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        const VertexSet rest = ((VertexSet{1} << n) - 1) & ~bit(a) & ~bit(b);
        for (VertexSet w = rest;; w = (w - 1) & rest) {
          const bool fast = d_separated(m, a, b, w);
          ASSERT_EQ(fast, d_separated_oracle(m, a, b, w));
          ASSERT_EQ(fast, testing::dsep_moral(m, a, b, w));
          if (w == 0) break;
        }
      }
    }
  }
}

TEST(Signature, Examples) {
  const auto conf = d_separation_signature(graph(kConf));
  ASSERT_EQ(conf.entries().size(), 1U);
  EXPECT_FALSE(conf.entries()[0].separated);

  const auto chain = d_separation_signature(graph(kChain));
  for (const auto& e : chain.entries()) {
    const bool expect = e.a == "A" && e.b == "C" && e.w == std::vector<std::string>{"B"};
    EXPECT_EQ(e.separated, expect) << e.a << e.b;
  }
  EXPECT_EQ(chain.entries().size(), 6U);

  EXPECT_EQ(chain, d_separation_signature(graph(
                       "role causal-dag\nobs A B C\nlat L\nedge L -> A\nedge L -> B\nedge B -> C\n")));
}

TEST(Signature, EntryOrderAndFirstDifference) {
  const auto a = d_separation_signature(graph(kReversalBefore));
  const auto b = d_separation_signature(graph(kReversalAfter));
  const auto d = a.first_difference(b);
  ASSERT_TRUE(d);
  EXPECT_EQ(d->a, "A");
  EXPECT_EQ(d->b, "C");
  EXPECT_TRUE(d->w.empty());
  EXPECT_TRUE(d->separated);
  EXPECT_FALSE(a.first_difference(a));
  const auto order = Signature::subset_order(3);
  ASSERT_EQ(order.size(), 8U);
  EXPECT_EQ(order[0], 0U);
  EXPECT_EQ(order[1], 1U);
  EXPECT_EQ(order[7], 7U);
}

TEST(Signature, BoundEnforced) {
  MixedGraph g;
  for (int k = 0; k < 4; ++k) g.add_vertex(std::string(1, static_cast<char>('A' + k)));
  EXPECT_THROW(d_separation_signature(g, 3), BoundError);
}

TEST(Signature, MatchesMoralOracle) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 80; ++t) {
    const auto m = random_model(rng, {5, 2, 0.3});
    EXPECT_EQ(d_separation_signature(m), testing::moral_signature(m));
  }
}

TEST(Inducing, Examples) {
  EXPECT_EQ(classify_inducing(graph(kConf), {"A", "B"}, "A", "B"),
            (InducingClassification{true, true, true}));
  EXPECT_FALSE(classify_inducing(graph(kChain), {"A", "B", "C"}, "A", "C").exists);
  EXPECT_EQ(classify_inducing(graph(kShortcut), {"A", "B", "C"}, "A", "B"),
            (InducingClassification{true, false, true}));
}

TEST(Inducing, FastMatchesPathFilter) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 150; ++t) {
    const auto m = random_model(rng, {5, 2, 0.35});
    const auto anc = ancestor_sets(m);
    const auto s = m.observables();
    for (std::size_t a = 0; a < m.size(); ++a) {
      for (std::size_t b = a + 1; b < m.size(); ++b) {
        if (!contains(s, a) || !contains(s, b)) continue;
        ASSERT_EQ(classify_inducing(m, s, a, b, anc), classify_inducing_oracle(m, s, a, b));
      }
    }
    EXPECT_EQ(ipg_of(m), testing::ipg_by_paths(m));
  }
}

TEST(Ipg, Examples) {
  EXPECT_EQ(ipg_of(graph(kConf)), graph("role ipg\nobs A B\nedge A <-> B\n"));
  EXPECT_EQ(ipg_of(graph(kReversalBefore)),
            graph("role ipg\nobs A B C D\nedge A -> B\nedge B <-> C\nedge B -> D\nedge C -> D\n"));
  EXPECT_EQ(ipg_of(graph(kReversalAfter)),
            graph("role ipg\nobs A B C D\nedge A -> B\nedge B <-> C\nedge B -> D\nedge D -> C\n"
                  "edge A -> C\n"));
  EXPECT_EQ(ipg_of(graph(kChain)), graph("role ipg\nobs A B C\nedge A -> B\nedge B -> C\n"));
}

TEST(Ipg, SubsetOfObservables) {
  const auto g = ipg_of(graph(kChain), {"A", "C"});
  EXPECT_EQ(g, graph("role ipg\nobs A C\nedge A -> C\n"));
}

TEST(Ipg, SeparatorDuality) {
  EXPECT_TRUE(inducing_iff_no_separator_check(graph(kConf), {"A", "B"}, "A", "B"));
  EXPECT_TRUE(inducing_iff_no_separator_check(graph(kChain), {"A", "B", "C"}, "A", "C"));
  EXPECT_TRUE(inducing_iff_no_separator_check(graph(kReversalAfter), {"A", "B", "C", "D"}, "A", "C"));
}

}  // namespace
}  // namespace semimarkov
