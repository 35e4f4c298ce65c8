// Searches MDGs over 5 observables (derived from random models) for two fixtures:
//  - a pair of equivalent minimal models, one with a latent over three observables and
//    one with an embedded latent that separates a pair the first model joins;
//  - an IPG with an acyclic hidden-edge expansion that is rejected for changing the IPG.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>

#include "semimarkov/construction.hpp"
#include "semimarkov/equivalence.hpp"
#include "semimarkov/format.hpp"
#include "semimarkov/random.hpp"
#include "phenomenon.hpp"

using namespace semimarkov;

namespace {

std::optional<std::string> rejected_hidden_choice(const MixedGraph& ipg) {
  for (const auto& choice : expansion_choices(ipg)) {
    const auto cand = build_expansion(ipg, choice);
    if (!is_acyclic_directed(cand) || ipg_of(cand) == ipg) continue;
    for (const auto& c : choice) {
      if (c.hidden == HiddenEdge::AToB) return c.a + " -> " + c.b;
      if (c.hidden == HiddenEdge::BToA) return c.b + " -> " + c.a;
    }
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixture search over 5-observable MDGs"};
  std::uint64_t seed = 1;
  std::size_t limit = 200000;
  std::string out_dir = ".";
  app.add_option("--seed", seed, "First seed");
  app.add_option("--limit", limit, "Number of random models to try");
  app.add_option("--out", out_dir, "Directory for the JSON fixtures");
  CLI11_PARSE(app, argc, argv);

  const auto start = std::chrono::steady_clock::now();
  std::set<std::string> seen;
  bool have_pair = false;
  bool have_hidden = false;
  for (std::uint64_t s = seed; s < seed + limit && !(have_pair && have_hidden); ++s) {
    std::mt19937_64 rng(s);
    const auto model = random_model(rng, {5, 1 + s % 3, 0.3 + 0.1 * static_cast<double>(s % 3)});
    MixedGraph mdg;
    try {
      mdg = mdg_of(model, {MdgMode::Exact});
    } catch (const BoundError&) {
      continue;  // too many circles for exact extraction
    }
    if (!seen.insert(serialize_graph(mdg)).second) continue;
    const auto sig = d_separation_signature(model);

    std::vector<MixedGraph> minimal;
    for (const auto& comp : completions(mdg)) {
      if (!have_hidden) {
        if (auto rejected = rejected_hidden_choice(comp)) {
          nlohmann::json j{{"seed", s},
                           {"ipg", serialize_graph(comp)},
                           {"rejected_hidden_edge", *rejected}};
          std::ofstream(out_dir + "/hidden_edge.json") << j.dump(2) << '\n';
          std::cout << "hidden-edge fixture from seed " << s << '\n';
          have_hidden = true;
        }
      }
      bool equivalent = false;
      for (const auto& e : expansions(comp)) {
        if (d_separation_signature(e) == sig) {
          equivalent = true;
          break;
        }
      }
      if (!equivalent || have_pair) continue;
      for (auto& m : minimal_models(comp)) minimal.push_back(std::move(m));
    }
    if (have_pair) continue;
    for (const auto& m1 : minimal) {
      for (const auto& m2 : minimal) {
        auto pair = phenomenon_pair(m1, m2);
        if (!pair || d_separation_signature(m1) != d_separation_signature(m2)) continue;
        nlohmann::json j{{"seed", s},
                         {"mdg", serialize_graph(mdg)},
                         {"m1", serialize_graph(m1)},
                         {"m2", serialize_graph(m2)},
                         {"pair", {pair->first, pair->second}}};
        std::ofstream(out_dir + "/phenomenon.json") << j.dump(2) << '\n';
        std::cout << "phenomenon fixture from seed " << s << " (pair " << pair->first << ", "
                  << pair->second << ")\n";
        have_pair = true;
        break;
      }
      if (have_pair) break;
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "searched " << seen.size() << " distinct MDGs in " << secs << " s\n";
  return have_pair && have_hidden ? 0 : 1;
}
