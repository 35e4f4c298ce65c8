#include "semimarkov/random.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace semimarkov {

namespace {

std::string observable_name(std::size_t i) {
  std::string s(1, static_cast<char>('A' + i % 26));
  if (i >= 26) s += std::to_string(i / 26);
  return s;
}

}  // namespace

MixedGraph random_model(std::mt19937_64& rng, const RandomModelParams& params) {
  MixedGraph m(Role::CausalDag);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < params.observables; ++i) {
    names.push_back(observable_name(i));
    m.add_vertex(names.back());
  }
  for (std::size_t i = 0; i < params.latents; ++i) {
    names.push_back("L" + std::to_string(i + 1));
    m.add_vertex(names.back(), VertexKind::Latent);
  }
  std::vector<std::size_t> order(names.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution edge(params.density);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (edge(rng)) m.add_directed(names[order[i]], names[order[j]]);
    }
  }
  return m;
}

MixedGraph random_pearl_model(std::mt19937_64& rng, std::size_t observables,
                              std::size_t max_edges, double density) {
  MixedGraph m(Role::Pearl);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < observables; ++i) {
    names.push_back(observable_name(i));
    m.add_vertex(names.back());
  }
  std::vector<std::size_t> order(observables);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) pairs.emplace_back(order[i], order[j]);
  }
  std::shuffle(pairs.begin(), pairs.end(), rng);
  std::bernoulli_distribution edge(density);
  std::bernoulli_distribution bidirected(0.3);
  std::size_t count = 0;
  for (auto [a, b] : pairs) {
    if (count == max_edges) break;
    if (!edge(rng)) continue;
    if (bidirected(rng)) {
      m.add_bidirected(names[a], names[b]);
    } else {
      m.add_directed(names[a], names[b]);
    }
    ++count;
  }
  return m;
}

}  // namespace semimarkov
