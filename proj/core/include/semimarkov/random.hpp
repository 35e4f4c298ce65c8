#pragma once

#include <cstddef>
#include <random>

#include "semimarkov/graph.hpp"

namespace semimarkov {

struct RandomModelParams {
  std::size_t observables = 4;
  std::size_t latents = 1;
  /// Probability of an edge between two vertices, oriented along a random order.
  double density = 0.3;
};

/// Random acyclic causal model with observables A, B, ... and latents L1, L2, ...
MixedGraph random_model(std::mt19937_64& rng, const RandomModelParams& params);

/// Random correlated-error model over A, B, ...: each pair gets no edge, a directed
/// edge along a random order, or a bidirected edge. At most `max_edges` edges.
MixedGraph random_pearl_model(std::mt19937_64& rng, std::size_t observables,
                              std::size_t max_edges, double density);

}  // namespace semimarkov
