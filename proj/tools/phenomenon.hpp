#pragma once

#include <optional>
#include <string>
#include <utility>

#include "semimarkov/graph.hpp"

namespace semimarkov {

/// First observable pair (by name) that shares a latent parent in m1 and is neither
/// adjacent nor shares a latent parent in m2, provided m1 has a latent over three or more
/// observables and m2 has a latent with an observable parent.
inline std::optional<std::pair<std::string, std::string>> phenomenon_pair(const MixedGraph& m1,
                                                                          const MixedGraph& m2) {
  bool wide = false;
  for_each_bit(m1.latents(), [&](std::size_t l) {
    wide = wide || std::popcount(m1.children(l) & m1.observables()) >= 3;
  });
  bool embedded = false;
  for_each_bit(m2.latents(), [&](std::size_t l) {
    embedded = embedded || (m2.parents(l) & m2.observables()) != 0;
  });
  if (!wide || !embedded) return std::nullopt;
  auto latent_sibling = [](const MixedGraph& m, std::size_t x, std::size_t y) {
    return (m.parents(x) & m.parents(y) & m.latents()) != 0;
  };
  for (std::size_t x = 0; x < m1.size(); ++x) {
    for (std::size_t y = x + 1; y < m1.size(); ++y) {
      if (m1.is_latent(x) || m1.is_latent(y) || !latent_sibling(m1, x, y)) continue;
      const auto x2 = m2.index(m1.name(x));
      const auto y2 = m2.index(m1.name(y));
      if (!m2.adjacent(x2, y2) && !latent_sibling(m2, x2, y2)) {
        return std::pair{m1.name(x), m1.name(y)};
      }
    }
  }
  return std::nullopt;
}

}  // namespace semimarkov
