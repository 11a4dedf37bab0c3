#include "faithlab/causal.hpp"

#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace faithlab {

std::array<LocalStrategy, 16> local_deterministic_strategies() {
  std::array<LocalStrategy, 16> out{};
  for (int k = 0; k < 16; ++k) {
    out[static_cast<std::size_t>(k)] = {{k & 1, (k >> 1) & 1}, {(k >> 2) & 1, (k >> 3) & 1}};
  }
  return out;
}

std::array<std::array<double, 2>, 2> strategy_correlators(const LocalStrategy& s) {
  std::array<std::array<double, 2>, 2> e{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) e[i][j] = s.alice[i] == s.bob[j] ? 1.0 : -1.0;
  }
  return e;
}

double lhv_chsh_bound(const ChshSpec&) {
  // Deterministic outcomes do not depend on the angles themselves, only on
  // which of the two local settings was chosen.
  double best = 0.0;
  for (const auto& s : local_deterministic_strategies()) {
    best = std::max(best, std::abs(chsh_value(strategy_correlators(s))));
  }
  return best;
}

EventBatch sample_local_model(const ChshSpec& spec, std::span<const double, 16> weights, std::size_t n,
                              std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("event count must be at least 1");
  std::array<double, 16> cdf{};
  double total = 0.0;
  for (std::size_t k = 0; k < 16; ++k) {
    if (!(weights[k] >= 0.0)) throw std::invalid_argument("strategy weights must be non-negative");
    total += weights[k];
    cdf[k] = total;
  }
  if (!(total > 0.0)) throw std::invalid_argument("strategy weights must not all be zero");

  const auto strategies = local_deterministic_strategies();
  EventBatch batch;
  batch.grid = {{spec.a0, spec.a1}, {spec.b0, spec.b1}};
  batch.seed = seed;
  batch.events.resize(n);
  for (std::size_t c = 0; c * kChunkSize < n; ++c) {
    auto g = detail::stream_engine(seed, c);
    for (std::size_t k = c * kChunkSize; k < std::min(n, (c + 1) * kChunkSize); ++k) {
      auto& ev = batch.events[k];
      ev.alpha_index = static_cast<std::uint8_t>(detail::uniform_below(g, 2));
      ev.beta_index = static_cast<std::uint8_t>(detail::uniform_below(g, 2));
      const double u = detail::unit_uniform(g) * total;
      const auto pick = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      const auto& s = strategies[std::min<std::size_t>(pick, 15)];
      ev.first_outcome = static_cast<std::uint8_t>(s.alice[ev.alpha_index]);
      ev.second_outcome = static_cast<std::uint8_t>(s.bob[ev.beta_index]);
    }
  }
  return batch;
}

}  // namespace faithlab
