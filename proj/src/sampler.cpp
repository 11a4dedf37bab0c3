#include "faithlab/sampler.hpp"

#include "faithlab/errors.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <thread>

namespace faithlab {
namespace {

using detail::unit_uniform;

std::uint8_t uniform_index(std::mt19937_64& g, std::size_t k) {
  return static_cast<std::uint8_t>(detail::uniform_below(g, k));
}

struct PairLaw {
  double agree = 1.0;  // P(B = first | settings)
};

}  // namespace

std::string SettingPolicy::name() const {
  switch (kind) {
    case Kind::uniform_random: return "uniform-random";
    case Kind::fixed: return "fixed";
    case Kind::round_robin: return "round-robin";
  }
  return "unknown";
}

SettingPolicy SettingPolicy::parse(const std::string& name, int i, int j) {
  if (name == "uniform-random" || name == "uniform") return uniform();
  if (name == "fixed") return fixed(i, j);
  if (name == "round-robin") return round_robin();
  throw std::invalid_argument("unknown setting policy: " + name);
}

double effective_input_weight(const ExperimentKind& experiment, const DemonPolicy& demon) {
  switch (experiment.variant()) {
    case ExperimentKind::Variant::eprb: return 0.5;
    case ExperimentKind::Variant::seprb: return experiment.input_weight();
    case ExperimentKind::Variant::input_controlled_seprb: return demon.input_weight;
  }
  return 0.5;
}

unsigned default_worker_count() {
  if (const char* env = std::getenv("FAITHLAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

EventBatch sample(const ExperimentKind& experiment, const SettingsGrid& grid,
                  const SettingPolicy& policy, const DemonPolicy& demon, std::size_t n,
                  std::uint64_t seed, unsigned workers) {
  if (grid.alpha.empty() || grid.beta.empty()) {
    throw std::invalid_argument("settings grid must be non-empty on both wings");
  }
  if (grid.alpha.size() > 255 || grid.beta.size() > 255) {
    throw std::invalid_argument("settings grid is limited to 255 angles per wing");
  }
  if (n == 0) throw std::invalid_argument("event count must be at least 1");
  const double p = effective_input_weight(experiment, demon);
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("demon input weight must lie in [0, 1]");
  if (policy.kind == SettingPolicy::Kind::fixed &&
      (policy.alpha_index < 0 || policy.beta_index < 0 ||
       static_cast<std::size_t>(policy.alpha_index) >= grid.alpha.size() ||
       static_cast<std::size_t>(policy.beta_index) >= grid.beta.size())) {
    throw std::invalid_argument("fixed setting indices outside the grid");
  }

  const std::size_t na = grid.alpha.size();
  const std::size_t nb = grid.beta.size();
  std::vector<PairLaw> law(na * nb);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      law[i * nb + j].agree = agreement_probability(grid.alpha[i].value(), grid.beta[j].value());
    }
  }

  EventBatch batch;
  batch.experiment = experiment;
  batch.grid = grid;
  batch.seed = seed;
  batch.policy = policy;
  batch.demon = demon;
  batch.events.resize(n);

  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  auto run_chunk = [&](std::size_t c) {
    std::mt19937_64 g = detail::stream_engine(seed, c);
    const std::size_t begin = c * kChunkSize;
    const std::size_t end = std::min(n, begin + kChunkSize);
    for (std::size_t k = begin; k < end; ++k) {
      EventRecord& ev = batch.events[k];
      switch (policy.kind) {
        case SettingPolicy::Kind::uniform_random:
          ev.alpha_index = uniform_index(g, na);
          ev.beta_index = uniform_index(g, nb);
          break;
        case SettingPolicy::Kind::fixed:
          ev.alpha_index = static_cast<std::uint8_t>(policy.alpha_index);
          ev.beta_index = static_cast<std::uint8_t>(policy.beta_index);
          break;
        case SettingPolicy::Kind::round_robin: {
          const std::size_t pair = k % (na * nb);
          ev.alpha_index = static_cast<std::uint8_t>(pair / nb);
          ev.beta_index = static_cast<std::uint8_t>(pair % nb);
          break;
        }
      }
      const std::uint8_t first = unit_uniform(g) < p ? 1 : 0;
      const bool agree = unit_uniform(g) < law[ev.alpha_index * nb + ev.beta_index].agree;
      ev.first_outcome = first;
      ev.second_outcome = agree ? first : static_cast<std::uint8_t>(1 - first);
    }
  };

  const unsigned lanes = static_cast<unsigned>(
      std::min<std::size_t>(workers == 0 ? default_worker_count() : workers, chunks));
  if (lanes <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(lanes);
    for (unsigned w = 0; w < lanes; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < chunks; c += lanes) run_chunk(c);
      });
    }
  }
  return batch;
}

EventBatch project_observables(EventBatch batch, const DemonPolicy& demon) {
  if (demon.visibility == Visibility::revealed) return batch;
  batch.first_outcome_visible = false;
  for (auto& ev : batch.events) ev.first_outcome = 0;
  return batch;
}

JointTable empirical_joint(const EventBatch& batch, int alpha_index, int beta_index) {
  if (!batch.first_outcome_visible) {
    throw PreconditionError("first outcome column is hidden in this batch");
  }
  JointTable::Cells counts = JointTable::Cells::Zero(4);
  for (const auto& ev : batch.events) {
    if (ev.alpha_index == alpha_index && ev.beta_index == beta_index) {
      counts(2 * ev.first_outcome + ev.second_outcome) += 1.0;
    }
  }
  const double total = counts.sum();
  if (total == 0.0) throw PreconditionError("no events at the requested setting pair");
  return JointTable({{kFirst, 2}, {kSecond, 2}}, counts / total);
}

double l1_distance(const JointTable& a, const JointTable& b) {
  if (a.variables() != b.variables()) throw std::invalid_argument("tables range over different variables");
  return (a.cells() - b.cells()).abs().sum();
}

}  // namespace faithlab
