#pragma once

#include "faithlab/angle.hpp"
#include "faithlab/corestats.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace faithlab {

/// Settings available on each wing; events refer to them by index.
struct SettingsGrid {
  std::vector<Angle> alpha;
  std::vector<Angle> beta;

  friend bool operator==(const SettingsGrid&, const SettingsGrid&) = default;
};

/// How the setting pair of each event is chosen.
struct SettingPolicy {
  enum class Kind { uniform_random, fixed, round_robin };

  Kind kind = Kind::uniform_random;
  int alpha_index = 0;
  int beta_index = 0;

  static SettingPolicy uniform() { return {}; }
  static SettingPolicy fixed(int i, int j) { return {Kind::fixed, i, j}; }
  static SettingPolicy round_robin() { return {Kind::round_robin, 0, 0}; }

  std::string name() const;
  static SettingPolicy parse(const std::string& name, int i = 0, int j = 0);

  friend bool operator==(const SettingPolicy&, const SettingPolicy&) = default;
};

enum class Visibility { hidden, revealed };

/// The demon feeding the input channel of the sequential experiments:
/// i.i.d. Bernoulli(input_weight) on the left channel.
struct DemonPolicy {
  double input_weight = 0.5;
  Visibility visibility = Visibility::hidden;

  friend bool operator==(const DemonPolicy&, const DemonPolicy&) = default;
};

/// One trial. `first_outcome` is A for EPRB and the input A' for the
/// sequential experiments; `second_outcome` is B.
struct EventRecord {
  std::uint8_t alpha_index = 0;
  std::uint8_t beta_index = 0;
  std::uint8_t first_outcome = 0;
  std::uint8_t second_outcome = 0;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct EventBatch {
  ExperimentKind experiment = ExperimentKind::eprb();
  SettingsGrid grid;
  std::uint64_t seed = 0;
  SettingPolicy policy;
  DemonPolicy demon;
  /// False once the first outcome column has been projected away.
  bool first_outcome_visible = true;
  std::vector<EventRecord> events;

  std::size_t size() const { return events.size(); }
};

/// Events per independent random stream. Chunk boundaries do not depend on
/// the number of workers, so output is identical for any worker count.
inline constexpr std::size_t kChunkSize = std::size_t{1} << 16;

/// Input weight actually used for the first channel: the experiment's own
/// weight for plain SEPRB, the demon's weight for input-controlled SEPRB.
double effective_input_weight(const ExperimentKind& experiment, const DemonPolicy& demon);

/// Draws `n` events. `workers == 0` means "use FAITHLAB_THREADS or the
/// hardware concurrency".
EventBatch sample(const ExperimentKind& experiment, const SettingsGrid& grid,
                  const SettingPolicy& policy, const DemonPolicy& demon, std::size_t n,
                  std::uint64_t seed, unsigned workers = 0);

/// The experimenter-at-B view: drops the input column when the demon is hidden.
EventBatch project_observables(EventBatch batch, const DemonPolicy& demon);

/// Worker count from FAITHLAB_THREADS, falling back to the hardware value.
unsigned default_worker_count();

/// Empirical (A, B) joint at one setting pair.
JointTable empirical_joint(const EventBatch& batch, int alpha_index, int beta_index);

/// L1 distance between two tables over the same variables.
double l1_distance(const JointTable& a, const JointTable& b);

}  // namespace faithlab
