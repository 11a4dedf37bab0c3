#include <doctest.h>

#include "faithlab/batch_io.hpp"
#include "faithlab/errors.hpp"
#include "faithlab/inference.hpp"
#include "faithlab/sampler.hpp"

#include <numbers>
#include <sstream>

using namespace faithlab;
using std::numbers::pi;

namespace {

double fraction(const EventBatch& batch, auto pred) {
  std::size_t hits = 0;
  for (const auto& ev : batch.events) hits += pred(ev) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(batch.size());
}

}  // namespace

TEST_CASE("equal settings give perfectly correlated EPRB outcomes") {
  const SettingsGrid grid{{0.6}, {0.6}};
  const EventBatch batch = sample(ExperimentKind::eprb(), grid, SettingPolicy::fixed(0, 0), {}, 1000, 99);
  CHECK(batch.size() == 1000);
  CHECK(fraction(batch, [](const EventRecord& e) { return e.first_outcome == e.second_outcome; }) == 1.0);
}

TEST_CASE("hidden uniform demon leaves B unbiased") {
  const SettingsGrid grid{{0.2}, {1.4}};
  const EventBatch batch =
      sample(ExperimentKind::input_controlled_seprb(), grid, SettingPolicy::fixed(0, 0), {}, 1'000'000, 5);
  CHECK(std::abs(fraction(batch, [](const EventRecord& e) { return e.second_outcome == 1; }) - 0.5) < 0.005);
}

TEST_CASE("EPRB agreement frequency at pi/8 matches cos^2") {
  const SettingsGrid grid{{0.0}, {pi / 8}};
  const EventBatch batch = sample(ExperimentKind::eprb(), grid, SettingPolicy::fixed(0, 0), {}, 1'000'000, 17);
  const double agree = fraction(batch, [](const EventRecord& e) { return e.first_outcome == e.second_outcome; });
  CHECK(std::abs(agree - 0.853553) < 0.005);
}

TEST_CASE("sampling is reproducible and independent of worker count") {
  const SettingsGrid grid{{0.0, pi / 4, pi / 3}, {pi / 8, 0.5}};
  const std::size_t n = 3 * kChunkSize + 17;
  const DemonPolicy demon{0.3, Visibility::revealed};
  const auto kind = ExperimentKind::input_controlled_seprb();
  const EventBatch one = sample(kind, grid, SettingPolicy::uniform(), demon, n, 1234, 1);
  const EventBatch four = sample(kind, grid, SettingPolicy::uniform(), demon, n, 1234, 4);
  const EventBatch again = sample(kind, grid, SettingPolicy::uniform(), demon, n, 1234, 3);
  CHECK(one.events == four.events);
  CHECK(one.events == again.events);
  const EventBatch other = sample(kind, grid, SettingPolicy::uniform(), demon, n, 1235, 1);
  CHECK_FALSE(one.events == other.events);
}

TEST_CASE("setting policies") {
  const SettingsGrid grid{{0.0, 1.0}, {0.0, 0.5, 1.0}};
  const EventBatch rr = sample(ExperimentKind::eprb(), grid, SettingPolicy::round_robin(), {}, 12, 1);
  for (std::size_t k = 0; k < rr.size(); ++k) {
    CHECK(rr.events[k].alpha_index == (k % 6) / 3);
    CHECK(rr.events[k].beta_index == (k % 6) % 3);
  }
  const EventBatch fixed = sample(ExperimentKind::eprb(), grid, SettingPolicy::fixed(1, 2), {}, 50, 1);
  for (const auto& ev : fixed.events) {
    CHECK(ev.alpha_index == 1);
    CHECK(ev.beta_index == 2);
  }
  const EventBatch uni = sample(ExperimentKind::eprb(), grid, SettingPolicy::uniform(), {}, 60000, 1);
  CHECK(std::abs(fraction(uni, [](const EventRecord& e) { return e.beta_index == 2; }) - 1.0 / 3.0) < 0.01);
}

TEST_CASE("sampling preconditions") {
  const SettingsGrid grid{{0.0}, {0.0}};
  CHECK_THROWS_AS(sample(ExperimentKind::eprb(), {{}, {0.0}}, {}, {}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample(ExperimentKind::eprb(), grid, {}, {}, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample(ExperimentKind::eprb(), grid, SettingPolicy::fixed(1, 0), {}, 10, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample(ExperimentKind::input_controlled_seprb(), grid, {}, {1.5, Visibility::hidden}, 10, 1),
                  std::invalid_argument);
}

TEST_CASE("projection hides the input only for a hidden demon") {
  const SettingsGrid grid{{0.0, 0.5}, {0.2, 0.9}};
  const EventBatch full = sample(ExperimentKind::input_controlled_seprb(), grid, {}, {}, 500, 8);
  const EventBatch hidden = project_observables(full, {0.5, Visibility::hidden});
  CHECK_FALSE(hidden.first_outcome_visible);
  CHECK_FALSE(contingency(hidden).contains(kFirst));
  CHECK_THROWS_AS(estimate_correlation(hidden, 0, 0), PreconditionError);
  for (std::size_t k = 0; k < full.size(); ++k) {
    CHECK(hidden.events[k].second_outcome == full.events[k].second_outcome);
  }
  const EventBatch revealed = project_observables(full, {0.5, Visibility::revealed});
  CHECK(revealed.first_outcome_visible);
  CHECK(revealed.events == full.events);
}

TEST_CASE("convergence of the empirical joint over seeds") {
  const SettingsGrid grid{{0.0}, {pi / 8}};
  const JointTable exact = eprb_joint(0.0, pi / 8);
  int close = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const EventBatch b = sample(ExperimentKind::eprb(), grid, SettingPolicy::fixed(0, 0), {}, 1'000'000, seed);
    close += l1_distance(empirical_joint(b, 0, 0), exact) <= 0.01 ? 1 : 0;
  }
  CHECK(close == 10);
}

TEST_CASE("demon neutrality: B given settings is Bernoulli(1/2)") {
  const SettingsGrid grid{{0.3}, {1.2}};
  int passes = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const EventBatch b =
        sample(ExperimentKind::input_controlled_seprb(), grid, SettingPolicy::fixed(0, 0), {}, 10'000, seed);
    std::array<std::int64_t, 2> counts{};
    for (const auto& ev : b.events) ++counts[ev.second_outcome];
    const std::array<double, 2> half{0.5, 0.5};
    passes += g_test_fit(counts, half).p_value >= 0.01 ? 1 : 0;
  }
  CHECK(passes >= 95);
}

TEST_CASE("batch CSV and sidecar round trip") {
  const SettingsGrid grid{{0.0, 0.3927}, {0.1, pi / 3}};
  const DemonPolicy demon{0.55, Visibility::hidden};
  const EventBatch full = sample(ExperimentKind::input_controlled_seprb(), grid, {}, demon, 2000, 42);
  for (const EventBatch& b : {full, project_observables(full, demon)}) {
    std::stringstream csv;
    write_events_csv(csv, b);
    const std::string text = csv.str();
    CHECK(text.rfind(b.first_outcome_visible ? "alpha_idx,beta_idx,a,b\n" : "alpha_idx,beta_idx,b\n", 0) == 0);
    const EventBatch back = read_batch(csv, batch_metadata(b));
    CHECK(back.events == b.events);
    CHECK(back.grid == b.grid);
    CHECK(back.demon == b.demon);
    CHECK(back.policy == b.policy);
    CHECK(back.experiment == b.experiment);
    CHECK(back.seed == b.seed);
    CHECK(back.first_outcome_visible == b.first_outcome_visible);
  }
}

TEST_CASE("malformed batch input is rejected") {
  const EventBatch b = sample(ExperimentKind::eprb(), {{0.0}, {0.0}}, {}, {}, 3, 1);
  const auto meta = batch_metadata(b);
  std::stringstream bad_header("x,y\n0,0\n");
  CHECK_THROWS_AS(read_batch(bad_header, meta), PreconditionError);
  std::stringstream bad_index("alpha_idx,beta_idx,a,b\n3,0,1,1\n");
  CHECK_THROWS_AS(read_batch(bad_index, meta), PreconditionError);
  std::stringstream bad_bit("alpha_idx,beta_idx,a,b\n0,0,2,1\n");
  CHECK_THROWS_AS(read_batch(bad_bit, meta), PreconditionError);
  std::stringstream short_count("alpha_idx,beta_idx,a,b\n0,0,1,1\n");
  CHECK_THROWS_AS(read_batch(short_count, meta), PreconditionError);
}
