#pragma once

#include "faithlab/cpt.hpp"
#include "faithlab/dag.hpp"
#include "faithlab/inference.hpp"
#include "faithlab/sampler.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace faithlab {

inline const std::string kLatent = "lambda";

// ---------------------------------------------------------------------------
// Structure classification

struct IndependencePattern {
  std::vector<CIStatement> independences;
  std::vector<CIStatement> dependences;
};

/// Observed pattern of the two-wing experiments: settings independent of
/// each other, no signalling in either direction, outcomes correlated with
/// each other and with their local setting.
IndependencePattern quantum_pattern();

/// Settings parentless, no directed path from either wing (setting or
/// outcome) to the other wing's outcome. Expects nodes alpha, A, beta, B.
bool is_bell_local(const Dag& dag);

enum class TriadVerdict {
  explanatory_and_faithful,  // markov, faithful, and not ruled out by Bell
  excluded_by_bell,          // markov and faithful, but Bell-local under a violation
  fine_tuned,                // markov but some observed independence is not structural
  not_markov,                // implies an independence the data contradicts
};

std::string to_string(TriadVerdict v);

struct TriadEntry {
  Dag dag;
  bool markov_ok = false;
  bool faithful_ok = false;
  bool bell_excluded = false;
  TriadVerdict verdict = TriadVerdict::not_markov;
};

TriadEntry classify(const Dag& dag, const IndependencePattern& pattern, bool bell_violated);

struct EnumerationConstraints {
  /// Nodes that may not receive edges.
  std::vector<std::string> exogenous;
  /// When set, graphs are enumerated both without and with this extra
  /// latent node; graphs where it is isolated are skipped as duplicates.
  std::optional<Node> optional_latent;
};

/// Settings exogenous plus an optional binary latent lambda.
EnumerationConstraints default_constraints();

inline constexpr int kMaxEnumerationNodes = 6;

/// Every DAG over `nodes` whose edges all pass `edge_allowed`, in
/// lexicographic order of the edge-state encoding.
std::vector<Dag> enumerate_dags(std::span<const Node> nodes,
                                const std::function<bool(int from, int to)>& edge_allowed = {});

struct TriadReport {
  std::vector<TriadEntry> entries;
  std::size_t explanatory_and_faithful = 0;
  std::size_t excluded_by_bell = 0;
  std::size_t fine_tuned = 0;
  std::size_t not_markov = 0;
  /// markov_ok, unfaithful, and not excluded by Bell.
  std::size_t markov_unfaithful_unexcluded = 0;
};

TriadReport enumerate_and_classify(std::span<const Node> variables, const EnumerationConstraints& constraints,
                                   const IndependencePattern& pattern, bool bell_violated);

/// The four observables alpha, A, beta, B with binary domains.
std::vector<Node> experiment_nodes();

nlohmann::json to_json(const TriadEntry& e);
nlohmann::json to_json(const TriadReport& r);

// ---------------------------------------------------------------------------
// Local deterministic strategies

/// Outcome (0/1) as a function of the local setting index, per wing.
struct LocalStrategy {
  std::array<int, 2> alice{};
  std::array<int, 2> bob{};
};

std::array<LocalStrategy, 16> local_deterministic_strategies();

/// Correlators of one deterministic strategy pair, outcomes mapped to +-1.
std::array<std::array<double, 2>, 2> strategy_correlators(const LocalStrategy& s);

/// Max |S| over all 16 deterministic strategy pairs.
double lhv_chsh_bound(const ChshSpec& spec);

/// Events from a hidden variable choosing a strategy pair with the given
/// weights; settings drawn uniformly from the 2 x 2 grid of `spec`.
EventBatch sample_local_model(const ChshSpec& spec, std::span<const double, 16> weights, std::size_t n,
                              std::uint64_t seed);

// ---------------------------------------------------------------------------
// Fine-tuned models and the perturbation detector

/// alpha, beta uniform over their grids; A' (stored as A, latent) with
/// P(A' = 1) = p; B depending on alpha, beta and A' through cos^2.
CptModel seprb_model(std::span<const Angle> alpha_grid, std::span<const Angle> beta_grid, double p);

/// The input-weight parameter of seprb_model.
ParameterPath seprb_input_weight();

struct CancellingPathsParams {
  double b = 0.4;     // pregnancy -> thrombosis
  double q0 = 0.5;    // P(pregnancy | no pill)
  double q1 = 0.1;    // P(pregnancy | pill)
  double base = 0.1;  // baseline thrombosis rate
  double pill_rate = 0.5;
};

/// Direct pill effect that cancels the mediated path: a = b (q0 - q1).
double cancelling_direct_effect(const CancellingPathsParams& params);

/// pill -> thrombosis and pill -> pregnancy -> thrombosis with
/// P(T = 1 | pill, preg) = base + a pill + b preg.
CptModel cancelling_paths_model(const CancellingPathsParams& params);

/// Named parameter of the cancelling-paths model: "q0", "q1", "a", "b", "base".
ParameterPath cancelling_paths_parameter(const std::string& name);

inline const std::string kPill = "pill";
inline const std::string kPregnancy = "pregnancy";
inline const std::string kThrombosis = "thrombosis";

/// Total-variation dependence above this counts as revealed.
inline constexpr double kFineTuningThreshold = 1e-9;

enum class Stability { stable, fine_tuned };

struct StabilityPoint {
  double epsilon = 0.0;
  double dependence = 0.0;
};

struct StabilityReport {
  std::string model_id;
  CIStatement statement;
  double baseline_dependence = 0.0;
  std::vector<StabilityPoint> points;
  Stability verdict = Stability::stable;
};

/// Throws std::invalid_argument if the statement fails in the unperturbed
/// model and std::domain_error if a perturbation leaves [0, 1].
StabilityReport perturb_and_test(const CptModel& model, const std::string& model_id, const ParameterPath& path,
                                 std::span<const double> epsilons, const CIStatement& statement);

nlohmann::json to_json(const StabilityReport& r);

}  // namespace faithlab
