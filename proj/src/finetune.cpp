#include "faithlab/causal.hpp"
#include "faithlab/corestats.hpp"

#include <stdexcept>

namespace faithlab {

CptModel seprb_model(std::span<const Angle> alpha_grid, std::span<const Angle> beta_grid, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("input weight must lie in [0, 1]");
  if (alpha_grid.empty() || beta_grid.empty()) throw std::invalid_argument("settings grid must be non-empty");
  const auto na = static_cast<int>(alpha_grid.size());
  const auto nb = static_cast<int>(beta_grid.size());

  Dag dag({{kAlpha, false, na}, {kBeta, false, nb}, {kFirst, true, 2}, {kSecond, false, 2}});
  dag.add_edge(kFirst, kSecond);
  dag.add_edge(kAlpha, kSecond);
  dag.add_edge(kBeta, kSecond);

  Eigen::MatrixXd input(1, 2);
  input << 1.0 - p, p;
  Eigen::MatrixXd output(na * nb * 2, 2);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      const double agree = agreement_probability(alpha_grid[i].value(), beta_grid[j].value());
      for (int a = 0; a < 2; ++a) {
        const Eigen::Index row = (i * nb + j) * 2 + a;
        output(row, a) = agree;
        output(row, 1 - a) = 1.0 - agree;
      }
    }
  }
  return CptModel(std::move(dag), {Eigen::MatrixXd::Constant(1, na, 1.0 / na),
                                   Eigen::MatrixXd::Constant(1, nb, 1.0 / nb), input, output});
}

ParameterPath seprb_input_weight() { return {{kFirst, 0, 1}}; }

double cancelling_direct_effect(const CancellingPathsParams& params) { return params.b * (params.q0 - params.q1); }

CptModel cancelling_paths_model(const CancellingPathsParams& params) {
  const double a = cancelling_direct_effect(params);
  for (double v : {params.b, params.q0, params.q1, params.base, params.pill_rate}) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("cancelling-paths parameters must lie in [0, 1]");
  }
  Dag dag({{kPill, false, 2}, {kPregnancy, false, 2}, {kThrombosis, false, 2}});
  dag.add_edge(kPill, kPregnancy);
  dag.add_edge(kPill, kThrombosis);
  dag.add_edge(kPregnancy, kThrombosis);

  Eigen::MatrixXd pill(1, 2);
  pill << 1.0 - params.pill_rate, params.pill_rate;
  Eigen::MatrixXd pregnancy(2, 2);
  pregnancy << 1.0 - params.q0, params.q0, 1.0 - params.q1, params.q1;
  Eigen::MatrixXd thrombosis(4, 2);
  for (int pl = 0; pl < 2; ++pl) {
    for (int pg = 0; pg < 2; ++pg) {
      const double rate = params.base + a * pl + params.b * pg;
      if (rate < 0.0 || rate > 1.0) {
        throw std::invalid_argument("cancelling-paths parameters give a thrombosis rate outside [0, 1]");
      }
      thrombosis.row(pl * 2 + pg) << 1.0 - rate, rate;
    }
  }
  return CptModel(std::move(dag), {pill, pregnancy, thrombosis});
}

ParameterPath cancelling_paths_parameter(const std::string& name) {
  if (name == "q0") return {{kPregnancy, 0, 1}};
  if (name == "q1") return {{kPregnancy, 1, 1}};
  if (name == "a") return {{kThrombosis, 2, 1}, {kThrombosis, 3, 1}};
  if (name == "b") return {{kThrombosis, 1, 1}, {kThrombosis, 3, 1}};
  if (name == "base") return {{kThrombosis, 0, 1}, {kThrombosis, 1, 1}, {kThrombosis, 2, 1}, {kThrombosis, 3, 1}};
  throw std::invalid_argument("unknown cancelling-paths parameter: " + name);
}

StabilityReport perturb_and_test(const CptModel& model, const std::string& model_id, const ParameterPath& path,
                                 std::span<const double> epsilons, const CIStatement& statement) {
  if (epsilons.empty()) throw std::invalid_argument("need at least one perturbation size");
  StabilityReport report;
  report.model_id = model_id;
  report.statement = statement;
  report.baseline_dependence = dependence_magnitude(joint_from_cpt(model), statement);
  if (report.baseline_dependence > kFineTuningThreshold) {
    throw std::invalid_argument(statement.to_string() + " does not hold in the unperturbed model");
  }

  bool every_nonzero_reveals = true;
  bool any_nonzero = false;
  for (double eps : epsilons) {
    const double dep = dependence_magnitude(joint_from_cpt(shifted(model, path, eps)), statement);
    report.points.push_back({eps, dep});
    if (eps != 0.0) {
      any_nonzero = true;
      every_nonzero_reveals = every_nonzero_reveals && dep > kFineTuningThreshold;
    }
  }
  report.verdict = any_nonzero && every_nonzero_reveals ? Stability::fine_tuned : Stability::stable;
  return report;
}

nlohmann::json to_json(const StabilityReport& r) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : r.points) points.push_back({{"epsilon", p.epsilon}, {"dependence", p.dependence}});
  return {{"model", r.model_id},
          {"statement", to_json(r.statement)},
          {"baseline_dependence", r.baseline_dependence},
          {"points", points},
          {"verdict", r.verdict == Stability::fine_tuned ? "fine_tuned" : "stable"}};
}

}  // namespace faithlab
