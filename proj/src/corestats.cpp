#include "faithlab/corestats.hpp"

#include <numbers>
#include <stdexcept>

namespace faithlab {
namespace {

void check_weight(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("input weight must lie in [0, 1], got " + std::to_string(p));
  }
}

std::vector<Variable> outcome_variables() { return {{kFirst, 2}, {kSecond, 2}}; }

}  // namespace

ExperimentKind ExperimentKind::seprb(double input_weight) {
  check_weight(input_weight);
  return ExperimentKind(Variant::seprb, input_weight);
}

std::string ExperimentKind::name() const {
  switch (variant_) {
    case Variant::eprb: return "eprb";
    case Variant::seprb: return "seprb";
    case Variant::input_controlled_seprb: return "icseprb";
  }
  return "unknown";
}

ExperimentKind ExperimentKind::parse(const std::string& name, double input_weight) {
  if (name == "eprb") return eprb();
  if (name == "seprb") return seprb(input_weight);
  if (name == "icseprb") return input_controlled_seprb();
  throw std::invalid_argument("unknown experiment: " + name);
}

JointTable eprb_joint(Angle alpha, Angle beta) {
  const double same = 0.5 * agreement_probability(alpha.value(), beta.value());
  const double diff = 0.5 * disagreement_probability(alpha.value(), beta.value());
  JointTable::Cells cells(4);
  cells << same, diff, diff, same;
  return JointTable(outcome_variables(), std::move(cells));
}

JointTable seprb_joint(Angle alpha, Angle beta, double p) {
  check_weight(p);
  const double c2 = agreement_probability(alpha.value(), beta.value());
  const double s2 = disagreement_probability(alpha.value(), beta.value());
  // rows: A' = 0 (right channel, weight 1 - p), A' = 1 (left channel, weight p)
  JointTable::Cells cells(4);
  cells << (1.0 - p) * c2, (1.0 - p) * s2, p * s2, p * c2;
  return JointTable(outcome_variables(), std::move(cells));
}

double marginal_b(Angle alpha, Angle beta, double p) {
  check_weight(p);
  // (1 - p) + (2p - 1) cos^2 is the same sum and is exactly 1/2 at p = 1/2.
  return (1.0 - p) + (2.0 * p - 1.0) * agreement_probability(alpha.value(), beta.value());
}

double correlation(Angle alpha, Angle beta) {
  return std::cos(2.0 * (alpha.value() - beta.value()));
}

EquivalenceResult operational_equivalence(Angle alpha, Angle beta) {
  const JointTable two_photon = eprb_joint(alpha, beta);
  const JointTable one_photon = seprb_joint(alpha, beta, 0.5);
  const double gap = (two_photon.cells() - one_photon.cells()).abs().maxCoeff();
  return {gap <= kExactTolerance, gap};
}

JointTable outcome_joint(const ExperimentKind& kind, Angle alpha, Angle beta) {
  if (kind.variant() == ExperimentKind::Variant::eprb) return eprb_joint(alpha, beta);
  return seprb_joint(alpha, beta, kind.input_weight());
}

JointTable experiment_joint(const ExperimentKind& kind, std::span<const Angle> alpha_grid,
                            std::span<const Angle> beta_grid) {
  if (alpha_grid.empty() || beta_grid.empty()) {
    throw std::invalid_argument("settings grid must be non-empty on both wings");
  }
  const auto na = static_cast<int>(alpha_grid.size());
  const auto nb = static_cast<int>(beta_grid.size());
  JointTable out = JointTable::zeros({{kAlpha, na}, {kBeta, nb}, {kFirst, 2}, {kSecond, 2}});
  const double setting_weight = 1.0 / (static_cast<double>(na) * nb);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      const JointTable outcomes = outcome_joint(kind, alpha_grid[i], beta_grid[j]);
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) out({i, j, a, b}) = setting_weight * outcomes({a, b});
      }
    }
  }
  return out;
}

std::vector<Angle> uniform_angle_grid(int density) {
  if (density < 1) throw std::invalid_argument("grid density must be positive");
  std::vector<Angle> grid;
  grid.reserve(static_cast<std::size_t>(density));
  for (int k = 0; k < density; ++k) grid.emplace_back(std::numbers::pi * k / density);
  return grid;
}

}  // namespace faithlab
