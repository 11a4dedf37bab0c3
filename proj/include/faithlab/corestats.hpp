#pragma once

#include "faithlab/angle.hpp"
#include "faithlab/table.hpp"

#include <cmath>
#include <span>
#include <string>

namespace faithlab {

// Variable names shared by exact tables, event batches and causal graphs.
// In the sequential experiments the input channel A' takes the graph and
// table position of the EPRB outcome A.
inline const std::string kAlpha = "alpha";
inline const std::string kBeta = "beta";
inline const std::string kFirst = "A";
inline const std::string kSecond = "B";

/// Which experiment is being described.
///
/// `eprb` is the two-photon experiment. `seprb` is the single photon through
/// two polarisers with input channel weight p on the left (A' = 1) channel.
/// `input_controlled_seprb` is the same apparatus with the input chosen at
/// random by a demon and hidden from the experimenters; its nominal weight
/// is 1/2.
class ExperimentKind {
 public:
  enum class Variant { eprb, seprb, input_controlled_seprb };

  static ExperimentKind eprb() { return ExperimentKind(Variant::eprb, 0.5); }
  static ExperimentKind seprb(double input_weight);
  static ExperimentKind input_controlled_seprb() {
    return ExperimentKind(Variant::input_controlled_seprb, 0.5);
  }

  Variant variant() const { return variant_; }
  double input_weight() const { return input_weight_; }
  bool is_sequential() const { return variant_ != Variant::eprb; }

  std::string name() const;
  static ExperimentKind parse(const std::string& name, double input_weight = 0.5);

  friend bool operator==(const ExperimentKind&, const ExperimentKind&) = default;

 private:
  ExperimentKind(Variant v, double p) : variant_(v), input_weight_(p) {}
  Variant variant_;
  double input_weight_;
};

/// Probability that the two outcomes agree, cos^2(alpha - beta).
template <typename Scalar>
Scalar agreement_probability(Scalar alpha, Scalar beta) {
  return Scalar(0.5) * (Scalar(1) + std::cos(Scalar(2) * (alpha - beta)));
}

/// Probability that the two outcomes differ, sin^2(alpha - beta).
template <typename Scalar>
Scalar disagreement_probability(Scalar alpha, Scalar beta) {
  return Scalar(0.5) * (Scalar(1) - std::cos(Scalar(2) * (alpha - beta)));
}

/// Joint of (A, B) for a maximally entangled photon pair.
JointTable eprb_joint(Angle alpha, Angle beta);

/// Joint of (A', B) for the single photon, stored under the names (A, B).
/// Throws std::invalid_argument unless p is in [0, 1].
JointTable seprb_joint(Angle alpha, Angle beta, double p);

/// P(B = 1) = p cos^2(alpha - beta) + (1 - p) sin^2(alpha - beta).
double marginal_b(Angle alpha, Angle beta, double p);

/// E = P(same) - P(different) = cos(2(alpha - beta)).
double correlation(Angle alpha, Angle beta);

struct EquivalenceResult {
  bool equivalent = false;
  double max_discrepancy = 0.0;
};

/// Compares the EPRB joint with the uniform-input SEPRB joint cell by cell.
EquivalenceResult operational_equivalence(Angle alpha, Angle beta);

/// Exact joint over (alpha, beta, A, B) with settings drawn uniformly and
/// independently from the two grids.
JointTable experiment_joint(const ExperimentKind& kind, std::span<const Angle> alpha_grid,
                            std::span<const Angle> beta_grid);

/// Outcome joint of one experiment at fixed settings.
JointTable outcome_joint(const ExperimentKind& kind, Angle alpha, Angle beta);

/// Evenly spaced grid of `density` angles over [0, pi).
std::vector<Angle> uniform_angle_grid(int density);

}  // namespace faithlab
