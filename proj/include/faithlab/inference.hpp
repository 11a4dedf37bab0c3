#pragma once

#include "faithlab/angle.hpp"
#include "faithlab/sampler.hpp"
#include "faithlab/table.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace faithlab {

/// The statement "x is independent of y given z".
struct CIStatement {
  std::string x;
  std::string y;
  std::vector<std::string> z;

  CIStatement() = default;
  CIStatement(std::string x_, std::string y_, std::vector<std::string> z_ = {});

  /// Orders x/y and sorts z so that equal statements compare equal.
  CIStatement normalized() const;
  std::string to_string() const;

  friend bool operator==(const CIStatement& a, const CIStatement& b) {
    const CIStatement na = a.normalized();
    const CIStatement nb = b.normalized();
    return na.x == nb.x && na.y == nb.y && na.z == nb.z;
  }
};

enum class Verdict { independent, dependent };

struct CITestResult {
  CIStatement statement;
  double statistic = 0.0;  // G for sampled data, max factorization gap for exact tables
  int dof = 0;
  double p_value = 1.0;
  Verdict verdict = Verdict::independent;
  std::int64_t n = 0;
};

/// Minimum expected count in any cell of a non-empty stratum.
inline constexpr double kMinExpectedCount = 5.0;

/// Counts over (alpha, beta, A, B); A is absent when hidden.
CountTable contingency(const EventBatch& batch);

/// Stratified likelihood-ratio G-test. Throws PreconditionError on sparse
/// strata or a constant x or y.
CITestResult ci_test(const CountTable& counts, const CIStatement& statement, double level);
CITestResult ci_test(const EventBatch& batch, const CIStatement& statement, double level);

/// Exact check of P(x, y | z) = P(x | z) P(y | z); p_value is 1 or 0.
CITestResult ci_test(const JointTable& table, const CIStatement& statement);

/// max |P(x,y,z) P(z) - P(x,z) P(y,z)| over all assignments.
double factorization_discrepancy(const JointTable& table, const CIStatement& statement);

/// Largest total-variation distance between P(x | y, z) and P(x | y', z)
/// over strata z and value pairs y, y' of positive probability.
double dependence_magnitude(const JointTable& table, const CIStatement& statement);

/// (A _||_ beta | alpha) when A is visible, then (B _||_ alpha | beta).
std::vector<CITestResult> nosignalling_suite(const EventBatch& batch, double level);

struct CorrelationEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::int64_t n = 0;
};

inline constexpr std::int64_t kMinCorrelationEvents = 100;

CorrelationEstimate estimate_correlation(const EventBatch& batch, int alpha_index, int beta_index);

/// Two settings per wing.
struct ChshSpec {
  Angle a0, a1, b0, b1;
};

/// Settings for which S = E00 + E01 + E10 - E11 reaches 2 sqrt 2.
ChshSpec canonical_chsh_spec();

struct ChshReport {
  std::array<std::array<double, 2>, 2> e{};
  std::array<std::array<double, 2>, 2> se{};
  double s = 0.0;      // E00 + E01 + E10 - E11
  double s_se = 0.0;
  double s_max = 0.0;  // max |S| over the four placements of the minus sign
};

/// S = E00 + E01 + E10 - E11.
double chsh_value(const std::array<std::array<double, 2>, 2>& e);
double chsh_max_arrangement(const std::array<std::array<double, 2>, 2>& e);

ChshReport chsh(const ChshSpec& spec);
/// Throws PreconditionError when a setting pair is missing from the batch.
ChshReport chsh(const EventBatch& batch, const ChshSpec& spec);

struct GoodnessOfFit {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// G-test of observed counts against fixed category probabilities.
GoodnessOfFit g_test_fit(std::span<const std::int64_t> counts, std::span<const double> probabilities);

/// Upper tail of the chi-square distribution.
double chi_square_survival(double statistic, int dof);

nlohmann::json to_json(const CIStatement& s);
nlohmann::json to_json(const CITestResult& r);
nlohmann::json to_json(const CorrelationEstimate& c);
nlohmann::json to_json(const ChshReport& r);

}  // namespace faithlab
