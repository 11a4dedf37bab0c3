#include "faithlab/inference.hpp"

#include "faithlab/corestats.hpp"
#include "faithlab/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace faithlab {
namespace {

std::vector<std::string> statement_order(const CIStatement& s) {
  std::vector<std::string> names{s.x, s.y};
  names.insert(names.end(), s.z.begin(), s.z.end());
  return names;
}

template <typename Scalar>
void require_variables(const DiscreteTable<Scalar>& t, const CIStatement& s) {
  for (const auto& name : statement_order(s)) {
    if (!t.contains(name)) throw std::invalid_argument("unknown variable: " + name);
  }
}

void validate(const CIStatement& s) {
  if (s.x == s.y) throw std::invalid_argument("CI statement needs two distinct variables");
  for (const auto& name : s.z) {
    if (name == s.x || name == s.y) {
      throw std::invalid_argument("conditioning set contains a tested variable: " + name);
    }
  }
  auto z = s.z;
  std::sort(z.begin(), z.end());
  if (std::adjacent_find(z.begin(), z.end()) != z.end()) {
    throw std::invalid_argument("conditioning set has duplicates");
  }
}

int find_index(const std::vector<Angle>& grid, Angle target) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (angular_distance(grid[i], target) < 1e-9) return static_cast<int>(i);
  }
  return -1;
}

std::string describe_stratum(const CountTable& t, const std::vector<int>& a) {
  std::string out;
  for (std::size_t k = 2; k < t.rank(); ++k) {
    if (!out.empty()) out += ", ";
    out += t.variables()[k].name + "=" + std::to_string(a[k]);
  }
  return out.empty() ? "(unconditional)" : out;
}

}  // namespace

CIStatement::CIStatement(std::string x_, std::string y_, std::vector<std::string> z_)
    : x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {
  validate(*this);
}

CIStatement CIStatement::normalized() const {
  CIStatement out = *this;
  if (out.y < out.x) std::swap(out.x, out.y);
  std::sort(out.z.begin(), out.z.end());
  return out;
}

std::string CIStatement::to_string() const {
  std::string out = "(" + x + " _||_ " + y;
  if (!z.empty()) {
    out += " | ";
    for (std::size_t i = 0; i < z.size(); ++i) out += (i ? "," : "") + z[i];
  }
  return out + ")";
}

double chi_square_survival(double statistic, int dof) {
  if (dof <= 0) throw std::invalid_argument("chi-square needs positive degrees of freedom");
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

CountTable contingency(const EventBatch& batch) {
  std::vector<Variable> vars{{kAlpha, static_cast<int>(batch.grid.alpha.size())},
                             {kBeta, static_cast<int>(batch.grid.beta.size())}};
  if (batch.first_outcome_visible) vars.push_back({kFirst, 2});
  vars.push_back({kSecond, 2});
  CountTable counts = CountTable::zeros(std::move(vars));
  auto& cells = counts.cells();
  const auto nb = static_cast<std::size_t>(batch.grid.beta.size());
  if (batch.first_outcome_visible) {
    for (const auto& ev : batch.events) {
      cells(static_cast<Eigen::Index>(((ev.alpha_index * nb + ev.beta_index) * 2 + ev.first_outcome) * 2 +
                                      ev.second_outcome)) += 1;
    }
  } else {
    for (const auto& ev : batch.events) {
      cells(static_cast<Eigen::Index>((ev.alpha_index * nb + ev.beta_index) * 2 + ev.second_outcome)) += 1;
    }
  }
  return counts;
}

CITestResult ci_test(const CountTable& counts, const CIStatement& statement, double level) {
  validate(statement);
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("test level must lie in (0, 1)");
  require_variables(counts, statement);

  const CountTable t = counts.marginal(statement_order(statement));
  for (const std::string* name : {&statement.x, &statement.y}) {
    const CountTable m = t.marginal({*name});
    if ((m.cells() > 0).count() < 2) {
      throw PreconditionError("variable " + *name + " is constant in the data");
    }
  }

  const int nx = t.variables()[0].cardinality;
  const int ny = t.variables()[1].cardinality;
  const std::size_t strata = t.size() / static_cast<std::size_t>(nx * ny);
  const auto cell = [&](std::size_t s, int x, int y) {
    return static_cast<double>(t.cells()(static_cast<Eigen::Index>((static_cast<std::size_t>(x) * ny + y) * strata + s)));
  };

  double g = 0.0;
  int dof = 0;
  std::int64_t n = 0;
  std::vector<int> stratum_assignment(t.rank(), 0);
  for (std::size_t s = 0; s < strata; ++s) {
    std::vector<double> row(static_cast<std::size_t>(nx), 0.0);
    std::vector<double> col(static_cast<std::size_t>(ny), 0.0);
    double total = 0.0;
    for (int x = 0; x < nx; ++x) {
      for (int y = 0; y < ny; ++y) {
        const double o = cell(s, x, y);
        row[static_cast<std::size_t>(x)] += o;
        col[static_cast<std::size_t>(y)] += o;
        total += o;
      }
    }
    if (total == 0.0) continue;
    for (int x = 0; x < nx; ++x) {
      for (int y = 0; y < ny; ++y) {
        const double expected = row[static_cast<std::size_t>(x)] * col[static_cast<std::size_t>(y)] / total;
        if (expected < kMinExpectedCount) {
          stratum_assignment = t.assignment_of(s);
          throw PreconditionError("sparse stratum " + describe_stratum(t, stratum_assignment) +
                                  " in test " + statement.to_string() + ": expected count " +
                                  std::to_string(expected) + " < 5");
        }
        const double o = cell(s, x, y);
        if (o > 0.0) g += 2.0 * o * std::log(o / expected);
      }
    }
    dof += (nx - 1) * (ny - 1);
    n += static_cast<std::int64_t>(total);
  }
  if (dof == 0) throw PreconditionError("no data for test " + statement.to_string());

  CITestResult r;
  r.statement = statement;
  r.statistic = std::max(0.0, g);
  r.dof = dof;
  r.p_value = std::clamp(chi_square_survival(r.statistic, dof), 0.0, 1.0);
  r.verdict = r.p_value >= level ? Verdict::independent : Verdict::dependent;
  r.n = n;
  return r;
}

CITestResult ci_test(const EventBatch& batch, const CIStatement& statement, double level) {
  return ci_test(contingency(batch), statement, level);
}

double factorization_discrepancy(const JointTable& table, const CIStatement& statement) {
  validate(statement);
  require_variables(table, statement);
  const JointTable xyz = table.marginal(statement_order(statement));
  std::vector<std::string> xz{statement.x};
  std::vector<std::string> yz{statement.y};
  xz.insert(xz.end(), statement.z.begin(), statement.z.end());
  yz.insert(yz.end(), statement.z.begin(), statement.z.end());
  const JointTable pxz = table.marginal(xz);
  const JointTable pyz = table.marginal(yz);
  const JointTable pz = table.marginal(statement.z);

  double worst = 0.0;
  std::vector<int> a(xyz.rank(), 0);
  std::vector<int> ax(xz.size()), ay(yz.size()), az(statement.z.size());
  for (std::size_t flat = 0; flat < xyz.size(); ++flat) {
    ax[0] = a[0];
    ay[0] = a[1];
    for (std::size_t k = 0; k < az.size(); ++k) ax[k + 1] = ay[k + 1] = az[k] = a[k + 2];
    const double lhs = xyz.cells()(static_cast<Eigen::Index>(flat)) * pz.at(az);
    const double rhs = pxz.at(ax) * pyz.at(ay);
    worst = std::max(worst, std::abs(lhs - rhs));
    xyz.advance(a);
  }
  return worst;
}

CITestResult ci_test(const JointTable& table, const CIStatement& statement) {
  CITestResult r;
  r.statement = statement;
  r.statistic = factorization_discrepancy(table, statement);
  r.dof = 0;
  const bool independent = r.statistic <= kExactTolerance;
  r.p_value = independent ? 1.0 : 0.0;
  r.verdict = independent ? Verdict::independent : Verdict::dependent;
  return r;
}

double dependence_magnitude(const JointTable& table, const CIStatement& statement) {
  validate(statement);
  require_variables(table, statement);
  // Order (z..., y, x) so that each (z, y) slice is a contiguous run over x.
  std::vector<std::string> order(statement.z);
  order.push_back(statement.y);
  order.push_back(statement.x);
  const JointTable t = table.marginal(order);
  const auto nx = static_cast<std::size_t>(t.variables().back().cardinality);
  const auto ny = static_cast<std::size_t>(t.variables()[t.rank() - 2].cardinality);
  const std::size_t strata = t.size() / (nx * ny);

  double worst = 0.0;
  for (std::size_t s = 0; s < strata; ++s) {
    std::vector<Eigen::ArrayXd> conditionals;
    for (std::size_t y = 0; y < ny; ++y) {
      const Eigen::ArrayXd slice = t.cells().segment(static_cast<Eigen::Index>((s * ny + y) * nx),
                                                     static_cast<Eigen::Index>(nx));
      const double mass = slice.sum();
      if (mass > 0.0) conditionals.push_back(slice / mass);
    }
    for (std::size_t i = 0; i < conditionals.size(); ++i) {
      for (std::size_t j = i + 1; j < conditionals.size(); ++j) {
        worst = std::max(worst, 0.5 * (conditionals[i] - conditionals[j]).abs().sum());
      }
    }
  }
  return worst;
}

std::vector<CITestResult> nosignalling_suite(const EventBatch& batch, double level) {
  const CountTable counts = contingency(batch);
  for (const std::string* name : {&kAlpha, &kBeta}) {
    if ((counts.marginal({*name}).cells() > 0).count() < 2) {
      throw PreconditionError("no-signalling tests need varying settings on both wings (" + *name +
                              " is constant)");
    }
  }
  std::vector<CITestResult> results;
  if (batch.first_outcome_visible) results.push_back(ci_test(counts, CIStatement(kFirst, kBeta, {kAlpha}), level));
  results.push_back(ci_test(counts, CIStatement(kSecond, kAlpha, {kBeta}), level));
  return results;
}

CorrelationEstimate estimate_correlation(const EventBatch& batch, int alpha_index, int beta_index) {
  if (!batch.first_outcome_visible) {
    throw PreconditionError("correlation needs the first outcome, which is hidden in this batch");
  }
  std::int64_t same = 0;
  std::int64_t n = 0;
  for (const auto& ev : batch.events) {
    if (ev.alpha_index == alpha_index && ev.beta_index == beta_index) {
      ++n;
      same += ev.first_outcome == ev.second_outcome;
    }
  }
  if (n < kMinCorrelationEvents) {
    throw PreconditionError("only " + std::to_string(n) + " events at setting pair (" +
                            std::to_string(alpha_index) + ", " + std::to_string(beta_index) +
                            "); need at least 100");
  }
  const double e = static_cast<double>(2 * same - n) / static_cast<double>(n);
  return {e, std::sqrt(std::max(0.0, 1.0 - e * e) / static_cast<double>(n)), n};
}

ChshSpec canonical_chsh_spec() {
  constexpr double pi = std::numbers::pi;
  return {Angle(0.0), Angle(pi / 4), Angle(pi / 8), Angle(-pi / 8)};
}

double chsh_value(const std::array<std::array<double, 2>, 2>& e) {
  return e[0][0] + e[0][1] + e[1][0] - e[1][1];
}

double chsh_max_arrangement(const std::array<std::array<double, 2>, 2>& e) {
  const double sum = e[0][0] + e[0][1] + e[1][0] + e[1][1];
  double best = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) best = std::max(best, std::abs(sum - 2.0 * e[i][j]));
  }
  return best;
}

ChshReport chsh(const ChshSpec& spec) {
  const std::array<Angle, 2> a{spec.a0, spec.a1};
  const std::array<Angle, 2> b{spec.b0, spec.b1};
  ChshReport r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) r.e[i][j] = correlation(a[i], b[j]);
  }
  r.s = chsh_value(r.e);
  r.s_max = chsh_max_arrangement(r.e);
  return r;
}

ChshReport chsh(const EventBatch& batch, const ChshSpec& spec) {
  const std::array<int, 2> ai{find_index(batch.grid.alpha, spec.a0), find_index(batch.grid.alpha, spec.a1)};
  const std::array<int, 2> bi{find_index(batch.grid.beta, spec.b0), find_index(batch.grid.beta, spec.b1)};
  for (int k : {ai[0], ai[1], bi[0], bi[1]}) {
    if (k < 0) throw PreconditionError("CHSH setting missing from the batch grid");
  }
  ChshReport r;
  double var = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CorrelationEstimate est;
      try {
        est = estimate_correlation(batch, ai[i], bi[j]);
      } catch (const PreconditionError& e) {
        throw PreconditionError(std::string("CHSH setting pair missing or under-sampled: ") + e.what());
      }
      r.e[i][j] = est.value;
      r.se[i][j] = est.standard_error;
      var += est.standard_error * est.standard_error;
    }
  }
  r.s = chsh_value(r.e);
  r.s_se = std::sqrt(var);
  r.s_max = chsh_max_arrangement(r.e);
  return r;
}

GoodnessOfFit g_test_fit(std::span<const std::int64_t> counts, std::span<const double> probabilities) {
  if (counts.size() != probabilities.size() || counts.size() < 2) {
    throw std::invalid_argument("goodness of fit needs matching category lists of length >= 2");
  }
  double n = 0.0;
  for (auto c : counts) n += static_cast<double>(c);
  if (n == 0.0) throw PreconditionError("no observations");
  GoodnessOfFit fit;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double expected = n * probabilities[k];
    if (expected < kMinExpectedCount) throw PreconditionError("expected count below 5");
    const auto o = static_cast<double>(counts[k]);
    if (o > 0.0) fit.statistic += 2.0 * o * std::log(o / expected);
  }
  fit.statistic = std::max(0.0, fit.statistic);
  fit.dof = static_cast<int>(counts.size()) - 1;
  fit.p_value = chi_square_survival(fit.statistic, fit.dof);
  return fit;
}

nlohmann::json to_json(const CIStatement& s) {
  return {{"x", s.x}, {"y", s.y}, {"z", s.z}, {"text", s.to_string()}};
}

nlohmann::json to_json(const CITestResult& r) {
  return {{"statement", to_json(r.statement)},
          {"statistic", r.statistic},
          {"dof", r.dof},
          {"p_value", r.p_value},
          {"verdict", r.verdict == Verdict::independent ? "independent" : "dependent"},
          {"n", r.n}};
}

nlohmann::json to_json(const CorrelationEstimate& c) {
  return {{"value", c.value}, {"standard_error", c.standard_error}, {"n", c.n}};
}

nlohmann::json to_json(const ChshReport& r) {
  nlohmann::json pairs = nlohmann::json::array();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      pairs.push_back({{"a", i}, {"b", j}, {"E", r.e[i][j]}, {"standard_error", r.se[i][j]}});
    }
  }
  return {{"S", r.s}, {"abs_S", std::abs(r.s)}, {"S_standard_error", r.s_se},
          {"S_max_arrangement", r.s_max}, {"pairs", pairs}};
}

}  // namespace faithlab
