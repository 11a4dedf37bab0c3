#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace faithlab {

/// A named discrete variable with values 0..cardinality-1.
struct Variable {
  std::string name;
  int cardinality = 2;

  friend bool operator==(const Variable&, const Variable&) = default;
};

/// Dense table over a list of discrete variables. Cells are stored row-major
/// in the declared variable order (last variable varies fastest).
///
/// The same layout carries probabilities (JointTable) and event counts
/// (CountTable); marginalization is summation in both cases.
template <typename Scalar>
class DiscreteTable {
 public:
  using Cells = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  DiscreteTable() : cells_(Cells::Constant(1, Scalar(1))) {}

  DiscreteTable(std::vector<Variable> variables, Cells cells)
      : variables_(std::move(variables)), cells_(std::move(cells)) {
    init_strides();
    if (static_cast<std::size_t>(cells_.size()) != size()) {
      throw std::invalid_argument("table cell count does not match variable domains");
    }
  }

  static DiscreteTable zeros(std::vector<Variable> variables) {
    std::size_t n = 1;
    for (const auto& v : variables) n *= static_cast<std::size_t>(v.cardinality);
    return DiscreteTable(std::move(variables), Cells::Zero(static_cast<Eigen::Index>(n)));
  }

  const std::vector<Variable>& variables() const { return variables_; }
  std::size_t size() const { return size_; }
  std::size_t rank() const { return variables_.size(); }

  const Cells& cells() const { return cells_; }
  Cells& cells() { return cells_; }

  bool contains(std::string_view name) const {
    return std::any_of(variables_.begin(), variables_.end(),
                       [&](const Variable& v) { return v.name == name; });
  }

  std::size_t index_of(std::string_view name) const {
    for (std::size_t i = 0; i < variables_.size(); ++i) {
      if (variables_[i].name == name) return i;
    }
    throw std::invalid_argument("unknown variable: " + std::string(name));
  }

  int cardinality(std::string_view name) const { return variables_[index_of(name)].cardinality; }

  std::size_t flat_index(std::span<const int> assignment) const {
    if (assignment.size() != variables_.size()) {
      throw std::invalid_argument("assignment rank mismatch");
    }
    std::size_t flat = 0;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      if (assignment[i] < 0 || assignment[i] >= variables_[i].cardinality) {
        throw std::out_of_range("value out of domain for " + variables_[i].name);
      }
      flat += static_cast<std::size_t>(assignment[i]) * strides_[i];
    }
    return flat;
  }

  std::vector<int> assignment_of(std::size_t flat) const {
    std::vector<int> a(variables_.size());
    for (std::size_t i = 0; i < variables_.size(); ++i) {
      a[i] = static_cast<int>(flat / strides_[i]);
      flat %= strides_[i];
    }
    return a;
  }

  Scalar operator()(std::initializer_list<int> assignment) const {
    return cells_(static_cast<Eigen::Index>(flat_index({assignment.begin(), assignment.size()})));
  }
  Scalar& operator()(std::initializer_list<int> assignment) {
    return cells_(static_cast<Eigen::Index>(flat_index({assignment.begin(), assignment.size()})));
  }
  Scalar at(std::span<const int> assignment) const {
    return cells_(static_cast<Eigen::Index>(flat_index(assignment)));
  }

  Scalar total() const { return cells_.sum(); }

  /// Sums out every variable not named in `keep`; the result follows the
  /// order of `keep`.
  DiscreteTable marginal(std::span<const std::string> keep) const {
    std::vector<Variable> kept;
    std::vector<std::size_t> source;
    kept.reserve(keep.size());
    for (const auto& name : keep) {
      const std::size_t i = index_of(name);
      if (std::find(source.begin(), source.end(), i) != source.end()) {
        throw std::invalid_argument("duplicate variable in marginal: " + name);
      }
      source.push_back(i);
      kept.push_back(variables_[i]);
    }
    DiscreteTable out = zeros(std::move(kept));
    std::vector<int> a(variables_.size(), 0);
    for (std::size_t flat = 0; flat < size_; ++flat) {
      std::size_t target = 0;
      for (std::size_t k = 0; k < source.size(); ++k) {
        target += static_cast<std::size_t>(a[source[k]]) * out.strides_[k];
      }
      out.cells_(static_cast<Eigen::Index>(target)) += cells_(static_cast<Eigen::Index>(flat));
      advance(a);
    }
    return out;
  }

  DiscreteTable marginal(std::initializer_list<std::string> keep) const {
    const std::vector<std::string> names(keep);
    return marginal(std::span<const std::string>(names));
  }

  /// Odometer increment over this table's domains, last variable fastest.
  void advance(std::vector<int>& a) const {
    for (std::size_t i = variables_.size(); i-- > 0;) {
      if (++a[i] < variables_[i].cardinality) return;
      a[i] = 0;
    }
  }

 private:
  void init_strides() {
    strides_.assign(variables_.size(), 1);
    size_ = 1;
    for (std::size_t i = variables_.size(); i-- > 0;) {
      if (variables_[i].cardinality < 1) {
        throw std::invalid_argument("variable " + variables_[i].name + " has empty domain");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (variables_[j].name == variables_[i].name) {
          throw std::invalid_argument("duplicate variable name: " + variables_[i].name);
        }
      }
      strides_[i] = size_;
      size_ *= static_cast<std::size_t>(variables_[i].cardinality);
    }
  }

  std::vector<Variable> variables_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
  Cells cells_;
};

using JointTable = DiscreteTable<double>;
using CountTable = DiscreteTable<std::int64_t>;

/// A partial assignment, e.g. {{"alpha", 1}, {"A", 0}}.
using Event = std::vector<std::pair<std::string, int>>;

inline constexpr double kExactTolerance = 1e-12;

/// True when every cell is non-negative and the cells sum to one.
inline bool is_normalized(const JointTable& t, double tol = kExactTolerance) {
  return (t.cells() >= -tol).all() && std::abs(t.total() - 1.0) <= tol;
}

/// Validates and returns a probability table.
inline JointTable make_joint(std::vector<Variable> variables, JointTable::Cells cells) {
  JointTable t(std::move(variables), std::move(cells));
  if (!is_normalized(t)) throw std::invalid_argument("cells are not a probability distribution");
  return t;
}

/// Probability of a partial assignment.
inline double probability(const JointTable& t, const Event& event) {
  std::vector<std::pair<std::size_t, int>> fixed;
  for (const auto& [name, value] : event) fixed.emplace_back(t.index_of(name), value);
  double p = 0.0;
  std::vector<int> a(t.rank(), 0);
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    bool match = true;
    for (const auto& [i, v] : fixed) match = match && a[i] == v;
    if (match) p += t.cells()(static_cast<Eigen::Index>(flat));
    t.advance(a);
  }
  return p;
}

/// Conditions on an event of positive probability. The result ranges over
/// the variables not fixed by the event, in their original order.
inline JointTable condition(const JointTable& t, const Event& event) {
  std::vector<std::pair<std::size_t, int>> fixed;
  for (const auto& [name, value] : event) {
    const std::size_t i = t.index_of(name);
    if (value < 0 || value >= t.variables()[i].cardinality) {
      throw std::out_of_range("conditioning value out of domain for " + name);
    }
    fixed.emplace_back(i, value);
  }
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < t.rank(); ++i) {
    const bool is_fixed = std::any_of(fixed.begin(), fixed.end(),
                                      [&](const auto& f) { return f.first == i; });
    if (!is_fixed) rest.push_back(t.variables()[i].name);
  }
  std::vector<Variable> rest_vars;
  for (const auto& name : rest) rest_vars.push_back(t.variables()[t.index_of(name)]);

  JointTable out = JointTable::zeros(std::move(rest_vars));
  std::vector<int> a(t.rank(), 0);
  std::vector<int> sub(out.rank(), 0);
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    bool match = true;
    for (const auto& [i, v] : fixed) match = match && a[i] == v;
    if (match) {
      std::size_t k = 0;
      for (std::size_t i = 0; i < t.rank(); ++i) {
        const bool is_fixed = std::any_of(fixed.begin(), fixed.end(),
                                          [&](const auto& f) { return f.first == i; });
        if (!is_fixed) sub[k++] = a[i];
      }
      out.cells()(static_cast<Eigen::Index>(out.flat_index(sub))) +=
          t.cells()(static_cast<Eigen::Index>(flat));
    }
    t.advance(a);
  }
  const double mass = out.total();
  if (!(mass > 0.0)) throw std::domain_error("conditioning event has zero probability");
  out.cells() /= mass;
  return out;
}

}  // namespace faithlab
