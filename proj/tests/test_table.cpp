#include <doctest.h>

#include "faithlab/table.hpp"

#include <random>

using namespace faithlab;

namespace {

JointTable random_table(std::mt19937_64& g, std::vector<Variable> vars) {
  JointTable t = JointTable::zeros(std::move(vars));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Eigen::Index i = 0; i < t.cells().size(); ++i) t.cells()(i) = u(g);
  t.cells() /= t.total();
  return t;
}

}  // namespace

TEST_CASE("layout is row-major with the last variable fastest") {
  JointTable t = JointTable::zeros({{"x", 2}, {"y", 3}});
  CHECK(t.size() == 6);
  CHECK(t.flat_index(std::vector<int>{1, 2}) == 5);
  CHECK(t.flat_index(std::vector<int>{0, 2}) == 2);
  CHECK(t.assignment_of(4) == std::vector<int>{1, 1});
}

TEST_CASE("marginal sums out and reorders") {
  JointTable::Cells c(4);
  c << 0.1, 0.2, 0.3, 0.4;
  const JointTable t = make_joint({{"x", 2}, {"y", 2}}, c);
  const JointTable mx = t.marginal({"x"});
  CHECK(mx({0}) == doctest::Approx(0.3));
  CHECK(mx({1}) == doctest::Approx(0.7));
  const JointTable yx = t.marginal({"y", "x"});
  CHECK(yx({1, 0}) == doctest::Approx(0.2));
  CHECK(t.marginal(std::vector<std::string>{}).total() == doctest::Approx(1.0));
}

TEST_CASE("condition renormalizes over the remaining variables") {
  JointTable::Cells c(4);
  c << 0.1, 0.2, 0.3, 0.4;
  const JointTable t = make_joint({{"x", 2}, {"y", 2}}, c);
  const JointTable given = condition(t, {{"x", 1}});
  REQUIRE(given.rank() == 1);
  CHECK(given.variables()[0].name == "y");
  CHECK(given({0}) == doctest::Approx(3.0 / 7.0));
  CHECK(probability(t, {{"y", 1}}) == doctest::Approx(0.6));
}

TEST_CASE("invalid tables and events are rejected") {
  CHECK_THROWS_AS(JointTable({{"x", 2}}, JointTable::Cells::Constant(3, 0.1)), std::invalid_argument);
  CHECK_THROWS_AS(JointTable::zeros({{"x", 2}, {"x", 2}}), std::invalid_argument);
  CHECK_THROWS_AS(make_joint({{"x", 2}}, JointTable::Cells::Constant(2, 0.4)), std::invalid_argument);
  JointTable::Cells c(2);
  c << 1.0, 0.0;
  const JointTable t = make_joint({{"x", 2}}, c);
  CHECK_THROWS_AS(condition(t, {{"x", 1}}), std::domain_error);
  CHECK_THROWS_AS(t.index_of("nope"), std::invalid_argument);
}

TEST_CASE("property: marginals and conditionals of random tables stay valid") {
  std::mt19937_64 g(7);
  for (int trial = 0; trial < 200; ++trial) {
    const JointTable t = random_table(g, {{"a", 2}, {"b", 3}, {"c", 2}, {"d", 2}});
    CHECK(is_normalized(t));
    const JointTable m1 = t.marginal({"d", "b"});
    CHECK(is_normalized(m1));
    // summation order does not matter
    const JointTable m2 = t.marginal({"b", "c", "d"}).marginal({"d", "b"});
    CHECK((m1.cells() - m2.cells()).abs().maxCoeff() < 1e-12);
    const JointTable c = condition(t, {{"b", trial % 3}, {"a", 1}});
    CHECK(is_normalized(c));
  }
}
