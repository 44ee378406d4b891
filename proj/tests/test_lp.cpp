#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "doctest.h"
#include "gulps/errors.hpp"
#include "gulps/lp.hpp"
#include "gulps/matcore.hpp"
#include "lp_oracle.hpp"

using namespace gulps;

using oracle::vertices;
using oracle::VertexOracle;

TEST_CASE("one-variable feasibility examples") {
  LpProblem p(1);
  p.add_row({1}, 1);
  p.add_row({-1}, 0);
  const LpOutcome o = solve(p);
  REQUIRE(o.status == LpStatus::Feasible);
  CHECK(o.x[0] >= -1e-12);
  CHECK(o.x[0] <= 1 + 1e-12);

  LpProblem q(1);
  q.add_row({1}, -1);
  q.add_row({-1}, -2);
  CHECK(solve(q).status == LpStatus::Infeasible);
  CHECK(feasible_point(q).status == LpStatus::Infeasible);
}

TEST_CASE("minimization reaches the optimal value") {
  LpProblem p(2);
  p.add_row({1, 1}, 1);
  p.add_row({-1, 0}, 0);
  p.add_row({0, -1}, 0);
  p.objective = {-1, -1};
  const LpOutcome o = solve(p);
  REQUIRE(o.status == LpStatus::Feasible);
  CHECK(o.objective_value == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(o.x[0] + o.x[1] == doctest::Approx(1.0));
}

TEST_CASE("unbounded objective is reported") {
  LpProblem p(1);
  p.add_row({-1}, 0);
  p.objective = {-1};
  CHECK(solve(p).status == LpStatus::Unbounded);
}

TEST_CASE("variable bounds are honoured") {
  LpProblem p(2);
  p.add_row({1, 1}, 10);
  p.var_bounds = {{0.25, 0.5}, {-std::numeric_limits<double>::infinity(), -1.0}};
  p.objective = {-1, -1};
  const LpOutcome o = solve(p);
  REQUIRE(o.status == LpStatus::Feasible);
  CHECK(o.x[0] == doctest::Approx(0.5));
  CHECK(o.x[1] == doctest::Approx(-1.0));
}

TEST_CASE("feasible_point returns the box centre") {
  LpProblem p(2);
  p.add_row({1, 0}, 1);
  p.add_row({-1, 0}, 0);
  p.add_row({0, 1}, 1);
  p.add_row({0, -1}, 0);
  const LpOutcome o = feasible_point(p);
  REQUIRE(o.status == LpStatus::Feasible);
  CHECK(std::abs(o.x[0] - 0.5) < 1e-9);
  CHECK(std::abs(o.x[1] - 0.5) < 1e-9);
  CHECK(o.min_slack == doctest::Approx(0.5));
}

TEST_CASE("feasible_point on a single point and on a segment") {
  LpProblem p(1);
  p.add_row({1}, 0);
  p.add_row({-1}, 0);
  const LpOutcome o = feasible_point(p);
  REQUIRE(o.status == LpStatus::Feasible);
  CHECK(std::abs(o.x[0]) < 1e-12);
  CHECK(o.min_slack == 0.0);

  // x + y = 1 with 0 ≤ x ≤ 1: the relative interior midpoint
  LpProblem s(2);
  s.add_row({1, 1}, 1);
  s.add_row({-1, -1}, -1);
  s.add_row({1, 0}, 1);
  s.add_row({-1, 0}, 0);
  const LpOutcome so = feasible_point(s);
  REQUIRE(so.status == LpStatus::Feasible);
  CHECK(so.x[0] == doctest::Approx(0.5));
  CHECK(so.x[1] == doctest::Approx(0.5));
}

TEST_CASE("status and optimum agree with vertex enumeration on random LPs") {
  Rng rng(77);
  int feasible = 0;
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng.next() % 3);
    const int m = 2 + static_cast<int>(rng.next() % 6);
    LpProblem p(n);
    for (int r = 0; r < m; ++r) {
      std::vector<double> row(static_cast<std::size_t>(n));
      for (double& v : row) v = rng.uniform(-1, 1);
      p.add_row(row, rng.uniform(-0.6, 1.0));
    }
    for (int j = 0; j < n; ++j) {
      std::vector<double> e(static_cast<std::size_t>(n), 0.0);
      e[static_cast<std::size_t>(j)] = 1.0;
      p.add_row(e, 5.0);
      e[static_cast<std::size_t>(j)] = -1.0;
      p.add_row(e, 5.0);
    }
    p.objective.resize(static_cast<std::size_t>(n));
    for (double& v : p.objective) v = rng.uniform(-1, 1);
    const VertexOracle want = vertices(p);
    const LpOutcome got = solve(p);
    CHECK((got.status == LpStatus::Feasible) == want.feasible);
    if (want.feasible && got.status == LpStatus::Feasible) {
      ++feasible;
      CHECK(got.max_violation <= 1e-9);
      CHECK(got.objective_value == doctest::Approx(want.best).epsilon(1e-9));
      const LpOutcome fp = feasible_point(p);
      CHECK(fp.max_violation <= 1e-9);
    }
  }
  // the generator should exercise both outcomes
  CHECK(feasible > 40);
  CHECK(feasible < 190);
}

TEST_CASE("solve is deterministic") {
  Rng rng(3);
  LpProblem p(3);
  for (int r = 0; r < 30; ++r) p.add_row({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(0, 1));
  const LpOutcome a = feasible_point(p);
  const LpOutcome b = feasible_point(p);
  CHECK(a.x == b.x);
}
