#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace hcd;

namespace {

Problem identity_problem(DenseVector x) {
  const std::size_t n = x.size();
  return Problem{DenseMatrix::identity(n), std::move(x), std::nullopt};
}

}  // namespace

TEST_CASE("objective examples") {
  const Problem p = identity_problem(DenseVector{1, 0});
  CHECK(objective(p, DenseVector{1, 0}, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(objective(p, DenseVector{0, 0}, 0.3) == 0.5);
  const Problem q{DenseMatrix::from_rows({{2, 0}, {0, 4}}), DenseVector{2, 8}, std::nullopt};
  CHECK(objective(q, DenseVector{1, 2}, 0.0) == 0.0);
  CHECK_THROWS_AS(objective(p, DenseVector{1}, 0.3), DimensionError);
}

TEST_CASE("threshold value dichotomy at the boundary") {
  CHECK(threshold_value(0.9, 0.5, 1.0) == 0.0);
  CHECK(threshold_value(0.9, 0.3, 1.0) == 0.9);
  CHECK(threshold_value(-0.9, 0.3, 1.0) == -0.9);
  CHECK(threshold_value(1.0, 0.5, 1.0) == 0.0);  // s^2 == 2 lambda / L is not kept
  CHECK(threshold_value(0.25, 0.0, 1.0) == 0.25);
  CHECK(threshold_value(0.0, 0.0, 1.0) == 0.0);
}

TEST_CASE("hard_threshold examples on a unit column") {
  const Problem p = identity_problem(DenseVector{0.9, 0.0});
  SolverState st = SolverState::start(p, DenseVector(2), 0.5);
  CHECK(hard_threshold(st, p, 0, 0.5, 1.0) == 0.0);
  CHECK(hard_threshold(st, p, 0, 0.3, 1.0) == 0.9);
  CHECK(hard_threshold(st, p, 1, 0.3, 1.0) == 0.0);  // zero partial residual
  CHECK_THROWS_AS(hard_threshold(st, p, 2, 0.3, 1.0), IndexError);

  // The partial residual adds back the coordinate's own contribution.
  SolverState warm = SolverState::start(p, DenseVector{0.4, 0.0}, 0.3);
  CHECK(hard_threshold(warm, p, 0, 0.3, 1.0) == doctest::Approx(0.9).epsilon(1e-15));

  // Larger L shrinks the step: s = 0.4 + 0.5 / 2 = 0.65, kept since 0.4225 > 0.3.
  CHECK(hard_threshold(warm, p, 0, 0.3, 2.0) == doctest::Approx(0.65).epsilon(1e-15));
}

TEST_CASE("hard_threshold with zero lambda is the least-squares step") {
  const Problem p{DenseMatrix::from_rows({{0.6, 1}, {0.8, 0}}), DenseVector{1, 2}, std::nullopt};
  SolverState st = SolverState::start(p, DenseVector(2), 0.0);
  CHECK(hard_threshold(st, p, 0, 0.0, 1.0) == doctest::Approx(0.6 + 1.6).epsilon(1e-15));
}

TEST_CASE("act_coo_des with an empty active set does nothing") {
  const Problem p = identity_problem(DenseVector{1, 2});
  SolverState st = SolverState::start(p, DenseVector(2), 0.1);
  const InnerStats stats = act_coo_des(st, p, 0.1, SolverParams{});
  CHECK(stats.sweeps == 0);
  CHECK(st.alpha == DenseVector{0, 0});
}

TEST_CASE("act_coo_des on an orthonormal dictionary") {
  const Problem p = identity_problem(DenseVector{2, -0.05, 0.7});
  SolverParams params;
  const double lambda = 0.1;  // threshold sqrt(0.2) ~ 0.447

  SolverState st = SolverState::start(p, DenseVector{1, 1, 1}, lambda);
  params.max_inner = 1;
  act_coo_des(st, p, lambda, params);
  CHECK(st.alpha == DenseVector{2, 0, 0.7});  // one sweep reaches the minimizer

  SolverState again = SolverState::start(p, DenseVector{1, 1, 1}, lambda);
  params.max_inner = 100;
  const InnerStats stats = act_coo_des(again, p, lambda, params);
  CHECK(stats.sweeps == 2);
  CHECK_FALSE(stats.cap_hit);
  CHECK(again.alpha == DenseVector{2, 0, 0.7});
}

TEST_CASE("act_coo_des on a single coordinate reaches the closed form") {
  std::mt19937_64 rng(3);
  const Problem p{test::unit_gaussian(6, 4, rng), test::gaussian_vector(6, rng), std::nullopt};
  const double lambda = 0.01;
  SolverState st = SolverState::start(p, DenseVector{0.5, 0, 0, 0}, lambda);
  act_coo_des(st, p, lambda, SolverParams{});
  const double c = column_dot(p.dictionary, 0, p.signal);
  CHECK(st.alpha[0] == doctest::Approx(threshold_value(c, lambda, 1.0)).epsilon(1e-14));
  CHECK(st.alpha[1] == 0.0);
}

TEST_CASE("act_coo_des reports the sweep cap") {
  std::mt19937_64 rng(8);
  const Problem p{test::unit_gaussian(10, 6, rng), test::gaussian_vector(10, rng), std::nullopt};
  SolverParams params;
  params.max_inner = 1;
  SolverState st = SolverState::start(p, DenseVector{1, 1, 1, 1, 1, 1}, 1e-4);
  const InnerStats stats = act_coo_des(st, p, 1e-4, params);
  CHECK(stats.sweeps == 1);
  CHECK(stats.cap_hit);
}

TEST_CASE("strong rule examples") {
  SolverParams params;
  const Problem zero = identity_problem(DenseVector{0, 0, 0});
  CHECK(strong_rule_init(DenseVector(3), zero, 1.0, params).empty());

  const Problem p = identity_problem(DenseVector{3, 0.1, 0});
  CHECK(strong_rule_init(DenseVector(3), p, 2.0, params) == ActiveSet({0}));
  CHECK(strong_rule_init(DenseVector{1, -2, 3}, p, 50.0, params) == ActiveSet({0, 1, 2}));
  // Nonzero pattern plus gradient-qualified zeros.
  CHECK(strong_rule_init(DenseVector{0, 0, 1}, p, 2.0, params) == ActiveSet({0, 2}));
}

TEST_CASE("active set keeps indices sorted and unique") {
  ActiveSet a({5, 1, 3, 1});
  CHECK(std::vector<std::size_t>(a.indices().begin(), a.indices().end()) ==
        std::vector<std::size_t>{1, 3, 5});
  CHECK(a.insert(2));
  CHECK_FALSE(a.insert(3));
  CHECK(a.contains(2));
  CHECK_FALSE(a.contains(4));
  CHECK(ActiveSet::from_pattern(DenseVector{0, 1, 0, -2}) == ActiveSet({1, 3}));
}

TEST_CASE("ite_act_upd examples") {
  SolverParams params;
  const Problem zero = identity_problem(DenseVector{0, 0, 0});
  auto [a0, t0] = ite_act_upd(DenseVector(3), zero, 0.1, params);
  CHECK(a0 == DenseVector{0, 0, 0});
  CHECK(t0.middle_iters == 0);

  // Separable case: the stage output is the coordinatewise hard threshold of x.
  const Problem p = identity_problem(DenseVector{1.5, 0.2, -0.9, 0.05, -2});
  const double lambda = 0.3;  // threshold sqrt(0.6) ~ 0.775
  auto [a, t] = ite_act_upd(DenseVector(5), p, lambda, params);
  CHECK(a == DenseVector{1.5, 0, -0.9, 0, -2});
  const OracleResult oracle = brute_force_l0(p, lambda, 5);
  CHECK(ActiveSet::from_pattern(a) == oracle.support);
  CHECK(t.objective_checkpoints.back() == doctest::Approx(oracle.objective).epsilon(1e-12));
}

TEST_CASE("every admission strictly decreases the objective") {
  std::mt19937_64 rng(21);
  SolverParams params;
  params.phi = 0.5;  // weak strong rule so most coordinates enter through admissions
  std::size_t admissions = 0;
  for (int rep = 0; rep < 30; ++rep) {
    const Problem p = test::sparse_instance(30, 60, 6, 0.01, rng);
    const double lambda = 0.02;
    auto [alpha, trace] = ite_act_upd(DenseVector(60), p, lambda, params);
    // Checkpoints: first inner loop, then (admission, inner loop) pairs.
    REQUIRE(trace.objective_checkpoints.size() == 1 + 2 * trace.middle_iters);
    for (std::size_t m = 1; m <= trace.middle_iters; ++m) {
      CHECK(trace.objective_checkpoints[2 * m - 1] < trace.objective_checkpoints[2 * m - 2]);
      ++admissions;
    }
  }
  CHECK(admissions > 0);
}

TEST_CASE("lambda schedule") {
  SolverParams params;
  params.lambda_tgt = 0.1;
  params.eta = 0.5;
  CHECK(lambda_schedule(1.0, params) == std::vector<double>{0.5, 0.25, 0.125, 0.1});
  CHECK(lambda_schedule(0.05, params) == std::vector<double>{0.1});
  CHECK(lambda_schedule(0.2, params) == std::vector<double>{0.1});

  bool truncated = false;
  params.max_outer = 3;
  params.lambda_tgt = 1e-6;
  const auto s = lambda_schedule(1.0, params, &truncated);
  CHECK(truncated);
  CHECK(s.size() == 3);
  CHECK(s.back() == 1e-6);

  for (double eta : {0.2, 0.5, 0.8}) {
    SolverParams q;
    q.eta = eta;
    q.lambda_tgt = 0.01;
    const double lambda0 = 7.3;
    const auto sched = lambda_schedule(lambda0, q);
    const double expected = std::ceil(std::log(q.lambda_tgt / lambda0) / std::log(eta));
    CHECK(std::abs(static_cast<double>(sched.size()) - expected) <= 1.0);
    for (std::size_t n = 1; n + 1 < sched.size(); ++n) CHECK(sched[n] == sched[n - 1] * eta);
    CHECK(sched.back() == q.lambda_tgt);
  }
}

TEST_CASE("parameter validation") {
  auto bad = [](auto mutate) {
    SolverParams p;
    mutate(p);
    return p;
  };
  CHECK_THROWS_AS(bad([](SolverParams& p) { p.eta = 1.0; }).validate(), ParameterError);
  CHECK_THROWS_AS(bad([](SolverParams& p) { p.eta = 0.0; }).validate(), ParameterError);
  CHECK_THROWS_AS(bad([](SolverParams& p) { p.phi = 1.0; }).validate(), ParameterError);
  CHECK_THROWS_AS(bad([](SolverParams& p) { p.tau = 0.0; }).validate(), ParameterError);
  CHECK_THROWS_AS(bad([](SolverParams& p) { p.lambda_tgt = -1; }).validate(), ParameterError);
  CHECK_THROWS_AS(bad([](SolverParams& p) { p.max_inner = 0; }).validate(), ParameterError);
  CHECK_NOTHROW(SolverParams{}.validate());
}

TEST_CASE("solve_hcd on a zero signal") {
  const Problem p = identity_problem(DenseVector{0, 0, 0});
  const Solution s = solve_hcd(p, SolverParams{});
  CHECK(s.alpha == DenseVector{0, 0, 0});
  CHECK(s.trace.lambda0 == 0.0);
  REQUIRE(s.trace.stages.size() == 1);
  CHECK(s.trace.stages[0].lambda == 0.01);
  CHECK(s.objective == 0.0);
}

TEST_CASE("solve_hcd input checks") {
  const Problem skewed{DenseMatrix::from_rows({{2, 0}, {0, 1}}), DenseVector{1, 1}, std::nullopt};
  CHECK_THROWS_AS(solve_hcd(skewed, SolverParams{}), NormalizationError);
  const Problem mismatch{DenseMatrix::identity(2), DenseVector{1, 1, 1}, std::nullopt};
  CHECK_THROWS_AS(solve_hcd(mismatch, SolverParams{}), DimensionError);
  const Problem p = identity_problem(DenseVector{1, 1});
  CHECK_THROWS_AS(solve_hcd(p, SolverParams{}, DenseVector{1}), DimensionError);
}

TEST_CASE("solve_hcd matches the oracle on a small noise-free instance") {
  std::mt19937_64 rng(30);
  int matched = 0;
  for (int rep = 0; rep < 5; ++rep) {
    const Problem p = test::sparse_instance(30, 50, 3, 0.0, rng);
    const Solution s = solve_hcd(p, SolverParams{});
    const OracleResult o = brute_force_l0(p, 0.01, 3);
    CHECK(s.objective >= o.objective - 1e-10);
    if (ActiveSet::from_pattern(s.alpha) == o.support) ++matched;
  }
  CHECK(matched >= 4);
}

TEST_CASE("solve_hcd trace and solution consistency") {
  std::mt19937_64 rng(31);
  const Problem p = test::sparse_instance(60, 150, 8, 0.0, rng);
  SolverParams params;
  const Solution s = solve_hcd(p, params);
  CHECK(s.trace.method == "hcd");
  CHECK(s.trace.lambda0 == norm_inf(matvec_transposed(p.dictionary, p.signal).span()));
  CHECK(s.objective == doctest::Approx(test::naive_objective(p, s.alpha, params.lambda_tgt))
                           .epsilon(1e-10));
  std::size_t total = 0;
  for (std::size_t n = 0; n < s.trace.stages.size(); ++n) {
    const StageTrace& st = s.trace.stages[n];
    total += st.middle_iters;
    CHECK(st.admitted_coords.size() == st.middle_iters);
    CHECK(st.nnz_checkpoints.size() == st.objective_checkpoints.size());
    if (n > 0) CHECK(st.lambda < s.trace.stages[n - 1].lambda);
  }
  CHECK(total == s.trace.total_middle_iters);
  CHECK(s.trace.stages.back().lambda == params.lambda_tgt);
  CHECK(s.trace.cap_warnings.empty());
  CHECK(s.objective <= objective(p, *p.truth, params.lambda_tgt) + 1e-12);
}

TEST_CASE("warm start from the solver's own output is a fixed point") {
  std::mt19937_64 rng(32);
  for (int rep = 0; rep < 20; ++rep) {
    const Problem p = test::sparse_instance(40, 100, 5, 0.01, rng);
    SolverParams params;
    const Solution first = solve_hcd(p, params);
    const Solution again = solve_hcd(p, params, first.alpha);
    CHECK(again.trace.total_middle_iters == 0);
    CHECK(ActiveSet::from_pattern(again.alpha) == ActiveSet::from_pattern(first.alpha));
    CHECK(again.objective <= first.objective + 1e-12);
  }
}

TEST_CASE("cap warnings surface in the trace") {
  std::mt19937_64 rng(33);
  const Problem p = test::sparse_instance(40, 100, 10, 0.0, rng);
  SolverParams params;
  params.max_middle = 1;
  params.phi = 1e-3;
  params.eta = 0.1;
  const Solution s = solve_hcd(p, params);
  CHECK_FALSE(s.trace.cap_warnings.empty());

  SolverParams outer;
  outer.max_outer = 2;
  outer.lambda_tgt = 1e-4;
  const Solution t = solve_hcd(p, outer);
  CHECK(t.trace.stages.size() == 2);
  CHECK_FALSE(t.trace.cap_warnings.empty());
}
