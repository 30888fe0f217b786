#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "t1cp/experiments.hpp"
#include "t1cp/moments.hpp"
#include "t1cp/parallel.hpp"
#include "t1cp/processes.hpp"

using namespace t1cp;

TEST_SUITE("experiments") {
  TEST_CASE("binomial estimates and z scores") {
    const auto e = binomial_estimate(25, 100, 9);
    CHECK(e.value == 0.25);
    CHECK(e.std_error == doctest::Approx(std::sqrt(0.25 * 0.75 / 100)));
    CHECK(z_score(e, e) == 0.0);
    const auto one = binomial_estimate(100, 100, 1);
    CHECK(z_score(one, one) == 0.0);
  }

  TEST_CASE("no infections: survival is the heal-free probability") {
    const auto g = build_torus(1, 8);
    for (auto m : {SurvivalMethod::forward, SurvivalMethod::clocks, SurvivalMethod::dual}) {
      const auto e = survival_probability(g, 0.0, 1.0, 0, 20000, 5, {m});
      CHECK(std::fabs(e.value - std::exp(-1.0)) < 4.0 * e.std_error);
    }
    const auto start = survival_probability(g, 0.7, 0.0, 0, 100, 5);
    CHECK(start.value == 1.0);
    CHECK(start.std_error == 0.0);
    CHECK_THROWS_AS(survival_probability(g, 0.7, 1.0, 0, 50, 5), std::invalid_argument);
  }

  TEST_CASE("estimates are reproducible and independent of the worker count") {
    const auto g = build_torus(2, 4);
    const auto a = survival_probability(g, 0.8, 2.0, 0, 3000, 77, {SurvivalMethod::forward});
    setenv("T1CP_THREADS", "3", 1);
    const auto b = survival_probability(g, 0.8, 2.0, 0, 3000, 77, {SurvivalMethod::forward});
    unsetenv("T1CP_THREADS");
    CHECK(a.value == b.value);
    const auto c = survival_probability(g, 0.8, 2.0, 0, 3000, 78, {SurvivalMethod::forward});
    CHECK(c.value != a.value);
  }

  TEST_CASE("the three survival samplers agree in law") {
    const auto g = build_tree(2, 4, RootVariant::full_degree);
    const auto f = survival_probability(g, 1.1, 2.0, 0, 20000, 1, {SurvivalMethod::forward});
    const auto c = survival_probability(g, 1.1, 2.0, 0, 20000, 2, {SurvivalMethod::clocks});
    const auto d = survival_probability(g, 1.1, 2.0, 0, 20000, 3, {SurvivalMethod::dual});
    CHECK(z_score(f, c) < 4.0);
    CHECK(z_score(f, d) < 4.0);
    CHECK(z_score(c, d) < 4.0);
    CHECK(resolve_method(g, 1.1, 2.0, {}) == SurvivalMethod::forward);
    const auto big = build_tree(4, 12, RootVariant::full_degree);
    CHECK(resolve_method(big, 0.3, 20.0, {}) == SurvivalMethod::dual);
  }

  TEST_CASE("duality on small graphs") {
    const auto zero = duality_check(build_torus(1, 6), 0, 0.5, 0.0, 100, 1);
    CHECK(zero.p_eta.value == 1.0);
    CHECK(zero.p_dual.value == 1.0);
    CHECK(zero.z == 0.0);
    int large = 0;
    std::uint64_t seed = 100;
    for (double lambda : {0.3, 1.0, 2.0})
      for (double t : {0.5, 2.0}) {
        large += duality_check(build_torus(2, 3), 4, lambda, t, 4000, seed++).z > 4.0;
        large += duality_check(build_tree(2, 3, RootVariant::son_only), 1, lambda, t, 4000, seed++).z > 4.0;
      }
    CHECK(large <= 1);
  }

  TEST_CASE("mean of xi and zeta against the closed form") {
    const auto g = build_torus(1, 12);
    const double times[] = {0.5, 1.0, 2.0};
    const double lambda = 0.4;
    const auto xi = mean_xi(g, lambda, times, 0, 20000, 8);
    const auto zeta = mean_zeta(g, lambda, times, 0, 20000, 9);
    for (std::size_t k = 0; k < 3; ++k) {
      const double want = mean_xi_closed_form(lambda, 2, times[k]);
      CHECK(std::fabs(xi[k].value - want) < 4.0 * xi[k].std_error);
      CHECK(std::fabs(zeta[k].value - 1.0) < 4.0 * zeta[k].std_error);
    }
    const double unsorted[] = {1.0, 0.5};
    CHECK_THROWS_AS(mean_xi(g, lambda, unsorted, 0, 100, 1), std::invalid_argument);
  }

  TEST_CASE("branching offspring and extinction") {
    const auto r = branching_survival(3, 0.5, 2.0, 6, 20000, 4);
    CHECK(r.offspring_expected == doctest::Approx(1.0));
    CHECK(std::fabs(r.offspring_mean - r.offspring_expected) < 4.0 * r.offspring_se);
    CHECK(r.heals + r.branchings > 0);

    const auto dead = branching_survival(3, 0.0, 2.0, 6, 5000, 4);
    CHECK(std::fabs(dead.survival.value - std::exp(-2.0)) < 4.0 * dead.survival.std_error);
    CHECK(dead.branchings == 0);

    // q = (1 + lambda q^n)/(1 + lambda) with n = 2: roots 1 and 1/lambda
    CHECK(branching_extinction_probability(2, 2.0) == doctest::Approx(0.5));
    CHECK(branching_extinction_probability(2, 0.5) == doctest::Approx(1.0));
    const double q = branching_extinction_probability(5, 0.5);
    CHECK(q == doctest::Approx((1.0 + 0.5 * std::pow(q, 5)) / 1.5));
    CHECK(q < 1.0);
  }

  TEST_CASE("per-depth branching counts match the set process on a small tree") {
    const int n = 2, depth = 3;
    const double lambda = 1.5, t = 1.5;
    const auto counted = branching_survival(n, lambda, t, depth, 40000, 31);
    const auto g = build_tree(n, depth, RootVariant::son_only);
    std::int64_t alive = 0;
    const int reps = 20000;
    const double times[] = {t};
    for (int r = 0; r < reps; ++r) {
      const auto s = build_schedule(g, lambda, t, 5000 + r);
      BranchProcess p(g, VertexSet::singleton(g.vertex_count(), 0));
      alive += !run(p, s, times)[0].empty();
    }
    const auto replayed = binomial_estimate(alive, reps, 0);
    CHECK(z_score(counted.survival, replayed) < 4.0);
  }

  TEST_CASE("lambda scan") {
    const auto g = build_torus(1, 10);
    const double grid[] = {0.5, 1.0, 1.5, 2.0};
    const auto s = lambda_scan(g, grid, 3.0, 0, 4000, 12);
    CHECK(s.monotonicity_violations == 0);
    for (std::size_t j = 1; j < s.rows.size(); ++j) CHECK(s.rows[j].survival.value >= s.rows[j - 1].survival.value);
    // a one-point scan draws exactly what the forward sampler draws
    const double single[] = {1.2};
    const auto one = lambda_scan(g, single, 3.0, 0, 4000, 12);
    const auto fwd = survival_probability(g, 1.2, 3.0, 0, 4000, 12, {SurvivalMethod::forward});
    CHECK(one.rows[0].survival.value == fwd.value);
    const double bad[] = {1.0, 0.5};
    CHECK_THROWS_AS(lambda_scan(g, bad, 3.0, 0, 100, 1), std::invalid_argument);
  }

  TEST_CASE("critical estimate") {
    const auto g = build_tree(3, 6, RootVariant::full_degree);
    CriticalOptions o;
    o.t = 5.0;
    o.replicas = 1000;
    o.tol = 0.05;
    CHECK_THROWS_AS(critical_estimate(g, 3.0, 4.0, o), std::invalid_argument);
    CHECK_THROWS_AS(critical_estimate(g, 0.5, 0.4, o), std::invalid_argument);
    const auto r = critical_estimate(g, 0.05, 2.0, o);
    CHECK(r.hi - r.lo <= o.tol);
    CHECK(r.lo >= 0.05);
    CHECK(r.hi <= 2.0);
    CHECK(!r.disclaimer.empty());
    CHECK(r.evaluations.size() >= 2);
  }

  TEST_CASE("bounds table") {
    const auto t = tree_bounds(10);
    CHECK(t.lower == doctest::Approx(1.0 / 11.0));
    REQUIRE(t.upper.has_value());
    CHECK(*t.upper == doctest::Approx(1.0 / 9.0));
    CHECK(t.degree == 11);
    const auto l3 = lattice_bounds(3, 2000);
    CHECK(l3.lower == doctest::Approx(1.0 / 6.0));
    CHECK_FALSE(l3.upper.has_value());
    CHECK(!l3.upper_note.empty());
    const auto l10 = lattice_bounds(10, 2000);
    REQUIRE(l10.upper.has_value());
    CHECK(*l10.upper > l10.lower);
    CHECK(l10.scaled_lower == doctest::Approx(1.0));
    const int ds[] = {4, 5};
    const int ns[] = {2};
    CHECK(bounds_report(ds, ns).size() == 3);
  }

  TEST_CASE("parallel_for covers each index once") {
    std::vector<int> hits(1000, 0);
    setenv("T1CP_THREADS", "4", 1);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    unsetenv("T1CP_THREADS");
    for (int h : hits) CHECK(h == 1);
  }
}
