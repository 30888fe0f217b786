#include <doctest.h>

#include <cmath>
#include <random>

#include "t1cp/moments.hpp"

using namespace t1cp;

namespace {

using Dense = std::vector<std::vector<long double>>;

// Second-moment generator written out from its definition on the box.
Dense dense_q(int d, double lambda, int radius) {
  const Box box(d, radius);
  const std::size_t n = box.size();
  Dense q(n, std::vector<long double>(n, 0.0L));
  auto add = [&](std::size_t row, std::vector<int> y, long double v) {
    for (int c : y)
      if (std::abs(c) > radius) return;
    q[row][box.index(y)] += v;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = box.point(i);
    const bool origin = i == box.origin();
    q[i][i] += origin ? 1.0L - 2.0L * lambda * d : -4.0L * lambda * d;
    for (int k = 0; k < d; ++k)
      for (int s : {-1, 1}) {
        auto y = x;
        y[k] += s;
        add(i, y, 2.0L * lambda);
      }
    if (!origin) continue;
    for (int k = 0; k < d; ++k)
      for (int s : {-2, 2}) {
        auto y = x;
        y[k] += s;
        add(i, y, lambda);
      }
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b)
        for (int sa : {-1, 1})
          for (int sb : {-1, 1}) {
            auto y = x;
            y[a] += sa;
            y[b] += sb;
            add(i, y, 2.0L * lambda);
          }
  }
  return q;
}

std::vector<long double> dense_expm_apply(const Dense& q, const std::vector<double>& v, double t) {
  const std::size_t n = q.size();
  std::vector<long double> term(v.begin(), v.end()), sum = term, next(n);
  for (int k = 1; k < 200; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      long double acc = 0.0L;
      for (std::size_t j = 0; j < n; ++j) acc += q[i][j] * term[j];
      next[i] = acc * t / k;
    }
    term.swap(next);
    for (std::size_t i = 0; i < n; ++i) sum[i] += term[i];
  }
  return sum;
}

}  // namespace

TEST_SUITE("moments") {
  TEST_CASE("closed-form mean of xi") {
    CHECK(mean_xi_closed_form(0.5, 2, 3.0) == doctest::Approx(1.0));
    CHECK(mean_xi_closed_form(0.3, 4, 2.0) == doctest::Approx(std::exp(0.4)));
    CHECK(mean_xi_closed_form(0.3, 4, 0.0) == 1.0);
  }

  TEST_CASE("box indexing") {
    const Box box(3, 2);
    CHECK(box.size() == 125);
    const int o[3] = {0, 0, 0};
    CHECK(box.index(o) == box.origin());
    for (std::size_t i = 0; i < box.size(); ++i) CHECK(box.index(box.point(i)) == i);
    const int x[3] = {2, -1, 0};
    const auto i = box.index(x);
    CHECK(box.sup_norm(i) == 2);
    CHECK_FALSE(box.shifted(i, 0, 1).has_value());
    const int y[3] = {2, 0, 0};
    CHECK(box.shifted(i, 1, 1) == box.index(y));
  }

  TEST_CASE("generator entries match the definition") {
    for (int d : {1, 2, 3}) {
      const double lambda = 0.35;
      const int radius = d == 3 ? 2 : 3;
      const auto q = build_q(d, lambda, radius);
      const auto ref = dense_q(d, lambda, radius);
      for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) CHECK(q.entry(i, j) == doctest::Approx(static_cast<double>(ref[i][j])));
      CHECK(q.row_sum(q.box().origin()) == doctest::Approx(1.0 + 4.0 * lambda * d * d));
      const int inner[3] = {1, 0, 0};
      CHECK(q.row_sum(q.box().index(std::span<const int>(inner, d))) == doctest::Approx(0.0).epsilon(1e-14));
      CHECK(q.norm_inf() <= q.norm_bound() + 1e-12);
    }
    CHECK_THROWS(build_q(2, 0.3, 1));
  }

  TEST_CASE("matrix exponential against a dense series") {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int d : {1, 2}) {
      const double lambda = 0.45;
      const auto q = build_q(d, lambda, 2);
      const auto dense = dense_q(d, lambda, 2);
      std::vector<double> v(q.size());
      for (auto& x : v) x = u(gen);
      for (double t : {0.0, 0.3, 1.0, 2.5}) {
        const auto got = expm_apply(q, v, t);
        const auto want = dense_expm_apply(dense, v, t);
        double scale = 0.0;
        for (auto w : want) scale = std::max(scale, static_cast<double>(std::fabs(w)));
        for (std::size_t i = 0; i < v.size(); ++i)
          CHECK(std::fabs(got[i] - static_cast<double>(want[i])) <= 1e-12 * scale);
      }
    }
  }

  TEST_CASE("semigroup property and positivity") {
    const auto q = build_q(3, 0.25, 3);
    std::vector<double> v(q.size(), 0.0);
    v[q.box().origin()] = 1.0;
    v[7] = 2.0;
    const auto whole = expm_apply(q, v, 1.5);
    const auto half = expm_apply(q, expm_apply(q, v, 0.7), 0.8);
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(whole[i] == doctest::Approx(half[i]).epsilon(1e-11));
      CHECK(whole[i] >= 0.0);
    }
  }

  TEST_CASE("second moment starts at one with slope 1 + 4 lambda d^2") {
    const double lambda = 0.3;
    const int d = 2;
    const double times[] = {0.0, 1e-4, 0.5};
    const auto rows = integrate_second_moment(d, lambda, 4, times);
    CHECK(rows[0].g_origin == 1.0);
    CHECK((rows[1].g_origin - 1.0) / 1e-4 == doctest::Approx(1.0 + 4.0 * lambda * d * d).epsilon(1e-3));
    CHECK(rows[2].g_origin > rows[1].g_origin);
    CHECK(rows[2].leakage >= 0.0);
    CHECK(rows[2].leakage < rows[2].g_origin);
  }

  TEST_CASE("hypothesis constants") {
    CHECK(hypothesis_margin(0.2, 4) == doctest::Approx(0.0));
    CHECK_FALSE(lambda_threshold(0.2, 4).has_value());
    CHECK(*lambda_threshold(0.1, 4) == doctest::Approx(1.0 / (16.0 * 0.5)));
    CHECK(b_lambda(0.1, 4, 1.0) == doctest::Approx((16.0 * 0.5 - 1.0) / 65.0));
  }

  TEST_CASE("harmonic function on the box") {
    const int d = 5;
    const double lambda = 0.3;
    const auto table = hitting_table(d, 4, 4000);
    const auto h = build_h(d, lambda, table, 4);
    CHECK(h.b > 0.0);
    const auto q = build_q(d, lambda, 4);
    CHECK(h.values[q.box().origin()] == doctest::Approx(1.0 + h.b));
    for (double v : h.values) {
      CHECK(v >= h.b);
      CHECK(v <= 1.0 + h.b);
    }
    const auto rep = check_harmonic(q, h, 2);
    CHECK(rep.within_tolerance);
    CHECK(std::fabs(rep.row0_identity) < 1e-12);
    CHECK(second_moment_bound(h) == doctest::Approx((1.0 + h.b) / h.b));
    CHECK(second_moment_bound(h) > 1.0);
    CHECK_THROWS_AS(check_harmonic(q, h, 3), std::invalid_argument);

    const auto t3 = hitting_table(3, 4, 1000);
    CHECK_THROWS_AS(build_h(3, 0.5, t3, 4), HypothesisError);
    CHECK_THROWS_AS(build_h(d, 0.01, table, 4), HypothesisError);
  }
}
