#include <doctest.h>

#include <array>
#include <cmath>
#include <map>

#include "t1cp/walk.hpp"

using namespace t1cp;

namespace {

// Number of closed walks of length `steps` on Z^d by brute force.
long long count_closed_walks(int d, int steps) {
  long long total = 0;
  long long paths = 1;
  for (int i = 0; i < steps; ++i) paths *= 2 * d;
  for (long long code = 0; code < paths; ++code) {
    std::array<int, 4> pos{};
    long long c = code;
    for (int i = 0; i < steps; ++i) {
      const int m = static_cast<int>(c % (2 * d));
      c /= 2 * d;
      pos[m / 2] += (m % 2) ? 1 : -1;
    }
    bool home = true;
    for (int k = 0; k < d; ++k) home = home && pos[k] == 0;
    total += home;
  }
  return total;
}

// P(walk from e_1 hits 0 within `horizon` steps) by dynamic programming.
double hit_within(int d, int horizon) {
  const int r = horizon + 2;
  const int w = 2 * r + 1;
  std::size_t size = 1;
  for (int k = 0; k < d; ++k) size *= w;
  std::vector<double> p(size, 0.0), q(size);
  auto idx = [&](const std::array<int, 2>& x) {
    std::size_t i = 0, s = 1;
    for (int k = 0; k < d; ++k) {
      i += (x[k] + r) * s;
      s *= w;
    }
    return i;
  };
  p[idx({1, 0})] = 1.0;
  double hit = 0.0;
  for (int step = 0; step < horizon; ++step) {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t i = 0; i < size; ++i) {
      if (p[i] == 0.0) continue;
      std::array<int, 2> x{};
      std::size_t c = i;
      for (int k = 0; k < d; ++k) {
        x[k] = static_cast<int>(c % w) - r;
        c /= w;
      }
      for (int k = 0; k < d; ++k)
        for (int s : {-1, 1}) {
          auto y = x;
          y[k] += s;
          const double mass = p[i] / (2 * d);
          if (y[0] == 0 && y[1] == 0) hit += mass;
          else q[idx(y)] += mass;
        }
    }
    std::swap(p, q);
  }
  return hit;
}

Rational central_binomial_over_4n(int n) {
  Rational r = 1;
  for (int k = 1; k <= n; ++k) r = r * (2 * k - 1) / (2 * k);
  return r;
}

}  // namespace

TEST_SUITE("walk") {
  TEST_CASE("exact return probabilities match enumeration") {
    for (int d = 1; d <= 2; ++d)
      for (int n = 1; n <= 3; ++n) {
        long long paths = 1;
        for (int i = 0; i < 2 * n; ++i) paths *= 2 * d;
        const Rational brute(count_closed_walks(d, 2 * n), paths);
        CHECK(p_return_exact(d, n) == brute);
      }
    CHECK(p_return_exact(2, 2) == Rational(9, 64));
  }

  TEST_CASE("closed forms in one and two dimensions") {
    for (int n = 1; n <= 40; ++n) {
      const auto c = central_binomial_over_4n(n);
      CHECK(p_return_exact(1, n) == c);
      CHECK(p_return_exact(2, n) == c * c);
    }
  }

  TEST_CASE("two-step return is 1/(2d)") {
    for (int d = 1; d <= 12; ++d) {
      CHECK(p_return_exact(d, 1) == Rational(1, 2 * d));
      CHECK(p_return(d, 1) == doctest::Approx(1.0 / (2 * d)).epsilon(1e-15));
    }
  }

  TEST_CASE("allocation normalisation is one") {
    for (int d : {1, 2, 3, 5, 8})
      for (int n : {1, 2, 7, 20}) CHECK(allocation_normalization(d, n) == 1);
  }

  TEST_CASE("double and exact routes agree") {
    for (int d : {3, 4, 6, 9}) {
      const auto exact = return_series_exact(d, 80);
      const auto fast = return_series(d, 80);
      REQUIRE(fast.size() == exact.size());
      for (std::size_t i = 0; i < exact.size(); ++i) {
        const double e = static_cast<double>(exact[i]);
        CHECK(std::fabs(fast[i] - e) <= 1e-12 * e);
      }
    }
    CHECK_THROWS(return_series_exact(20, 1000));
  }

  TEST_CASE("return probabilities decay") {
    for (int d : {1, 3, 7}) {
      const auto s = return_series(d, 300);
      for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] < s[i - 1]);
    }
  }

  TEST_CASE("Green function in three dimensions") {
    const auto g = green_function(3);
    // Watson's integral
    CHECK(std::fabs(g.value - 1.516386059151978) < 1e-6);
    CHECK(std::fabs(g.value - 1.516386059151978) <= g.uncertainty + 1e-9);
    CHECK(g.uncertainty < 1e-5);
    CHECK_THROWS_AS(green_function(2), std::domain_error);
    CHECK_THROWS_AS(green_function(1), std::domain_error);
    for (int d = 3; d <= 12; ++d) CHECK(green_function(d, 2000).value > 1.0 + 1.0 / (2 * d));
  }

  TEST_CASE("hitting probability") {
    const auto low = hitting_prob_e1(2);
    CHECK(low.recurrent);
    CHECK(low.value == 1.0);
    const auto f3 = hitting_prob_e1(3);
    CHECK_FALSE(f3.recurrent);
    CHECK(f3.value == doctest::Approx(1.0 - 1.0 / 1.516386059151978).epsilon(1e-6));
  }

  TEST_CASE("the block-bound tail dominates the local-CLT tail") {
    for (int d = 3; d <= 8; ++d) {
      const auto clt = return_series_with_tail(d, 500, TailMode::local_clt);
      const auto blk = return_series_with_tail(d, 500, TailMode::block_bounds);
      CHECK(blk.tail_estimate >= clt.tail_estimate);
      CHECK(blk.partial_sum == clt.partial_sum);
    }
  }

  TEST_CASE("scaled excess return mass decreases with dimension") {
    double prev = INFINITY;
    for (int d = 3; d <= 20; ++d) {
      const auto g = green_function(d, 3000);
      const double excess = d * (g.value - 1.0 - 1.0 / (2 * d));
      CHECK(excess < prev);
      prev = excess;
    }
  }

  TEST_CASE("hitting table is symmetric and harmonic off the origin") {
    const int d = 3;
    const auto t = hitting_table(d, 4, 3000);
    const double tol = t.tolerance();
    const std::array<int, 3> o{0, 0, 0}, e1{1, 0, 0};
    CHECK(t.at(o) == 1.0);
    CHECK(std::fabs(t.at(e1) - hitting_prob_e1(d).value) < tol + 1e-6);
    CHECK(std::fabs(t.green_at(e1) - (t.green_origin() - 1.0)) < 2 * tol * t.green_origin() + 1e-6);
    const std::array<int, 3> a{1, -2, 3}, b{-3, 2, 1}, c{2, 1, -3};
    CHECK(t.at(a) == t.at(b));
    CHECK(t.at(a) == t.at(c));
    for (int x = -3; x <= 3; ++x)
      for (int y = -3; y <= 3; ++y)
        for (int z = -3; z <= 3; ++z) {
          if (x == 0 && y == 0 && z == 0) continue;
          std::array<int, 3> p{x, y, z};
          double avg = 0.0;
          for (int k = 0; k < 3; ++k)
            for (int s : {-1, 1}) {
              auto q = p;
              q[k] += s;
              avg += t.at(q);
            }
          avg /= 6.0;
          CHECK(std::fabs(avg - t.at(p)) < 2.0 * tol);
          CHECK(t.at(p) > 0.0);
          CHECK(t.at(p) < 1.0);
        }
    CHECK(t.distinct_classes() == 35);  // sorted |x| triples with entries in 0..4
  }

  TEST_CASE("tail-bound ingredients") {
    CHECK(L_term(1, 5) == doctest::Approx(1.0 / 10.0));
    CHECK(L_term(2, 5) == doctest::Approx(3.0 / 100.0));
    CHECK(M_term(0) == doctest::Approx(1.0));
    CHECK(M_term(2) == doctest::Approx(9.0 / (2.0 * std::exp(2.0))));
    // beta(n) = n! e^n / (n^n sqrt(2 pi n)) -> 1 from above
    const double b5 = 120.0 * std::exp(5.0) / (std::pow(5.0, 5) * std::sqrt(2 * M_PI * 5));
    CHECK(stirling_beta(5) == doctest::Approx(b5));
    CHECK(stirling_beta(100) > 1.0);
    CHECK(stirling_beta(100) < stirling_beta(10));

    const auto r = tail_bound_certificates(24);
    CHECK(r.exact);
    CHECK(r.L_decreasing_before_d);
    CHECK(r.L_increasing_from_d);
    CHECK(r.L_halving_to_half_d);
    CHECK(r.M_decreasing_from_2);
    CHECK(r.H1 <= r.H1_L_sum);
    CHECK(r.H1 < r.H1_bound);
    CHECK(r.H2 < r.H2_bound);
  }

  TEST_CASE("Monte Carlo oracle against exact short horizons") {
    const auto one = mc_return_oracle(4, 40000, 1, 3);
    CHECK(std::fabs(one.value - 1.0 / 8.0) < 4.0 * one.std_error);
    CHECK(mc_return_oracle(3, 100, 0, 3).hits == 0);

    // horizons long enough that the distance jump is exercised
    for (int d : {1, 2}) {
      const int horizon = 24;
      const double exact = hit_within(d, horizon);
      const auto mc = mc_return_oracle(d, 100000, horizon, 17);
      CHECK(std::fabs(mc.value - exact) < 4.0 * mc.std_error);
    }
    const auto a = mc_return_oracle(3, 2000, 500, 5);
    const auto b = mc_return_oracle(3, 2000, 500, 5);
    CHECK(a.hits == b.hits);
  }
}
