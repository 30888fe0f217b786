#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "t1cp/walk.hpp"

namespace t1cp {

// E xi_t(x) from a single 1 on an r-regular graph: exp{t(lambda r - 1)}.
double mean_xi_closed_form(double lambda, int r, double t);

// Points of Z^d with |x|_inf <= R, indexed by sum_k (x_k + R) (2R+1)^k.
class Box {
 public:
  Box(int d, int radius);
  int dimension() const { return d_; }
  int radius() const { return radius_; }
  std::size_t size() const { return size_; }
  std::size_t origin() const { return origin_; }
  std::size_t index(std::span<const int> x) const;
  std::vector<int> point(std::size_t i) const;
  // |x|_inf of point i.
  int sup_norm(std::size_t i) const;
  // Index of x + delta along axis, or nullopt if it leaves the box.
  std::optional<std::size_t> shifted(std::size_t i, int axis, int delta) const;

 private:
  int d_;
  int radius_;
  std::size_t size_;
  std::size_t origin_;
  std::vector<std::size_t> stride_;
};

// Second-moment matrix restricted to a box, out-of-box columns dropped.
//   x != 0: Q(x,x) = -4 lambda d, Q(x,y) = 2 lambda for in-box y ~ x.
//   x == 0: Q(0,0) = 1 - 2 lambda d, Q(0,y) = 2 lambda for y ~ 0,
//           Q(0,2e_i) = lambda, Q(0, +-e_i +- e_j) = 2 lambda (i != j).
class TruncatedQ {
 public:
  const Box& box() const { return box_; }
  int dimension() const { return box_.dimension(); }
  double lambda() const { return lambda_; }
  int radius() const { return box_.radius(); }
  std::size_t size() const { return box_.size(); }

  // Shift making Q + shift*I entrywise nonnegative.
  double shift() const { return 4.0 * lambda_ * dimension(); }
  // 1 + 8 lambda d + 4 lambda d^2.
  double norm_bound() const;
  // Largest absolute row sum of the stored matrix.
  double norm_inf() const;

  double entry(std::size_t row, std::size_t col) const;
  double row_sum(std::size_t row) const;
  std::size_t nonzeros() const { return cols_.size(); }

  template <class F>
  void for_each_in_row(std::size_t row, F&& f) const {
    for (auto k = offsets_[row]; k < offsets_[row + 1]; ++k) f(cols_[k], vals_[k]);
  }

  void apply(std::span<const double> v, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> v) const;

 private:
  friend TruncatedQ build_q(int d, double lambda, int radius);
  TruncatedQ(Box box, double lambda) : box_(std::move(box)), lambda_(lambda) {}

  Box box_;
  double lambda_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> vals_;
};

// Box sizes above this are refused.
inline constexpr std::size_t kMaxBoxStates = 2'000'000;

TruncatedQ build_q(int d, double lambda, int radius);

// exp(tQ) v by a Taylor series on the nonnegative shift Q + 4 lambda d I,
// split into steps of norm about 2; terms are added until the remainder
// bound drops below 1e-17 of the running sum.
std::vector<double> expm_apply(const TruncatedQ& q, std::span<const double> v, double t);

struct SecondMomentRow {
  double t = 0.0;
  double g_origin = 0.0;  // [exp(tQ) 1](0)
  double leakage = 0.0;   // [exp(tQ) 1_{outer two shells}](0)
};

// G_t(0) from G_0 = 1 on the box for each requested time (any order).
std::vector<SecondMomentRow> integrate_second_moment(const TruncatedQ& q, std::span<const double> times);
std::vector<SecondMomentRow> integrate_second_moment(int d, double lambda, int radius, std::span<const double> times);

// Raised when 1 - (d+1) F_d(e_1) <= 0 or lambda is not above the threshold.
class HypothesisError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct HarmonicH {
  int d = 0;
  double lambda = 0.0;
  int radius = 0;
  double f_e1 = 0.0;
  double b = 0.0;               // b_lambda
  std::vector<double> values;   // F(x) + b over the box
  double table_tolerance = 0.0;
};

// 1 - (d+1) F_d(e_1).
double hypothesis_margin(double f_e1, int d);
// 1 / (4 d [1 - (d+1) F]) or nullopt when the margin is not positive.
std::optional<double> lambda_threshold(double f_e1, int d);
// (4 d lambda [1 - (d+1) F] - 1) / (1 + 4 d^2 lambda).
double b_lambda(double f_e1, int d, double lambda);

HarmonicH build_h(int d, double lambda, const HittingTable& table, int radius);

struct HarmonicReport {
  int interior_radius = 0;
  double max_residual = 0.0;      // max |(Qh)(x)| over |x|_inf <= interior_radius
  std::vector<int> worst_point;
  double origin_residual = 0.0;   // (Qh)(0)
  double row0_identity = 0.0;     // (1 + 4 lambda d^2) b + 1 - 4 lambda d [1 - (d+1) F]
  double tolerance = 0.0;         // 10 * table tolerance * (1 + 4 lambda d^2)
  bool within_tolerance = false;
};

HarmonicReport check_harmonic(const TruncatedQ& q, const HarmonicH& h, int interior_radius);

// (1 + b) / b.
double second_moment_bound(const HarmonicH& h);

}  // namespace t1cp
