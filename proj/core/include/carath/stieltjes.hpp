#pragma once

#include <functional>
#include <vector>

#include "carath/operator_core.hpp"

namespace carath {

/// Increasing PSD-operator-valued distribution function on [a,b].
/// jump_hints, when known, mark atom locations; integrate aligns
/// partition tags with them.  If no_jumps is set the detection pass
/// is skipped.
struct IncreasingOperatorFunction {
  double a = 0.0;
  double b = 1.0;
  Eigen::Index dim = 1;
  std::function<Matrix(double)> eval;
  std::vector<double> jump_hints;
  bool no_jumps = false;

  Matrix operator()(double t) const { return eval(t); }
};

struct MonotonicityReport {
  bool ok = true;
  double worst_violation = 0.0;  // most negative increment eigenvalue
  double t_lo = 0.0, t_hi = 0.0;
};

/// Checks M(t) PSD and M(t2)-M(t1) PSD on a uniform grid (default 257 points).
MonotonicityReport certify_increasing(const IncreasingOperatorFunction& m, int grid_points = 257);

/// Tagged partition a = t_0 <= xi_1 <= t_1 <= ... <= t_m = b.
struct Partition {
  std::vector<double> knots;
  std::vector<double> tags;

  static Partition uniform(double a, double b, int m);  // midpoint tags
  double mesh() const;
  void validate(double a, double b) const;
};

struct RiemannStieltjesSum {
  Matrix value;
  double mesh = 0.0;
};

/// Exact finite sum  sum_j f(xi_j) (M(t_j) - M(t_{j-1})); every increment
/// is PSD-certified (tolerance relative to the total variation).
RiemannStieltjesSum rs_sum(const std::function<Complex(double)>& f,
                           const IncreasingOperatorFunction& m, const Partition& p);

struct BrodBoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// || sum alpha_j H_j || <= || sum |beta_j| H_j ||  when |alpha_j| <= |beta_j|.
BrodBoundCheck brod_bound_check(const std::vector<Complex>& alpha,
                                const std::vector<Complex>& beta,
                                const std::vector<PositiveOperator>& h);

/// Locate jump points of M: intervals whose mass does not decay under
/// bisection are narrowed to width ~1e-10 and reported.
std::vector<double> detect_jumps(const IncreasingOperatorFunction& m, double mass_floor = 0.0);

/// Riemann-Stieltjes integral with refinement control: mesh chosen from a
/// sampled modulus of continuity of f (capped), jump-aligned tags, then
/// uniform halving until successive sums differ by <= eps/2.
Matrix integrate(const std::function<Complex(double)>& f, const IncreasingOperatorFunction& m,
                 double eps);

inline Matrix integrate(const std::function<double(double)>& f,
                        const IncreasingOperatorFunction& m, double eps) {
  return integrate(std::function<Complex(double)>([f](double t) { return Complex(f(t), 0.0); }),
                   m, eps);
}

}  // namespace carath
