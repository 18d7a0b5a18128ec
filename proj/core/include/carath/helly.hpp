#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "carath/stieltjes.hpp"

namespace carath {

/// Lazily evaluable sequence F_n of increasing operator functions on a
/// shared interval, together with the uniform bound F_n(t) <= F0.
struct MonotoneSequence {
  std::function<IncreasingOperatorFunction(int)> member;
  PositiveOperator bound;  // F0
  int budget = 16;         // indices 0 .. budget-1 are available
};

std::vector<double> dyadic_grid(double a, double b, int depth);

struct ScalarSelection {
  std::vector<int> indices;
  std::vector<double> limit;      // per grid point
  std::vector<double> residuals;  // per grid point (spread of the kept tail)
  bool converged = true;
};

/// Scalar Helly step: one convergent subsequence across all grid points,
/// found by nested bisection of accumulation values (diagonal process).
ScalarSelection scalar_helly_select(const std::vector<std::function<double(double)>>& g,
                                    const std::vector<double>& grid, double tol,
                                    int min_keep = 2);

struct HellyOptions {
  int grid_depth = 10;                      // dyadic rationals to depth 10
  double stage_tol_scale = 1e-7;            // stage tolerance = scale * ||F0||
  int min_keep = 2;                         // never shrink the subsequence below this
};

struct SelectionResult {
  std::vector<int> subsequence;
  std::vector<double> grid;
  std::vector<Matrix> limit;             // weak limit per grid point
  std::vector<double> residual_log;      // per selection stage
  double max_residual = 0.0;
  bool converged = true;
  double inequality1_margin = 0.0;       // worst slack of |<F_n x,y>| <= ||F0|| |x||y|
  double inequality2_margin = 0.0;       // worst slack of the summed-increment bound
  Eigen::Index dim = 1;

  /// Right-continuous step interpolation between grid points.
  IncreasingOperatorFunction limit_function() const;
};

/// Standard basis plus a seeded batch of random unit vectors; the finite
/// model of the dense countable probe set E.
std::vector<Vector> default_probes(Eigen::Index n, std::uint64_t seed = 0x48454C4C59ull,
                                   int extra = 4);

/// Diagonal selection over (probe pair, grid point) stages.  Throws
/// std::domain_error if the bound hypothesis fails.
SelectionResult helly_select(const MonotoneSequence& seq, const std::vector<Vector>& probes,
                             const HellyOptions& opt = {});

struct LimitPassResult {
  Matrix value;            // integral against the selected limit
  Matrix tail_value;       // integral against the last selected member
  double max_pairing_dev = 0.0;
  bool ok = true;
};

/// integrate(f, limit) against the tail of integrate(f, F_{n_k}), compared
/// in weak pairings over the probe family.
LimitPassResult pass_to_limit(const std::function<Complex(double)>& f,
                              const MonotoneSequence& seq, const SelectionResult& sel,
                              const std::vector<Vector>& probes, double eps);

}  // namespace carath
