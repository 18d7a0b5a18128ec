#pragma once

#include "carath/helly.hpp"
#include "carath/kernel.hpp"
#include "carath/realization.hpp"

namespace carath {

struct HerglotzAtom {
  double t = 0.0;  // in [0, 2pi)
  Matrix mass;     // PSD
};

struct DensityCell {
  double t0 = 0.0, t1 = 0.0;
  Matrix m;  // PSD, piecewise-constant density on [t0, t1)
};

/// Increasing operator-valued distribution on [0,2pi] (atoms plus a
/// piecewise-constant density) together with the skew-Hermitian constant D:
///   phi(z) = D + int (e^{it}+z)/(e^{it}-z) dM(t).
struct HerglotzMeasure {
  Eigen::Index dim = 1;
  std::vector<HerglotzAtom> atoms;
  std::vector<DensityCell> density;
  Matrix D;
  DualityTag tag = DualityTag::BToDual;

  Matrix total_mass() const;  // M(2pi) - M(0)
};

/// Validates PSD masses/cells and skewness of D; throws on violation.
void validate(const HerglotzMeasure& mu);

/// phi(z) = D + sum_k H(t_k,z) mass_k + int H(t,z) m(t) dt, closed-form
/// per density cell (cells are subdivided near z to keep the log branch
/// single-valued).
Matrix herglotz_eval(const HerglotzMeasure& mu, Complex z);

FunctionSpec as_function(const HerglotzMeasure& mu);

/// Distribution function M(t) with jump hints at the atoms.
IncreasingOperatorFunction distribution_function(const HerglotzMeasure& mu);

struct RecoveryOptions {
  int n_min = 3, n_max = 12;        // radii r_n = 1 - 2^{-n}
  int grid_depth = 10;              // dyadic grid for the Helly stage
  int density_cells = 1024;         // resolution of the recovered density
  int moment_order = 48;            // K: boundary moments used for reconstruction
  int density_order = 8;            // J: trig order of the recovered density
  double moment_radius = 0.9;       // circle used for moment extraction
  double helly_stage_tol = 0.1;     // times ||F0||; see note in recover()
  std::uint64_t probe_seed = 0x48454C4C59ull;
  int probe_extra = 4;
};

struct RecoveryResult {
  HerglotzMeasure measure;
  SelectionResult selection;
  double clip_magnitude = 0.0;   // PSD clipping applied to the density
  double validation_error = 0.0; // max relative forward-eval error
};

/// Riesz-Herglotz recovery from radial boundary behaviour: radial stages
/// fed through Helly selection, atoms flagged from the limit increments
/// and refined against deconvolved boundary moments.
RecoveryResult recover(const FunctionSpec& phi, const RecoveryOptions& opt = {});

struct KernelIntegralReport {
  bool pass = true;
  double worst_dev = 0.0;
  Complex worst_z, worst_w;
};

/// Checks k_phi(z,w) = int dM(t) / ((e^{it}-z)(e^{it}-w)^*) on all pairs.
KernelIntegralReport kernel_integral_check(const HerglotzMeasure& mu,
                                           const std::vector<Complex>& points,
                                           double tol = 1e-7);

/// Moments int e^{-ikt} dM(t), k = 0..k_max, via Stieltjes integration.
std::vector<Matrix> trig_moments(const HerglotzMeasure& mu, int k_max, double eps = 1e-6);

/// recover(evaluate(R, .)): bridge between the two representation theorems.
RecoveryResult herglotz_from_realization(const Realization& r, const RecoveryOptions& opt = {});

}  // namespace carath
