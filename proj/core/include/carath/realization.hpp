#pragma once

#include "carath/kernel.hpp"

namespace carath {

/// Isometric colligation (D, C, V):
///   phi(z) = -D + C^H (I + z V^H)(I - z V^H)^{-1} C,
/// with V an isometry on the state space, C mapping B into the state
/// space and D skew-Hermitian (D = (phi(0)^H - phi(0))/2).
struct Realization {
  Eigen::Index state_dim = 0;
  Eigen::Index dim = 1;  // n
  Matrix V;              // d x d
  Matrix C;              // d x n
  Matrix D;              // n x n, skew-Hermitian
  DualityTag tag = DualityTag::BToDual;
  double isometry_defect = 0.0;  // ||V^H V - I||_F
  double skew_defect = 0.0;      // ||D + D^H||_F
};

/// Validates shapes and records defects; throws if beyond the contract
/// tolerances (isometry 1e-8, skew 1e-10).
Realization make_realization(Matrix V, Matrix C, Matrix D, DualityTag tag = DualityTag::BToDual);

Matrix evaluate(const Realization& r, Complex z);

FunctionSpec as_function(const Realization& r);

struct SynthesisResult {
  Realization realization;
  RkhsSection section;
  double relation_defect = 0.0;  // least-squares residual of the relation solve
  double gram_condition = 1.0;
};

struct SynthesisOptions {
  double relation_defect_limit = 1e-6;
};

/// Theorem-style synthesis from function samples: RKHS section of the
/// sampled kernel, the shift relation solved in section coordinates,
/// unitary completion off the domain span.  Samples must include the
/// origin; the Gram must be PSD.
SynthesisResult synthesize(const SampleSet& samples, const std::vector<Matrix>& values,
                           DualityTag tag = DualityTag::BToDual,
                           const SynthesisOptions& opt = {});

/// Convenience: sample an evaluable function and synthesize.
SynthesisResult synthesize(const FunctionSpec& phi, const SampleSet& samples,
                           const SynthesisOptions& opt = {});

/// Deterministic held-out points: input radii rotated by fixed angles.
std::vector<Complex> holdout_points(const SampleSet& samples);

}  // namespace carath
