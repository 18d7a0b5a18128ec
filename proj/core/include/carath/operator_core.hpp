#pragma once

#include <optional>
#include <utility>

#include "carath/types.hpp"

namespace carath {

// Relative tolerance scales used throughout the positive-operator calculus.
inline double herm_tol(const Matrix& a) { return 1e-12 * std::max(1.0, frobenius_norm(a)); }
inline double psd_tol(double spectral) { return 1e-10 * std::max(1.0, spectral); }
inline double fact_tol(const Matrix& a) { return 1e-10 * std::max(1.0, frobenius_norm(a)); }

/// Finite-dimensional stand-in for a self-adjoint element of L(B,B*).
struct HermitianOperator {
  Matrix mat;
  DualityTag tag = DualityTag::BToDual;
  double hermiticity_defect = 0.0;

  Eigen::Index dim() const { return mat.rows(); }
};

/// Symmetrizes when the defect is below tolerance, rejects otherwise.
HermitianOperator make_hermitian(const Matrix& a, DualityTag tag = DualityTag::BToDual);

struct PositiveOperator {
  HermitianOperator base;
  double min_eigenvalue = 0.0;

  const Matrix& mat() const { return base.mat; }
  Eigen::Index dim() const { return base.dim(); }
};

/// Outcome of PSD certification: either a certified operator or a witness
/// vector b with pairing(A,b,b) < 0.
struct PositivityResult {
  std::optional<PositiveOperator> op;
  double min_eigenvalue = 0.0;
  Vector witness;  // set on failure

  bool positive() const { return op.has_value(); }
};

PositivityResult is_positive(const HermitianOperator& a);

/// Certifies or throws std::domain_error.
PositiveOperator require_positive(const HermitianOperator& a);
PositiveOperator require_positive(const Matrix& a, DualityTag tag = DualityTag::BToDual);

/// The duality pairing <Ab,c>_B realized as c^H A b.
Complex pairing(const HermitianOperator& a, const Vector& b, const Vector& c);
Complex pairing(const Matrix& a, const Vector& b, const Vector& c);

/// A = T^H T with T of minimal numerical rank (rows span the finite
/// section of the factorization Hilbert space).
struct FactorizationResult {
  Matrix T;  // r x n
  Eigen::Index rank = 0;
  double residual = 0.0;  // ||A - T^H T||_F
};

FactorizationResult factorize(const PositiveOperator& a);

struct CauchySchwarzCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// |<Ab,c>| <= <Ab,b>^{1/2} <Ac,c>^{1/2} for PSD A.
CauchySchwarzCheck cauchy_schwarz_check(const PositiveOperator& a, const Vector& b, const Vector& c);

/// A <= B iff B - A certifies PSD.  Shapes and tags must match.
bool order_leq(const HermitianOperator& a, const HermitianOperator& b);

/// The finite model of tau: coordinate identity with the opposite tag.
std::pair<Matrix, DualityTag> dual_flip(const Matrix& a, DualityTag tag);

}  // namespace carath
