#pragma once

#include <functional>
#include <vector>

#include "carath/operator_core.hpp"

namespace carath {

/// Evaluable matrix-valued function on (a subset of) the unit disk.
/// Analytic sources (rational, realization, measure) are evaluable
/// everywhere in |z| < 1; the table variant is supported only on its
/// listed points and is flagged non-analytic.
struct FunctionSpec {
  Eigen::Index dim = 1;
  DualityTag tag = DualityTag::BToDual;
  bool analytic = true;
  std::function<Matrix(Complex)> eval;

  Matrix operator()(Complex z) const { return eval(z); }
};

/// phi(z) = (sum_k N_k z^k) / (sum_k d_k z^k), scalar denominator.
FunctionSpec rational_function(std::vector<Matrix> numerator, std::vector<Complex> denominator,
                               DualityTag tag = DualityTag::BToDual);

FunctionSpec constant_function(const Matrix& value, DualityTag tag = DualityTag::BToDual);

/// Point-supported table, for non-analytic pathologies.  Throws off support.
FunctionSpec table_function(std::vector<Complex> points, std::vector<Matrix> values,
                            DualityTag tag = DualityTag::BToDual);

/// Points w_i in the unit disk, optional direction vectors.
struct SampleSet {
  std::vector<Complex> points;
  std::vector<Vector> vectors;  // empty or one per point

  std::size_t size() const { return points.size(); }
  bool contains_origin() const;
};

/// k_phi(z,w) = (phi(z) + phi(w)^H) / (2 (1 - z conj(w))).
Matrix kernel_eval(const FunctionSpec& phi, Complex z, Complex w);

/// Schur companion kernel (I - s(z) s(w)^H) / (1 - z conj(w)).
Matrix schur_kernel_eval(const FunctionSpec& s, Complex z, Complex w);

/// Block matrix of kernel pairings with eigenvalue signature.  Block (i,j)
/// is k(w_i,w_j), so the quadratic form sum_ij c_i^H k(w_i,w_j) c_j is the
/// one whose nonnegativity defines kernel positivity.
struct GramMatrix {
  Matrix blocks;          // (N*n) x (N*n)
  RealVector eigenvalues; // ascending
  Eigen::Index n_negative = 0;
  Eigen::Index n_zero = 0;
  Eigen::Index n_positive = 0;

  Eigen::Index size() const { return blocks.rows(); }
  double min_eigenvalue() const { return eigenvalues.size() ? eigenvalues(0) : 0.0; }
  double max_eigenvalue() const {
    return eigenvalues.size() ? eigenvalues(eigenvalues.size() - 1) : 0.0;
  }
};

GramMatrix gram_assemble(const FunctionSpec& phi, const SampleSet& samples);

/// Signature classification of an already-Hermitian matrix;
/// zero cutoff |lambda| <= 1e-10 (1 + lambda_max).
GramMatrix classify_gram(const Matrix& g);

struct KernelPositivityReport {
  bool pass = true;
  double worst_eigenvalue = 0.0;
  std::size_t worst_set = 0;  // index into the sample family
  Vector witness;             // eigenvector for the worst eigenvalue
  Eigen::Index max_negative = 0;
};

KernelPositivityReport certify_positive_kernel(const FunctionSpec& phi,
                                               const std::vector<SampleSet>& family);

/// Lower-bound estimate of the number of negative squares: maximum
/// n_negative over the family's Gram matrices.
Eigen::Index negative_squares_estimate(const FunctionSpec& phi,
                                       const std::vector<SampleSet>& family);

/// Orthonormal coordinates for the finite section span{k(.,w_i) e_a}.
/// Members are represented by coefficient vectors c in C^{N n}
/// (f = sum_i k(.,w_i) c_i); coords(c) = W^H G c gives coordinates in
/// which the L(phi) inner product is the standard one.
struct RkhsSection {
  SampleSet samples;
  Eigen::Index dim = 1;   // n
  Eigen::Index rank = 0;  // r
  Matrix gram;            // (N n) x (N n)
  Matrix W;               // (N n) x r, W^H G W = I_r
  double condition = 1.0; // lambda_max / lambda_min over the kept spectrum

  Vector coords(const Vector& coeff) const { return W.adjoint() * gram * coeff; }
};

/// Throws if the Gram is indefinite beyond tolerance.
RkhsSection rkhs_section(const FunctionSpec& phi, const SampleSet& samples);

/// Evaluate a section member (given by coefficients) at a point.
Matrix section_value(const FunctionSpec& phi, const RkhsSection& sec, const Vector& coeff,
                     Complex w);

struct CayleyValue {
  Matrix s;
  double condition = 0.0;  // of I + phi(z)
};

/// s(z) = (I - phi(z)) (I + phi(z))^{-1}.
CayleyValue cayley(const FunctionSpec& phi, Complex z);

/// Cayley transform as a function.
FunctionSpec cayley_transform(const FunctionSpec& phi);

}  // namespace carath
