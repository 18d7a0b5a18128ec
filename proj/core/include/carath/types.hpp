#pragma once

#include <complex>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace carath {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Distinguishes L(B,B*)-valued objects from L(B*,B)-valued ones.
/// In the finite coordinate model the underlying matrix is the same;
/// the tag keeps the duality bookkeeping honest.
enum class DualityTag { BToDual, DualToB };

inline DualityTag flipped(DualityTag t) {
  return t == DualityTag::BToDual ? DualityTag::DualToB : DualityTag::BToDual;
}

inline const char* to_string(DualityTag t) {
  return t == DualityTag::BToDual ? "B_to_Bstar" : "Bstar_to_B";
}

inline double frobenius_norm(const Matrix& a) { return a.norm(); }

/// Largest singular value.
double spectral_norm(const Matrix& a);

inline Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }
inline Matrix skew_part(const Matrix& a) { return 0.5 * (a - a.adjoint()); }

inline void require_square(const Matrix& a, const char* who) {
  if (a.rows() != a.cols()) throw std::invalid_argument(std::string(who) + ": matrix must be square");
}

inline void require_finite(const Matrix& a, const char* who) {
  if (!a.allFinite()) throw std::invalid_argument(std::string(who) + ": non-finite matrix entry");
}

/// Seeded generator for all randomized suites.  One instance per run,
/// surfaced as --seed in the CLI.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen_);
  }

  Complex complex_normal() { return Complex(normal(), normal()); }

  /// Uniform point in the disk |z| < rmax.
  Complex disk_point(double rmax) {
    double r = rmax * std::sqrt(uniform(0.0, 1.0));
    double th = uniform(0.0, 2.0 * M_PI);
    return std::polar(r, th);
  }

  Matrix matrix(Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = complex_normal();
    return m;
  }

  /// G^H G for a square Gaussian G; PSD by construction.
  Matrix psd(Eigen::Index n) {
    Matrix g = matrix(n, n);
    return g.adjoint() * g;
  }

  Matrix hermitian(Eigen::Index n) {
    Matrix g = matrix(n, n);
    return 0.5 * (g + g.adjoint());
  }

  Vector vector(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal();
    return v;
  }

  Vector unit_vector(Eigen::Index n) {
    Vector v = vector(n);
    double nv = v.norm();
    if (nv == 0.0) { v(0) = 1.0; nv = 1.0; }
    return v / nv;
  }

  /// Haar-ish unitary via QR of a Gaussian matrix.
  Matrix unitary(Eigen::Index n) {
    Matrix g = matrix(n, n);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
      Complex d = r(i, i);
      q.col(i) *= (std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0));
    }
    return q;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace carath
