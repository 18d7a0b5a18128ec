#include "carath/operator_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace carath {

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

HermitianOperator make_hermitian(const Matrix& a, DualityTag tag) {
  require_square(a, "make_hermitian");
  require_finite(a, "make_hermitian");
  const double defect = frobenius_norm(a - a.adjoint());
  if (defect > herm_tol(a))
    throw std::invalid_argument("make_hermitian: hermiticity defect " + std::to_string(defect) +
                                " above tolerance");
  return HermitianOperator{hermitian_part(a), tag, defect};
}

PositivityResult is_positive(const HermitianOperator& a) {
  PositivityResult res;
  if (a.dim() == 0) {
    res.op = PositiveOperator{a, 0.0};
    res.min_eigenvalue = 0.0;
    return res;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat);
  const double lmin = es.eigenvalues()(0);
  const double lmax_abs = std::max(std::abs(es.eigenvalues()(0)),
                                   std::abs(es.eigenvalues()(a.dim() - 1)));
  res.min_eigenvalue = lmin;
  if (lmin >= -psd_tol(lmax_abs)) {
    res.op = PositiveOperator{a, lmin};
  } else {
    res.witness = es.eigenvectors().col(0);
  }
  return res;
}

PositiveOperator require_positive(const HermitianOperator& a) {
  PositivityResult r = is_positive(a);
  if (!r.positive())
    throw std::domain_error("require_positive: min eigenvalue " +
                            std::to_string(r.min_eigenvalue) + " below tolerance");
  return *r.op;
}

PositiveOperator require_positive(const Matrix& a, DualityTag tag) {
  return require_positive(make_hermitian(a, tag));
}

Complex pairing(const Matrix& a, const Vector& b, const Vector& c) {
  if (a.cols() != b.size() || a.rows() != c.size())
    throw std::invalid_argument("pairing: dimension mismatch");
  return (c.adjoint() * a * b)(0, 0);
}

Complex pairing(const HermitianOperator& a, const Vector& b, const Vector& c) {
  return pairing(a.mat, b, c);
}

FactorizationResult factorize(const PositiveOperator& a) {
  FactorizationResult out;
  const Eigen::Index n = a.dim();
  if (n == 0) {
    out.T = Matrix(0, 0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat());
  const double lmax = es.eigenvalues()(n - 1);
  const double cutoff = 1e-12 * std::max(lmax, 0.0);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (es.eigenvalues()(i) > cutoff) ++r;

  out.T = Matrix(r, n);
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double l = es.eigenvalues()(i);
    if (l > cutoff) out.T.row(row++) = std::sqrt(l) * es.eigenvectors().col(i).adjoint();
  }
  out.rank = r;
  out.residual = frobenius_norm(a.mat() - out.T.adjoint() * out.T);
  if (out.residual > fact_tol(a.mat()))
    throw std::domain_error("factorize: residual above tolerance (input not PSD enough)");
  return out;
}

CauchySchwarzCheck cauchy_schwarz_check(const PositiveOperator& a, const Vector& b, const Vector& c) {
  CauchySchwarzCheck chk;
  chk.lhs = std::abs(pairing(a.base, b, c));
  const double qb = std::max(0.0, pairing(a.base, b, b).real());
  const double qc = std::max(0.0, pairing(a.base, c, c).real());
  chk.rhs = std::sqrt(qb) * std::sqrt(qc);
  chk.holds = chk.lhs <= chk.rhs + 1e-12 * (1.0 + chk.rhs);
  return chk;
}

bool order_leq(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("order_leq: shape mismatch");
  if (a.tag != b.tag) throw std::invalid_argument("order_leq: duality tag mismatch");
  HermitianOperator diff{b.mat - a.mat, a.tag, 0.0};
  return is_positive(diff).positive();
}

std::pair<Matrix, DualityTag> dual_flip(const Matrix& a, DualityTag tag) {
  require_square(a, "dual_flip");
  return {a, flipped(tag)};
}

}  // namespace carath
