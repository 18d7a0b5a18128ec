#include "carath/realization.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

namespace carath {

namespace {

// Columns of an orthonormal basis of the orthogonal complement of range(Q),
// Q assumed to have orthonormal columns.
Matrix orthogonal_complement(const Matrix& q, Eigen::Index full_dim) {
  const Eigen::Index k = q.cols();
  if (k >= full_dim) return Matrix(full_dim, 0);
  Matrix proj = Matrix::Identity(full_dim, full_dim) - q * q.adjoint();
  Eigen::JacobiSVD<Matrix> svd(proj, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(full_dim - k);
}

}  // namespace

Realization make_realization(Matrix V, Matrix C, Matrix D, DualityTag tag) {
  require_square(V, "make_realization(V)");
  require_square(D, "make_realization(D)");
  if (C.rows() != V.rows() || C.cols() != D.rows())
    throw std::invalid_argument("make_realization: shape mismatch between V, C, D");
  Realization r;
  r.state_dim = V.rows();
  r.dim = D.rows();
  r.isometry_defect =
      frobenius_norm(V.adjoint() * V - Matrix::Identity(V.rows(), V.rows()));
  r.skew_defect = frobenius_norm(D + D.adjoint());
  if (r.isometry_defect > 1e-8)
    throw std::invalid_argument("make_realization: isometry defect " +
                                std::to_string(r.isometry_defect) + " above 1e-8");
  if (r.skew_defect > 1e-10)
    throw std::invalid_argument("make_realization: skew defect above 1e-10");
  r.V = std::move(V);
  r.C = std::move(C);
  r.D = std::move(D);
  r.tag = tag;
  return r;
}

Matrix evaluate(const Realization& r, Complex z) {
  if (std::abs(z) >= 1.0)
    throw std::domain_error("evaluate: |z| must be < 1");
  if (r.state_dim == 0) return -r.D;
  const Matrix vh = r.V.adjoint();
  const Matrix lhs = Matrix::Identity(r.state_dim, r.state_dim) - z * vh;
  const Matrix x = lhs.colPivHouseholderQr().solve(r.C);
  return -r.D + r.C.adjoint() * (x + z * vh * x);
}

FunctionSpec as_function(const Realization& r) {
  FunctionSpec f;
  f.dim = r.dim;
  f.tag = r.tag;
  f.analytic = true;
  f.eval = [r](Complex z) { return evaluate(r, z); };
  return f;
}

SynthesisResult synthesize(const SampleSet& samples, const std::vector<Matrix>& values,
                           DualityTag tag, const SynthesisOptions& opt) {
  if (samples.points.size() != values.size() || samples.points.empty())
    throw std::invalid_argument("synthesize: samples/values mismatch");
  if (!samples.contains_origin())
    throw std::invalid_argument("synthesize: sample set must contain the origin "
                                "(C and D are built from k(.,0) and phi(0))");
  const Eigen::Index n = values.front().rows();
  for (const auto& v : values)
    if (v.rows() != n || v.cols() != n)
      throw std::invalid_argument("synthesize: value shape mismatch");

  FunctionSpec phi = table_function(samples.points, values, tag);
  phi.dim = n;

  RkhsSection sec;
  try {
    sec = rkhs_section(phi, samples);
  } catch (const std::domain_error&) {
    throw std::domain_error(
        "synthesize: Gram indefinite; run negative_squares_estimate on the samples");
  }

  const Eigen::Index N = static_cast<Eigen::Index>(samples.size());
  const Eigen::Index r = sec.rank;
  Eigen::Index i0 = 0;
  for (Eigen::Index i = 0; i < N; ++i)
    if (std::abs(samples.points[i]) <= 1e-14) { i0 = i; break; }

  // P maps kernel-section coefficient vectors to orthonormal coordinates.
  const Matrix P = sec.W.adjoint() * sec.gram;  // r x (N n)

  // Relation generators: for each nonzero sample w_i and basis direction a,
  //   domain  conj(w_i) k(., w_i) e_a
  //   range   k(., w_i) e_a - k(., 0) e_a.
  std::vector<Eigen::Index> gen;
  for (Eigen::Index i = 0; i < N; ++i)
    if (i != i0) gen.push_back(i);
  const Eigen::Index m = static_cast<Eigen::Index>(gen.size()) * n;
  Matrix X(r, m), Y(r, m);
  Eigen::Index col = 0;
  for (Eigen::Index gi : gen) {
    for (Eigen::Index a = 0; a < n; ++a, ++col) {
      X.col(col) = std::conj(samples.points[gi]) * P.col(gi * n + a);
      Y.col(col) = P.col(gi * n + a) - P.col(i0 * n + a);
    }
  }

  SynthesisResult out;
  out.section = sec;
  out.gram_condition = sec.condition;

  Matrix v;
  double rel_defect = 0.0;
  if (m == 0 || r == 0) {
    v = Matrix::Identity(r, r);
  } else {
    Eigen::JacobiSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues()(0);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > 1e-10 * std::max(1.0, smax)) ++k;
    const Matrix uk = svd.matrixU().leftCols(k);
    Matrix b(r, k);  // images of the orthonormal domain basis
    for (Eigen::Index i = 0; i < k; ++i)
      b.col(i) = Y * svd.matrixV().col(i) / svd.singularValues()(i);
    rel_defect = frobenius_norm(b * svd.singularValues().head(k).asDiagonal() *
                                    svd.matrixV().leftCols(k).adjoint() -
                                Y) /
                 std::max(1.0, frobenius_norm(Y));
    rel_defect =
        std::max(rel_defect, frobenius_norm(b.adjoint() * b - Matrix::Identity(k, k)));

    // Exactly isometric V: orthonormalize the images, map the orthogonal
    // complement of the domain span onto the complement of the range span.
    Eigen::HouseholderQR<Matrix> qr(b);
    Matrix qb = Matrix(qr.householderQ()).leftCols(k);
    Matrix rb = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < k; ++i)
      if (rb(i, i).real() < 0) qb.col(i) = -qb.col(i);
    const Matrix dom_c = orthogonal_complement(uk, r);
    const Matrix ran_c = orthogonal_complement(qb, r);
    v = qb * uk.adjoint() + ran_c * dom_c.adjoint();
  }
  out.relation_defect = rel_defect;
  if (rel_defect > opt.relation_defect_limit)
    throw std::domain_error("synthesize: relation defect " + std::to_string(rel_defect) +
                            " above limit (samples inconsistent with a Caratheodory function)");

  const Matrix c = P.block(0, i0 * n, r, n);
  const Matrix d = 0.5 * (values[i0].adjoint() - values[i0]);  // (phi(0)^H - phi(0))/2
  out.realization = make_realization(std::move(v), c, d, tag);
  return out;
}

SynthesisResult synthesize(const FunctionSpec& phi, const SampleSet& samples,
                           const SynthesisOptions& opt) {
  std::vector<Matrix> values;
  values.reserve(samples.size());
  for (Complex w : samples.points) values.push_back(phi(w));
  return synthesize(samples, values, phi.tag, opt);
}

std::vector<Complex> holdout_points(const SampleSet& samples) {
  std::vector<Complex> pts;
  const Complex rot = std::polar(1.0, 0.7310987123);
  for (Complex w : samples.points) {
    if (std::abs(w) <= 1e-14) continue;
    pts.push_back(w * rot);
    pts.push_back(w * rot * rot);
  }
  return pts;
}

}  // namespace carath
