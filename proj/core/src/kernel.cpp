#include "carath/kernel.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>

namespace carath {

namespace {

Matrix eval_polynomial(const std::vector<Matrix>& coeffs, Complex z) {
  Matrix acc = Matrix::Zero(coeffs.front().rows(), coeffs.front().cols());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

}  // namespace

FunctionSpec rational_function(std::vector<Matrix> numerator, std::vector<Complex> denominator,
                               DualityTag tag) {
  if (numerator.empty() || denominator.empty())
    throw std::invalid_argument("rational_function: empty coefficient list");
  const Eigen::Index n = numerator.front().rows();
  for (const auto& m : numerator)
    if (m.rows() != n || m.cols() != n)
      throw std::invalid_argument("rational_function: coefficient shape mismatch");
  FunctionSpec f;
  f.dim = n;
  f.tag = tag;
  f.analytic = true;
  f.eval = [num = std::move(numerator), den = std::move(denominator), n](Complex z) {
    Complex d = 0.0;
    for (auto it = den.rbegin(); it != den.rend(); ++it) d = d * z + *it;
    if (std::abs(d) < 1e-300)
      throw std::domain_error("rational_function: denominator vanishes at sample point");
    return Matrix(eval_polynomial(num, z) / d);
  };
  return f;
}

FunctionSpec constant_function(const Matrix& value, DualityTag tag) {
  require_square(value, "constant_function");
  FunctionSpec f;
  f.dim = value.rows();
  f.tag = tag;
  f.analytic = true;
  f.eval = [v = value](Complex) { return v; };
  return f;
}

FunctionSpec table_function(std::vector<Complex> points, std::vector<Matrix> values,
                            DualityTag tag) {
  if (points.size() != values.size() || points.empty())
    throw std::invalid_argument("table_function: points/values mismatch");
  const Eigen::Index n = values.front().rows();
  FunctionSpec f;
  f.dim = n;
  f.tag = tag;
  f.analytic = false;
  f.eval = [pts = std::move(points), vals = std::move(values)](Complex z) {
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (std::abs(z - pts[i]) <= 1e-14) return vals[i];
    throw std::domain_error("table_function: point off support");
  };
  return f;
}

bool SampleSet::contains_origin() const {
  return std::any_of(points.begin(), points.end(),
                     [](Complex w) { return std::abs(w) <= 1e-14; });
}

Matrix kernel_eval(const FunctionSpec& phi, Complex z, Complex w) {
  const Complex denom = 2.0 * (1.0 - z * std::conj(w));
  if (std::abs(denom) < 1e-300) throw std::domain_error("kernel_eval: z conj(w) == 1");
  return (phi(z) + phi(w).adjoint()) / denom;
}

Matrix schur_kernel_eval(const FunctionSpec& s, Complex z, Complex w) {
  const Complex denom = 1.0 - z * std::conj(w);
  if (std::abs(denom) < 1e-300) throw std::domain_error("schur_kernel_eval: z conj(w) == 1");
  const Matrix sz = s(z);
  return (Matrix::Identity(sz.rows(), sz.rows()) - sz * s(w).adjoint()) / denom;
}

GramMatrix classify_gram(const Matrix& g) {
  GramMatrix out;
  out.blocks = g;
  const Eigen::Index m = g.rows();
  if (m == 0) {
    out.eigenvalues = RealVector(0);
    return out;
  }
  const double herm_defect = frobenius_norm(g - g.adjoint());
  if (herm_defect > 1e-10 * std::max(1.0, frobenius_norm(g)))
    throw std::domain_error("classify_gram: Gram not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(g));
  out.eigenvalues = es.eigenvalues();
  const double lmax = std::max(std::abs(out.eigenvalues(0)), std::abs(out.eigenvalues(m - 1)));
  const double zero_cut = 1e-10 * (1.0 + lmax);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double l = out.eigenvalues(i);
    if (std::abs(l) <= zero_cut)
      ++out.n_zero;
    else if (l < 0)
      ++out.n_negative;
    else
      ++out.n_positive;
  }
  return out;
}

GramMatrix gram_assemble(const FunctionSpec& phi, const SampleSet& samples) {
  const Eigen::Index n = phi.dim;
  const Eigen::Index N = static_cast<Eigen::Index>(samples.size());
  Matrix g(N * n, N * n);
  // Cache phi at the sample points; k(w_i,w_j) needs only these.
  std::vector<Matrix> vals(N);
  for (Eigen::Index i = 0; i < N; ++i) vals[i] = phi(samples.points[i]);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = 0; j < N; ++j) {
      const Complex denom =
          2.0 * (1.0 - samples.points[i] * std::conj(samples.points[j]));
      g.block(i * n, j * n, n, n) = (vals[i] + vals[j].adjoint()) / denom;
    }
  }
  return classify_gram(g);
}

KernelPositivityReport certify_positive_kernel(const FunctionSpec& phi,
                                               const std::vector<SampleSet>& family) {
  KernelPositivityReport rep;
  rep.worst_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < family.size(); ++k) {
    GramMatrix g = gram_assemble(phi, family[k]);
    if (g.size() == 0) continue;
    rep.max_negative = std::max(rep.max_negative, g.n_negative);
    const double lmin = g.min_eigenvalue();
    const double lmax = std::max(0.0, g.max_eigenvalue());
    if (lmin < rep.worst_eigenvalue) {
      rep.worst_eigenvalue = lmin;
      rep.worst_set = k;
      Eigen::SelfAdjointEigenSolver<Matrix> es(g.blocks);
      rep.witness = es.eigenvectors().col(0);
    }
    if (lmin < -1e-8 * (1.0 + lmax)) rep.pass = false;
  }
  if (!std::isfinite(rep.worst_eigenvalue)) rep.worst_eigenvalue = 0.0;
  return rep;
}

Eigen::Index negative_squares_estimate(const FunctionSpec& phi,
                                       const std::vector<SampleSet>& family) {
  Eigen::Index worst = 0;
  for (const auto& s : family) worst = std::max(worst, gram_assemble(phi, s).n_negative);
  return worst;
}

RkhsSection rkhs_section(const FunctionSpec& phi, const SampleSet& samples) {
  GramMatrix g = gram_assemble(phi, samples);
  const double lmax = std::max(0.0, g.max_eigenvalue());
  if (g.n_negative > 0 && g.min_eigenvalue() < -1e-8 * (1.0 + lmax))
    throw std::domain_error("rkhs_section: Gram indefinite (negative squares present)");

  RkhsSection sec;
  sec.samples = samples;
  sec.dim = phi.dim;
  sec.gram = g.blocks;
  const Eigen::Index m = g.size();
  if (m == 0) {
    sec.W = Matrix(0, 0);
    return sec;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.blocks);
  const double cutoff = 1e-10 * std::max(1.0, lmax);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < m; ++i)
    if (es.eigenvalues()(i) > cutoff) ++r;
  sec.rank = r;
  sec.W = Matrix(m, r);
  double lmin_kept = lmax;
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double l = es.eigenvalues()(i);
    if (l > cutoff) {
      sec.W.col(col++) = es.eigenvectors().col(i) / std::sqrt(l);
      lmin_kept = std::min(lmin_kept, l);
    }
  }
  sec.condition = (r > 0 && lmin_kept > 0) ? lmax / lmin_kept : 1.0;
  return sec;
}

Matrix section_value(const FunctionSpec& phi, const RkhsSection& sec, const Vector& coeff,
                     Complex w) {
  const Eigen::Index n = sec.dim;
  const Eigen::Index N = static_cast<Eigen::Index>(sec.samples.size());
  if (coeff.size() != N * n) throw std::invalid_argument("section_value: coefficient size");
  Matrix out = Matrix::Zero(n, 1);
  for (Eigen::Index j = 0; j < N; ++j)
    out += kernel_eval(phi, w, sec.samples.points[j]) * coeff.segment(j * n, n);
  return out;
}

CayleyValue cayley(const FunctionSpec& phi, Complex z) {
  const Matrix p = phi(z);
  const Matrix ipp = Matrix::Identity(p.rows(), p.rows()) + p;
  Eigen::JacobiSVD<Matrix> svd(ipp, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (smin < 1e-14 * std::max(1.0, svd.singularValues()(0)))
    throw std::domain_error("cayley: I + phi(z) singular");
  CayleyValue out;
  out.condition = svd.singularValues()(0) / smin;
  // (I - phi)(I + phi)^{-1} via solve on the right:  X (I+phi) = I-phi.
  out.s = ipp.transpose()
              .colPivHouseholderQr()
              .solve((Matrix::Identity(p.rows(), p.rows()) - p).transpose())
              .transpose();
  return out;
}

FunctionSpec cayley_transform(const FunctionSpec& phi) {
  FunctionSpec f;
  f.dim = phi.dim;
  f.tag = phi.tag;
  f.analytic = phi.analytic;
  f.eval = [phi](Complex z) { return cayley(phi, z).s; };
  return f;
}

}  // namespace carath
