#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "carath/herglotz.hpp"
#include "carath/kernel.hpp"
#include "carath/realization.hpp"

using namespace carath;

namespace {

Realization random_colligation(Rng& rng, Eigen::Index n, Eigen::Index d) {
  Matrix v = rng.unitary(d);
  Matrix c = rng.matrix(d, n);
  Eigen::HouseholderQR<Matrix> qr(c);
  c = qr.householderQ() * Matrix::Identity(d, n);
  Matrix g = rng.matrix(n, n);
  Matrix sk = 0.5 * (g - g.adjoint());
  return make_realization(v, c, sk, DualityTag::BToDual);
}

Realization scalar_unit() {
  return make_realization(Matrix::Identity(1, 1), Matrix::Identity(1, 1), Matrix::Zero(1, 1),
                          DualityTag::BToDual);
}

}  // namespace

TEST_CASE("make_realization validates") {
  CHECK_THROWS_AS(make_realization(Matrix(2.0 * Matrix::Identity(2, 2)),
                                   Matrix::Identity(2, 2), Matrix::Zero(2, 2),
                                   DualityTag::BToDual),
                  std::invalid_argument);  // not an isometry
  CHECK_THROWS_AS(make_realization(Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                                   Matrix::Identity(2, 2), DualityTag::BToDual),
                  std::invalid_argument);  // D not skew
}

TEST_CASE("evaluate") {
  auto r = scalar_unit();  // phi(z) = (1+z)/(1-z)
  CHECK(std::abs(evaluate(r, {0.5, 0})(0, 0) - Complex(3, 0)) < 1e-14);
  CHECK_THROWS_AS(evaluate(r, {1.0, 0.0}), std::domain_error);

  Rng rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    auto rr = random_colligation(rng, 2, 6);
    // phi(0) = -D + C^H C.
    Matrix at0 = evaluate(rr, {0, 0});
    CHECK(frobenius_norm(at0 - (-rr.D + rr.C.adjoint() * rr.C)) < 1e-12);
    // Re phi PSD on a circle sweep.
    for (int q = 0; q < 16; ++q) {
      Matrix re = hermitian_part(evaluate(rr, std::polar(0.9, 2.0 * M_PI * q / 16)));
      CHECK(is_positive(make_hermitian(re)).positive());
    }
  }
}

TEST_CASE("synthesize scalar herglotz") {
  auto phi = [](Complex z) { return Matrix(Matrix::Constant(1, 1, (1.0 + z) / (1.0 - z))); };
  SampleSet s;
  s.points = {Complex(0, 0), Complex(0.4, 0), Complex(-0.4, 0), Complex(0, 0.2),
              Complex(0, -0.2)};
  std::vector<Matrix> vals;
  for (Complex w : s.points) vals.push_back(phi(w));
  auto syn = synthesize(s, vals, DualityTag::BToDual, {});
  CHECK(syn.realization.state_dim >= 1);
  CHECK(syn.realization.isometry_defect <= 1e-8);
  CHECK(syn.relation_defect <= 1e-6);
  for (Complex z : holdout_points(s)) {
    const Matrix ref = phi(z);
    CHECK(spectral_norm(evaluate(syn.realization, z) - ref) <=
          1e-6 * (1.0 + spectral_norm(ref)));
  }
}

TEST_CASE("synthesize degenerate constant") {
  // phi = c with Re c = 0: zero-rank section, D carries everything.
  const Complex c(0.0, 2.0);
  SampleSet s;
  s.points = {Complex(0, 0), Complex(0.3, 0.1), Complex(-0.2, 0.2)};
  std::vector<Matrix> vals(3, Matrix::Constant(1, 1, c));
  auto syn = synthesize(s, vals, DualityTag::BToDual, {});
  CHECK(frobenius_norm(syn.realization.C) < 1e-8);
  for (Complex z : {Complex(0.5, 0), Complex(-0.1, 0.6)})
    CHECK(std::abs(evaluate(syn.realization, z)(0, 0) - c) < 1e-9);
}

TEST_CASE("synthesize round trip") {
  Rng rng(73);
  for (int trial = 0; trial < 6; ++trial) {
    const Eigen::Index n = 1 + trial % 2, d = 3 + trial;
    auto r0 = random_colligation(rng, n, d);
    FunctionSpec phi = as_function(r0);
    SampleSet s;
    s.points.push_back({0, 0});
    for (int i = 0; i < 9; ++i) s.points.push_back(rng.disk_point(0.6));
    std::vector<Matrix> vals;
    for (Complex w : s.points) vals.push_back(phi(w));
    auto syn = synthesize(s, vals, DualityTag::BToDual, {});
    CHECK(syn.realization.isometry_defect <= 1e-8);
    CHECK(syn.realization.skew_defect <= 1e-10);
    for (Complex z : holdout_points(s)) {
      const Matrix ref = phi(z);
      CHECK(spectral_norm(evaluate(syn.realization, z) - ref) <=
            1e-6 * (1.0 + spectral_norm(ref)));
    }
    // The synthesized function still generates positive kernels.
    SampleSet probe;
    for (int i = 0; i < 5; ++i) probe.points.push_back(rng.disk_point(0.8));
    CHECK(certify_positive_kernel(as_function(syn.realization), {probe}).pass);
  }
}

TEST_CASE("synthesize rejects the counterexample") {
  SampleSet s;
  s.points = {Complex(0, 0), Complex(0.5, 0), Complex(0.25, 0.25)};
  std::vector<Matrix> vals = {Matrix::Identity(1, 1), Matrix::Zero(1, 1), Matrix::Zero(1, 1)};
  CHECK_THROWS_AS(synthesize(s, vals, DualityTag::BToDual, {}), std::domain_error);
}

TEST_CASE("weak continuity at the origin") {
  // ||(k(.,w) - k(.,0)) b||^2 = |w|^2/(1-|w|^2) Re<phi(w)b,b>.
  Rng rng(79);
  auto r = random_colligation(rng, 2, 5);
  FunctionSpec phi = as_function(r);
  for (int trial = 0; trial < 8; ++trial) {
    const Complex w = rng.disk_point(0.7);
    SampleSet s;
    s.points = {Complex(0, 0), w};
    auto sec = rkhs_section(phi, s);
    Vector b = rng.vector(2);
    Vector coeff = Vector::Zero(4);
    coeff.segment(0, 2) = -b;  // -k(.,0) b
    coeff.segment(2, 2) = b;   //  k(.,w) b
    const double lhs = ((coeff.adjoint() * sec.gram * coeff)(0, 0)).real();
    const double rhs = std::norm(w) / (1.0 - std::norm(w)) *
                       (b.adjoint() * hermitian_part(phi(w)) * b)(0, 0).real();
    CHECK(std::abs(lhs - rhs) <= 1e-9 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("resolvent identity in section coordinates") {
  // (I - conj(w) V) x_w b = C b where x_w b = coords of k(.,w) b.
  Rng rng(83);
  auto r0 = random_colligation(rng, 2, 6);
  FunctionSpec phi = as_function(r0);
  SampleSet s;
  s.points.push_back({0, 0});
  for (int i = 0; i < 7; ++i) s.points.push_back(rng.disk_point(0.6));
  std::vector<Matrix> vals;
  for (Complex w : s.points) vals.push_back(phi(w));
  auto syn = synthesize(s, vals, DualityTag::BToDual, {});
  const auto& sec = syn.section;
  const Eigen::Index n = 2, d = syn.realization.state_dim;
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const Complex w = s.points[i];
    for (Eigen::Index a = 0; a < n; ++a) {
      Vector coeff = Vector::Zero(sec.gram.rows());
      coeff(static_cast<Eigen::Index>(i) * n + a) = 1.0;
      Vector xw = sec.coords(coeff);
      Vector lhs = (Matrix::Identity(d, d) - std::conj(w) * syn.realization.V) * xw;
      Vector rhs = syn.realization.C.col(a);
      CHECK((lhs - rhs).norm() <= 1e-8 * (1.0 + rhs.norm()));
    }
  }
}

TEST_CASE("herglotz_from_realization") {
  // (0,1,1): unit atom at t = 0.
  auto rr = herglotz_from_realization(scalar_unit(), {});
  REQUIRE(rr.measure.atoms.size() == 1);
  double t = rr.measure.atoms[0].t;
  if (t > M_PI) t -= 2.0 * M_PI;
  CHECK(std::abs(t) < 1e-4);
  CHECK(std::abs(rr.measure.atoms[0].mass(0, 0).real() - 1.0) < 1e-3);
  CHECK(spectral_norm(rr.measure.total_mass() - Matrix::Identity(1, 1)) < 1e-3);

  // C = 0: zero measure; phi = -D, so the measure constant is -D.
  auto rc0 = make_realization(Matrix::Identity(2, 2), Matrix::Zero(2, 2),
                              Matrix(Complex(0, 1) * Matrix::Identity(2, 2)),
                              DualityTag::BToDual);
  auto rr0 = herglotz_from_realization(rc0, {});
  CHECK(rr0.measure.atoms.empty());
  CHECK(spectral_norm(rr0.measure.total_mass()) < 1e-9);
  CHECK(frobenius_norm(rr0.measure.D + Complex(0, 1) * Matrix::Identity(2, 2)) < 1e-12);

  // Unitary V with distinct eigenvalues: atoms near the eigenphases.
  Rng rng(89);
  Matrix q = rng.unitary(4);
  RealVector phases(4);
  phases << 0.7, 2.1, 3.9, 5.6;
  Matrix v = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) v += std::polar(1.0, phases(i)) * q.col(i) * q.col(i).adjoint();
  Vector c = rng.unit_vector(4);
  auto rspec = make_realization(v, Matrix(c), Matrix::Zero(1, 1), DualityTag::BToDual);
  auto rrv = herglotz_from_realization(rspec, {});
  for (const auto& atom : rrv.measure.atoms) {
    double best = 10.0;
    for (int i = 0; i < 4; ++i) best = std::min(best, std::abs(atom.t - phases(i)));
    CHECK(best < 1e-3);
  }
  CHECK(rrv.measure.atoms.size() >= 1);
}
