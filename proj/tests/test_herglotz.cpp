#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "carath/herglotz.hpp"

using namespace carath;

namespace {

HerglotzMeasure unit_atom(double t = 0.0) {
  HerglotzMeasure mu;
  mu.dim = 1;
  mu.D = Matrix::Zero(1, 1);
  mu.atoms.push_back({t, Matrix::Identity(1, 1)});
  return mu;
}

HerglotzMeasure uniform_density(Eigen::Index n, int cells = 16) {
  HerglotzMeasure mu;
  mu.dim = n;
  mu.D = Matrix::Zero(n, n);
  for (int c = 0; c < cells; ++c)
    mu.density.push_back({2.0 * M_PI * c / cells, 2.0 * M_PI * (c + 1) / cells,
                          Matrix(Matrix::Identity(n, n) / (2.0 * M_PI))});
  return mu;
}

}  // namespace

TEST_CASE("eval") {
  CHECK(std::abs(herglotz_eval(unit_atom(), {0.5, 0})(0, 0) - Complex(3, 0)) < 1e-14);

  auto uni = uniform_density(2);
  Rng rng(97);
  for (int i = 0; i < 10; ++i) {
    const Complex z = rng.disk_point(0.95);
    CHECK(frobenius_norm(herglotz_eval(uni, z) - Matrix::Identity(2, 2)) < 1e-12);
  }

  HerglotzMeasure dz;
  dz.dim = 1;
  dz.D = Matrix::Constant(1, 1, Complex(0, 1));
  CHECK(herglotz_eval(dz, {0.3, 0.3})(0, 0) == Complex(0, 1));

  CHECK_THROWS_AS(herglotz_eval(unit_atom(), {1.0, 0.0}), std::domain_error);

  // Re phi PSD on the disk; phi(0) - D = total mass.
  HerglotzMeasure mix = uniform_density(2);
  mix.atoms.push_back({2.0, rng.psd(2)});
  Matrix g = rng.matrix(2, 2);
  mix.D = 0.5 * (g - g.adjoint());
  for (int i = 0; i < 20; ++i) {
    const Complex z = rng.disk_point(0.99);
    CHECK(is_positive(make_hermitian(hermitian_part(herglotz_eval(mix, z)))).positive());
  }
  CHECK(spectral_norm(herglotz_eval(mix, {0, 0}) - mix.D - mix.total_mass()) <=
        1e-10 * (1.0 + spectral_norm(mix.total_mass())));
}

TEST_CASE("validate") {
  CHECK_NOTHROW(validate(unit_atom()));
  HerglotzMeasure bad = unit_atom();
  bad.atoms[0].mass = -Matrix::Identity(1, 1);
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  HerglotzMeasure badd = unit_atom();
  badd.D = Matrix::Identity(1, 1);  // not skew
  CHECK_THROWS_AS(validate(badd), std::invalid_argument);
}

TEST_CASE("distribution_function") {
  auto mu = uniform_density(1);
  mu.atoms.push_back({M_PI, Matrix(2.0 * Matrix::Identity(1, 1))});
  auto m = distribution_function(mu);
  CHECK(certify_increasing(m).ok);
  CHECK(std::abs(m.eval(2.0 * M_PI)(0, 0).real() - 3.0) < 1e-12);
  // Right-continuity at the atom.
  CHECK(m.eval(M_PI)(0, 0).real() - m.eval(M_PI - 1e-9)(0, 0).real() >
        2.0 - 1e-6);
}

TEST_CASE("trig_moments") {
  auto m1 = trig_moments(unit_atom(), 5);
  for (auto& mk : m1) CHECK(std::abs(mk(0, 0) - Complex(1, 0)) < 1e-8);

  auto m2 = trig_moments(uniform_density(2), 4);
  CHECK(spectral_norm(m2[0] - Matrix::Identity(2, 2)) < 1e-7);
  for (int k = 1; k <= 4; ++k) CHECK(spectral_norm(m2[k]) < 1e-7);

  auto m3 = trig_moments(unit_atom(M_PI), 5);
  for (int k = 0; k <= 5; ++k)
    CHECK(std::abs(m3[k](0, 0) - Complex(k % 2 ? -1.0 : 1.0, 0)) < 1e-8);
}

TEST_CASE("kernel_integral_check") {
  CHECK(kernel_integral_check(unit_atom(), {Complex(0, 0)}).pass);
  CHECK(kernel_integral_check(uniform_density(1), {Complex(0.5, 0), Complex(0.3, 0)}).pass);

  Rng rng(101);
  HerglotzMeasure two;
  two.dim = 2;
  two.D = Matrix::Zero(2, 2);
  two.atoms.push_back({1.3, rng.psd(2)});
  two.atoms.push_back({4.4, rng.psd(2)});
  std::vector<Complex> pts;
  for (int i = 0; i < 5; ++i) pts.push_back(rng.disk_point(0.6));
  auto rep = kernel_integral_check(two, pts);
  CHECK(rep.pass);
  CHECK(rep.worst_dev <= 1e-7);
}

TEST_CASE("recover constant identity") {
  RecoveryOptions opt;
  opt.n_max = 9;  // cheap: the data is radius-independent
  auto rr = recover(constant_function(Matrix::Identity(1, 1)), opt);
  CHECK(rr.measure.atoms.empty());
  auto m = distribution_function(rr.measure);
  for (double t : {0.7, M_PI, 5.0, 2.0 * M_PI})
    CHECK(std::abs(m.eval(t)(0, 0).real() - t / (2.0 * M_PI)) < 1e-4);
}

TEST_CASE("recover atom and constants") {
  std::vector<Matrix> num = {Matrix::Identity(1, 1), Matrix::Identity(1, 1)};
  std::vector<Complex> den = {Complex(1, 0), Complex(-1, 0)};
  auto rr = recover(rational_function(num, den), {});
  REQUIRE(rr.measure.atoms.size() == 1);
  double t = rr.measure.atoms[0].t;
  if (t > M_PI) t -= 2.0 * M_PI;
  CHECK(std::abs(t) < 1e-4);
  CHECK(std::abs(rr.measure.atoms[0].mass(0, 0).real() - 1.0) < 1e-3);

  auto ri = recover(constant_function(Matrix(Complex(0, 1) * Matrix::Identity(1, 1))), {});
  CHECK(ri.measure.atoms.empty());
  CHECK(spectral_norm(ri.measure.total_mass()) < 1e-9);
  CHECK(std::abs(ri.measure.D(0, 0) - Complex(0, 1)) < 1e-12);

  CHECK_THROWS_AS(recover(constant_function(Matrix(-Matrix::Identity(1, 1))), {}),
                  std::domain_error);
}

TEST_CASE("round trip moments") {
  Rng rng(103);
  HerglotzMeasure mu;
  mu.dim = 2;
  Matrix g = rng.matrix(2, 2);
  mu.D = 0.5 * (g - g.adjoint());
  mu.atoms.push_back({1.1, Matrix(0.4 * rng.psd(2))});
  mu.atoms.push_back({3.8, Matrix(0.4 * rng.psd(2))});
  for (int c = 0; c < 64; ++c) {
    const double um = 2.0 * M_PI * (c + 0.5) / 64;
    Matrix m = (0.05 * (2.0 + std::cos(um) + 0.4 * std::sin(3.0 * um))) *
               Matrix::Identity(2, 2);
    mu.density.push_back({2.0 * M_PI * c / 64, 2.0 * M_PI * (c + 1) / 64, m});
  }
  validate(mu);
  auto rr = recover(as_function(mu), {});
  auto ref = trig_moments(mu, 8), got = trig_moments(rr.measure, 8);
  for (int k = 0; k <= 8; ++k) CHECK(spectral_norm(ref[k] - got[k]) <= 1e-3);
  CHECK(rr.validation_error <= 1e-4);
}
