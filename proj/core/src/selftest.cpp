#include "carath/selftest.hpp"

#include <cmath>
#include <functional>

#include "carath/helly.hpp"
#include "carath/herglotz.hpp"
#include "carath/kernel.hpp"
#include "carath/operator_core.hpp"
#include "carath/realization.hpp"
#include "carath/stieltjes.hpp"

namespace carath {

namespace {

struct Recorder {
  SelftestResult* res;
  void check(bool ok, const std::string& what) {
    if (ok) {
      ++res->passed;
    } else {
      ++res->failed;
      res->failures.push_back(what);
    }
  }
};

void suite_core(Recorder& rec, Rng& rng) {
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform(0, 8));
    Matrix a = rng.psd(n);
    auto pos = require_positive(a, DualityTag::BToDual);
    auto f = factorize(pos);
    rec.check(frobenius_norm(a - f.T.adjoint() * f.T) <=
                  1e-10 * std::max(1.0, frobenius_norm(a)),
              "factorize residual");
    const double na = spectral_norm(a), nt = spectral_norm(f.T);
    rec.check(std::abs(na - nt * nt) <= 1e-10 * std::max(1.0, na),
              "factorize norm identity");
    Vector x = rng.vector(n), y = rng.vector(n);
    auto cs = cauchy_schwarz_check(pos, x, y);
    rec.check(cs.holds, "cauchy-schwarz");
  }
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform(0, 5));
    Matrix a = rng.psd(n), b = rng.psd(n);
    rec.check(order_leq(require_positive(a, DualityTag::BToDual).base,
                        require_positive(Matrix(a + b), DualityTag::BToDual).base),
              "order a <= a+b");
  }
  // Lemma-style bound: ||sum alpha_j H_j|| <= ||sum |beta_j| H_j|| for |alpha|<=beta.
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 1 + static_cast<int>(rng.uniform(0, 6));
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform(0, 5));
    std::vector<Complex> alpha;
    std::vector<Complex> beta;
    std::vector<PositiveOperator> hs;
    for (int j = 0; j < m; ++j) {
      const double b = rng.uniform(0.0, 2.0);
      beta.push_back(Complex(b, 0.0));
      alpha.push_back(std::polar(rng.uniform(0.0, b), rng.uniform(0.0, 6.28)));
      hs.push_back(require_positive(rng.psd(n), DualityTag::BToDual));
    }
    rec.check(brod_bound_check(alpha, beta, hs).holds, "dominated-sum bound");
  }
}

void suite_stieltjes(Recorder& rec, Rng& rng) {
  // f(t)=t against M(t)=t*I on [0,2pi].
  for (Eigen::Index n : {1, 3}) {
    IncreasingOperatorFunction m;
    m.a = 0.0;
    m.b = 2.0 * M_PI;
    m.dim = n;
    m.no_jumps = true;
    m.eval = [n](double t) { return Matrix(t * Matrix::Identity(n, n)); };
    Matrix val = integrate(std::function<double(double)>([](double t) { return t; }), m, 1e-9);
    rec.check(spectral_norm(val - 2.0 * M_PI * M_PI * Matrix::Identity(n, n)) <= 1e-8,
              "integrate t dt*I");
  }
  // Linearity and constant-f normalization on random absolutely continuous M.
  for (int trial = 0; trial < 8; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform(0, 3));
    Matrix g0 = rng.psd(n), g1 = rng.psd(n);
    IncreasingOperatorFunction m;
    m.a = 0.0;
    m.b = 1.0;
    m.dim = n;
    m.no_jumps = true;
    m.eval = [g0, g1](double t) { return Matrix(t * g0 + t * t * g1); };
    Matrix one = integrate(std::function<double(double)>([](double) { return 1.0; }), m, 1e-9);
    rec.check(spectral_norm(one - (g0 + g1)) <= 1e-7 * (1.0 + spectral_norm(g0 + g1)),
              "integrate 1 dM = M(b)-M(a)");
    auto f1 = std::function<double(double)>([](double t) { return std::cos(3.0 * t); });
    auto f2 = std::function<double(double)>([](double t) { return t * t; });
    auto fs = std::function<double(double)>(
        [](double t) { return std::cos(3.0 * t) + t * t; });
    Matrix lin = integrate(f1, m, 1e-9) + integrate(f2, m, 1e-9) - integrate(fs, m, 1e-9);
    rec.check(spectral_norm(lin) <= 1e-7 * (1.0 + spectral_norm(g0 + g1)), "linearity");
  }
  // Jump handling: unit atom at t0 integrates f to f(t0)*mass.
  for (int trial = 0; trial < 5; ++trial) {
    const double t0 = rng.uniform(0.5, 5.5);
    IncreasingOperatorFunction m;
    m.a = 0.0;
    m.b = 2.0 * M_PI;
    m.dim = 1;
    m.jump_hints = {t0};
    m.eval = [t0](double t) {
      return Matrix(Matrix::Constant(1, 1, t >= t0 ? 1.0 : 0.0));
    };
    Matrix val = integrate(std::function<Complex(double)>(
                               [](double t) { return std::exp(Complex(0, t)); }),
                           m, 1e-9);
    rec.check(std::abs(val(0, 0) - std::exp(Complex(0, t0))) <= 1e-8, "atom integration");
  }
}

void suite_helly(Recorder& rec, Rng& rng) {
  const Eigen::Index n = 2;
  Matrix g = rng.psd(n) + Matrix::Identity(n, n);
  // F_k(t) = (t/2pi + (-1)^k * eps * sin(t)/4pi) * G: two limit points.
  MonotoneSequence seq;
  seq.bound = require_positive(Matrix(1.5 * g), DualityTag::BToDual);
  seq.budget = 24;
  seq.member = [g](int k) {
    IncreasingOperatorFunction m;
    m.a = 0.0;
    m.b = 2.0 * M_PI;
    m.dim = 2;
    m.no_jumps = true;
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    m.eval = [g, sgn](double t) {
      return Matrix((t / (2.0 * M_PI) + sgn * std::sin(t) / (4.0 * M_PI)) * g);
    };
    return m;
  };
  HellyOptions opt;
  opt.grid_depth = 6;
  const auto probes = default_probes(n);
  auto sel = helly_select(seq, probes, opt);
  rec.check(sel.converged, "two-limit-point selection converges");
  rec.check(sel.max_residual <= 1e-7 * spectral_norm(seq.bound.base.mat),
            "stage residual bound");
  bool parity = true;
  for (std::size_t i = 1; i < sel.subsequence.size(); ++i)
    parity = parity && (sel.subsequence[i] % 2 == sel.subsequence[0] % 2);
  rec.check(parity, "selection picks one parity class");
  auto lim = pass_to_limit(
      std::function<Complex(double)>([](double t) { return std::exp(Complex(0, t)); }), seq,
      sel, probes, 1e-6);
  const double sgn = (sel.subsequence[0] % 2 == 0) ? 1.0 : -1.0;
  // Oracle: dF = (1/2pi + sgn*cos(t)/4pi) g dt and int e^{it} cos t dt = pi.
  // The subsequence-tail integral carries the limit value; the step-limit
  // integral only agrees up to O(mesh).
  const Complex oracle = sgn * Complex(0.25, 0.0);
  rec.check(lim.ok, "pass_to_limit pairing deviation");
  rec.check(spectral_norm(lim.tail_value - oracle * g) <= 2e-6 * (1.0 + spectral_norm(g)),
            "pass_to_limit matches oracle");
}

void suite_extra(Recorder& rec, Rng& rng) {
  // Cayley + kernel positivity for random isometric realizations.
  for (int trial = 0; trial < 6; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform(0, 2));
    const Eigen::Index d = n + static_cast<Eigen::Index>(rng.uniform(0, 5));
    Matrix v = rng.unitary(d);
    Matrix c = rng.matrix(d, n);
    Eigen::HouseholderQR<Matrix> qr(c);
    c = qr.householderQ() * Matrix::Identity(d, n);
    Matrix sk0 = rng.matrix(n, n);
    Matrix sk = 0.5 * (sk0 - sk0.adjoint());
    auto r = make_realization(v, c, sk, DualityTag::BToDual);
    FunctionSpec phi = as_function(r);
    SampleSet s;
    for (int i = 0; i < 5; ++i) s.points.push_back(rng.disk_point(0.8));
    auto rep = certify_positive_kernel(phi, {s});
    rec.check(rep.pass, "realization kernel PSD");
    for (int i = 0; i < 8; ++i) {
      Complex z = rng.disk_point(0.9);
      auto cv = cayley(phi, z);
      rec.check(spectral_norm(cv.s) <= 1.0 + 1e-10, "cayley contractive");
    }
  }
  // Measure eval at 0 recovers total mass + D; moments self-consistent.
  for (int trial = 0; trial < 3; ++trial) {
    HerglotzMeasure mu;
    mu.dim = 2;
    mu.D = Matrix::Zero(2, 2);
    mu.atoms.push_back({rng.uniform(0.5, 5.5), rng.psd(2)});
    for (int c = 0; c < 8; ++c)
      mu.density.push_back({2.0 * M_PI * c / 8, 2.0 * M_PI * (c + 1) / 8,
                            Matrix(rng.psd(2) + 0.1 * Matrix::Identity(2, 2))});
    rec.check(spectral_norm(herglotz_eval(mu, Complex(0, 0)) - mu.total_mass()) <=
                  1e-9 * (1.0 + spectral_norm(mu.total_mass())),
              "phi(0) = total mass + D");
    auto mom = trig_moments(mu, 0, 1e-8);
    rec.check(spectral_norm(mom[0] - mu.total_mass()) <=
                  1e-6 * (1.0 + spectral_norm(mu.total_mass())),
              "moment 0 = total mass");
    auto kic = kernel_integral_check(mu, {Complex(0, 0), Complex(0.3, 0.2)}, 1e-7);
    rec.check(kic.pass, "kernel integral identity");
  }
}

}  // namespace

SelftestResult run_selftest(const std::string& suite, std::uint64_t seed) {
  SelftestResult res;
  res.suite = suite;
  Recorder rec{&res};
  Rng rng(seed);
  if (suite == "core") {
    suite_core(rec, rng);
  } else if (suite == "stieltjes") {
    suite_stieltjes(rec, rng);
  } else if (suite == "helly") {
    suite_helly(rec, rng);
  } else if (suite == "full") {
    suite_core(rec, rng);
    suite_stieltjes(rec, rng);
    suite_helly(rec, rng);
    suite_extra(rec, rng);
  } else {
    throw std::invalid_argument("unknown selftest suite: " + suite);
  }
  return res;
}

}  // namespace carath
