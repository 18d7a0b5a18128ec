#include "carath/herglotz.hpp"

#include <algorithm>
#include <memory>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace carath {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double min_eig(const Matrix& h) {
  if (h.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Clip negative eigenvalues to zero; returns the largest clipped magnitude.
double psd_clip(Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h));
  double clipped = 0.0;
  RealVector ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) < 0) {
      clipped = std::max(clipped, -ev(i));
      ev(i) = 0.0;
    }
  h = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  return clipped;
}

// int_{t0}^{t1} (e^{it}+z)/(e^{it}-z) dt, exact per sub-arc; recursion keeps
// the principal log branch valid when z sits close to the arc.
Complex herglotz_cell_integral(double t0, double t1, Complex z, int depth = 0) {
  const double mid = 0.5 * (t0 + t1);
  const double dist = std::abs(std::polar(1.0, mid) - z);
  if (t1 - t0 <= 0.5 * dist || depth >= 48) {
    const Complex e0 = std::polar(1.0, t0), e1 = std::polar(1.0, t1);
    return Complex(-(t1 - t0), 0.0) - 2.0 * Complex(0, 1) * std::log((e1 - z) / (e0 - z));
  }
  return herglotz_cell_integral(t0, mid, z, depth + 1) +
         herglotz_cell_integral(mid, t1, z, depth + 1);
}

Complex herglotz_kernel(double t, Complex z) {
  const Complex e = std::polar(1.0, t);
  return (e + z) / (e - z);
}

}  // namespace

Matrix HerglotzMeasure::total_mass() const {
  Matrix acc = Matrix::Zero(dim, dim);
  for (const auto& a : atoms) acc += a.mass;
  for (const auto& c : density) acc += (c.t1 - c.t0) * c.m;
  return acc;
}

void validate(const HerglotzMeasure& mu) {
  const double scale = 1.0 + spectral_norm(mu.total_mass());
  for (const auto& a : mu.atoms) {
    if (a.t < 0.0 || a.t >= kTwoPi)
      throw std::invalid_argument("HerglotzMeasure: atom angle outside [0,2pi)");
    if (a.mass.rows() != mu.dim || min_eig(hermitian_part(a.mass)) < -1e-9 * scale)
      throw std::invalid_argument("HerglotzMeasure: atom mass not PSD");
  }
  for (const auto& c : mu.density) {
    if (!(c.t1 > c.t0) || c.t0 < 0.0 || c.t1 > kTwoPi + 1e-12)
      throw std::invalid_argument("HerglotzMeasure: malformed density cell");
    if (c.m.rows() != mu.dim || min_eig(hermitian_part(c.m)) < -1e-9 * scale)
      throw std::invalid_argument("HerglotzMeasure: density cell not PSD");
  }
  if (mu.D.rows() != mu.dim || frobenius_norm(mu.D + mu.D.adjoint()) > 1e-10 * scale)
    throw std::invalid_argument("HerglotzMeasure: D not skew-Hermitian");
}

Matrix herglotz_eval(const HerglotzMeasure& mu, Complex z) {
  if (std::abs(z) >= 1.0) throw std::domain_error("herglotz_eval: |z| must be < 1");
  Matrix acc = mu.D;
  for (const auto& a : mu.atoms) acc += herglotz_kernel(a.t, z) * a.mass;
  for (const auto& c : mu.density) acc += herglotz_cell_integral(c.t0, c.t1, z) * c.m;
  return acc;
}

FunctionSpec as_function(const HerglotzMeasure& mu) {
  FunctionSpec f;
  f.dim = mu.dim;
  f.tag = mu.tag;
  f.analytic = true;
  f.eval = [mu](Complex z) { return herglotz_eval(mu, z); };
  return f;
}

IncreasingOperatorFunction distribution_function(const HerglotzMeasure& mu) {
  struct State {
    std::vector<HerglotzAtom> atoms;  // sorted by angle
    std::vector<DensityCell> cells;   // sorted by t0
    Eigen::Index dim;
  };
  auto st = std::make_shared<State>();
  st->atoms = mu.atoms;
  // An atom at the seam t=0 would predate M(0); place it at 2pi instead
  // (the same point of the circle) so the interval captures its mass.
  for (auto& a : st->atoms)
    if (a.t <= 1e-12) a.t = kTwoPi;
  st->cells = mu.density;
  st->dim = mu.dim;
  std::sort(st->atoms.begin(), st->atoms.end(),
            [](const auto& x, const auto& y) { return x.t < y.t; });
  std::sort(st->cells.begin(), st->cells.end(),
            [](const auto& x, const auto& y) { return x.t0 < y.t0; });

  IncreasingOperatorFunction f;
  f.a = 0.0;
  f.b = kTwoPi;
  f.dim = mu.dim;
  for (const auto& a : st->atoms) f.jump_hints.push_back(a.t);
  std::sort(f.jump_hints.begin(), f.jump_hints.end());
  if (f.jump_hints.empty()) f.no_jumps = true;
  f.eval = [st](double t) {
    Matrix acc = Matrix::Zero(st->dim, st->dim);
    for (const auto& a : st->atoms) {
      if (a.t > t) break;
      acc += a.mass;  // right-continuous
    }
    for (const auto& c : st->cells) {
      if (c.t0 >= t) break;
      acc += (std::min(t, c.t1) - c.t0) * c.m;
    }
    return acc;
  };
  return f;
}

std::vector<Matrix> trig_moments(const HerglotzMeasure& mu, int k_max, double eps) {
  if (k_max < 0) throw std::invalid_argument("trig_moments: k_max must be >= 0");
  IncreasingOperatorFunction m = distribution_function(mu);
  std::vector<Matrix> out;
  out.reserve(k_max + 1);
  for (int k = 0; k <= k_max; ++k) {
    auto f = [k](double t) { return std::exp(Complex(0, -k * t)); };
    out.push_back(integrate(std::function<Complex(double)>(f), m, eps));
  }
  return out;
}

KernelIntegralReport kernel_integral_check(const HerglotzMeasure& mu,
                                           const std::vector<Complex>& points, double tol) {
  KernelIntegralReport rep;
  FunctionSpec phi = as_function(mu);
  auto weight = [](double t, Complex z, Complex w) {
    const Complex e = std::polar(1.0, t);
    return 1.0 / ((e - z) * std::conj(e - w));
  };
  for (Complex z : points) {
    for (Complex w : points) {
      Matrix lhs = kernel_eval(phi, z, w);
      Matrix rhs = Matrix::Zero(mu.dim, mu.dim);
      for (const auto& a : mu.atoms) rhs += weight(a.t, z, w) * a.mass;
      for (const auto& c : mu.density) {
        // Composite Simpson per cell; the integrand is analytic in t.
        const int sub = 64;
        const double h = (c.t1 - c.t0) / sub;
        Complex s = weight(c.t0, z, w) + weight(c.t1, z, w);
        for (int j = 1; j < sub; ++j)
          s += (j % 2 ? 4.0 : 2.0) * weight(c.t0 + j * h, z, w);
        rhs += (h / 3.0) * s * c.m;
      }
      const double dev =
          spectral_norm(lhs - rhs) / (1.0 + spectral_norm(lhs));
      if (dev > rep.worst_dev) {
        rep.worst_dev = dev;
        rep.worst_z = z;
        rep.worst_w = w;
      }
    }
  }
  rep.pass = rep.worst_dev <= tol;
  return rep;
}

namespace {

// Increasing stage M_r(t) = (1/2pi) int_0^t Re phi(r e^{is}) ds, backed by a
// prefix table over `nodes` circle points.
IncreasingOperatorFunction radial_stage(const FunctionSpec& phi, double r, int nodes) {
  const Eigen::Index n = phi.dim;
  auto prefix = std::make_shared<std::vector<Matrix>>();
  prefix->reserve(nodes + 1);
  prefix->push_back(Matrix::Zero(n, n));
  const double h = kTwoPi / nodes;
  Matrix prev = hermitian_part(phi(Complex(r, 0.0)));
  double scale = 1.0 + spectral_norm(prev);
  for (int j = 1; j <= nodes; ++j) {
    const double t = (j == nodes) ? 0.0 : j * h;
    Matrix cur = hermitian_part(phi(std::polar(r, t)));
    scale = std::max(scale, 1.0 + spectral_norm(cur));
    if (min_eig(cur) < -1e-8 * scale)
      throw std::domain_error("recover: Re phi not PSD at r = " + std::to_string(r) +
                              ", t = " + std::to_string(t) + " (not Caratheodory)");
    prefix->push_back(prefix->back() + (h / (2.0 * kTwoPi)) * (prev + cur));
    prev = std::move(cur);
  }
  IncreasingOperatorFunction m;
  m.a = 0.0;
  m.b = kTwoPi;
  m.dim = n;
  m.no_jumps = true;
  m.eval = [prefix, h, nodes](double t) {
    t = std::clamp(t, 0.0, kTwoPi);
    const double s = t / h;
    const int j = std::min(static_cast<int>(s), nodes - 1);
    const double frac = s - j;
    return Matrix((*prefix)[j] + frac * ((*prefix)[j + 1] - (*prefix)[j]));
  };
  return m;
}

int stage_nodes(double r) {
  double want = std::max(4096.0, 32.0 / (1.0 - r));
  int n = 4096;
  while (n < want) n *= 2;
  return n;
}

}  // namespace

RecoveryResult recover(const FunctionSpec& phi, const RecoveryOptions& opt) {
  if (!phi.analytic)
    throw std::invalid_argument("recover: table (non-analytic) sources are not admissible");
  const Eigen::Index n = phi.dim;
  const Matrix phi0 = phi(Complex(0.0, 0.0));

  // Radial stages r_n = 1 - 2^{-n}.
  std::vector<double> radii;
  for (int k = opt.n_min; k <= opt.n_max; ++k) radii.push_back(1.0 - std::ldexp(1.0, -k));
  std::vector<IncreasingOperatorFunction> stages;
  for (double r : radii) stages.push_back(radial_stage(phi, r, stage_nodes(r)));

  const Matrix re0 = hermitian_part(phi0);
  const double re0_norm = spectral_norm(re0);
  Matrix f0m = re0 + (1e-6 * (1.0 + re0_norm)) * Matrix::Identity(n, n);
  MonotoneSequence seq;
  seq.bound = require_positive(f0m, phi.tag);
  seq.budget = static_cast<int>(stages.size());
  auto stages_ptr = std::make_shared<std::vector<IncreasingOperatorFunction>>(stages);
  seq.member = [stages_ptr](int i) { return (*stages_ptr)[i]; };

  // Pointwise CDF convergence is O(1-r) slow near atoms, so the selection
  // runs with a coarse stage tolerance; the limit is only used for flagging.
  HellyOptions hopt;
  hopt.grid_depth = opt.grid_depth;
  hopt.stage_tol_scale = opt.helly_stage_tol;
  std::vector<Vector> probes = default_probes(n, opt.probe_seed, opt.probe_extra);

  RecoveryResult out;
  out.selection = helly_select(seq, probes, hopt);

  const auto& grid = out.selection.grid;
  const std::size_t cells = grid.size() - 1;
  std::vector<double> cell_mass(cells);
  for (std::size_t l = 0; l < cells; ++l)
    cell_mass[l] = spectral_norm(out.selection.limit[l + 1] - out.selection.limit[l]);
  const double total_norm =
      spectral_norm(out.selection.limit.back() - out.selection.limit.front());

  // Atom flag: cell mass exceeding 10x its neighbours' average.
  std::vector<bool> flagged(cells, false);
  for (std::size_t l = 0; l < cells; ++l) {
    double avg = 0.0;
    int cnt = 0;
    for (int off : {-3, -2, 2, 3}) {
      avg += cell_mass[(l + cells + off) % cells];
      ++cnt;
    }
    avg /= cnt;
    if (cell_mass[l] > 10.0 * avg && cell_mass[l] > 1e-6 * (1.0 + total_norm))
      flagged[l] = true;
  }

  // Merge contiguous flagged runs (circularly) into atom windows.
  std::vector<std::pair<double, double>> windows;
  {
    std::vector<bool> seen(cells, false);
    for (std::size_t l = 0; l < cells; ++l) {
      if (!flagged[l] || seen[l]) continue;
      std::size_t lo = l, hi = l;
      while (flagged[(lo + cells - 1) % cells] && (lo + cells - 1) % cells != hi)
        lo = (lo + cells - 1) % cells;
      while (flagged[(hi + 1) % cells] && (hi + 1) % cells != lo) hi = (hi + 1) % cells;
      for (std::size_t c = lo;; c = (c + 1) % cells) {
        seen[c] = true;
        if (c == hi) break;
      }
      const double w = grid[1] - grid[0];
      double wlo = grid[lo] - w, whi = grid[hi + 1] + w;
      if (whi <= wlo) whi += kTwoPi;  // run wraps past 2pi
      windows.emplace_back(wlo, whi);
    }
  }

  // Atom locations: peak of ||Re phi|| along the finest circle, refined by
  // ternary search inside the flagged window.
  const double r_fine = radii.back();
  auto rho = [&](double t) {
    return frobenius_norm(hermitian_part(phi(std::polar(r_fine, t))));
  };
  std::vector<double> atom_ts;
  for (auto [wlo, whi] : windows) {
    const int scan = 256;
    double best_t = wlo, best_v = -1.0;
    for (int i = 0; i <= scan; ++i) {
      const double t = wlo + (whi - wlo) * i / scan;
      const double v = rho(t);
      if (v > best_v) { best_v = v; best_t = t; }
    }
    double lo = best_t - (whi - wlo) / scan, hi = best_t + (whi - wlo) / scan;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
      const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      if (rho(m1) < rho(m2)) lo = m1; else hi = m2;
    }
    double t_atom = std::fmod(0.5 * (lo + hi) + kTwoPi, kTwoPi);
    atom_ts.push_back(t_atom);
  }

  // Boundary moments, deconvolved by the exact Poisson factor r^{-k}.
  const double r_mom = std::min(opt.moment_radius, radii.back());
  const int K = opt.moment_order;
  const int J = std::min(opt.density_order, K);
  const int nm = 8192;
  std::vector<Matrix> mom(K + 1, Matrix::Zero(n, n));
  {
    const double h = kTwoPi / nm;
    for (int j = 0; j < nm; ++j) {
      const double t = j * h;
      const Matrix hj = hermitian_part(phi(std::polar(r_mom, t)));
      for (int k = 0; k <= K; ++k)
        mom[k] += (std::exp(Complex(0, -k * t)) / double(nm)) * hj;
    }
    for (int k = 0; k <= K; ++k) mom[k] *= std::pow(r_mom, -k);
  }

  // Atom masses: least squares against the high-order moments (the density
  // contributes negligibly there), then Hermitian/PSD projection.
  std::vector<Matrix> masses;
  if (!atom_ts.empty()) {
    const int rows = K - J;
    Eigen::MatrixXcd A(rows, atom_ts.size());
    for (int i = 0; i < rows; ++i)
      for (std::size_t a = 0; a < atom_ts.size(); ++a)
        A(i, a) = std::exp(Complex(0, -(J + 1 + i) * atom_ts[a]));
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A);
    for (std::size_t a = 0; a < atom_ts.size(); ++a) masses.push_back(Matrix::Zero(n, n));
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = 0; q < n; ++q) {
        Vector b(rows);
        for (int i = 0; i < rows; ++i) b(i) = mom[J + 1 + i](p, q);
        Vector x = qr.solve(b);
        for (std::size_t a = 0; a < atom_ts.size(); ++a) masses[a](p, q) = x(a);
      }
    }
    for (auto& m : masses) {
      m = hermitian_part(m);
      out.clip_magnitude = std::max(out.clip_magnitude, psd_clip(m));
    }
  }

  // Density: the moment residual as a trig polynomial of order J, stored as
  // cell averages, PSD-clipped (inactive for well-behaved inputs).
  std::vector<Matrix> dcoef(J + 1, Matrix::Zero(n, n));
  for (int j = 0; j <= J; ++j) {
    dcoef[j] = mom[j];
    for (std::size_t a = 0; a < atom_ts.size(); ++a)
      dcoef[j] -= std::exp(Complex(0, -j * atom_ts[a])) * masses[a];
  }

  HerglotzMeasure mu;
  mu.dim = n;
  mu.tag = phi.tag;
  mu.D = skew_part(phi0);
  for (std::size_t a = 0; a < atom_ts.size(); ++a)
    mu.atoms.push_back({atom_ts[a], masses[a]});
  const int dc = opt.density_cells;
  for (int c = 0; c < dc; ++c) {
    const double u0 = kTwoPi * c / dc, u1 = kTwoPi * (c + 1) / dc;
    Matrix avg = dcoef[0] * (u1 - u0);
    for (int j = 1; j <= J; ++j) {
      const Complex ij(0, double(j));
      const Complex ii = (std::exp(ij * u1) - std::exp(ij * u0)) / ij;  // int e^{ijt}
      avg += dcoef[j] * ii + dcoef[j].adjoint() * std::conj(ii);
    }
    avg /= (kTwoPi * (u1 - u0));
    Matrix cellv = hermitian_part(avg);
    out.clip_magnitude = std::max(out.clip_magnitude, psd_clip(cellv));
    mu.density.push_back({u0, u1, cellv});
  }
  validate(mu);

  for (int q = 0; q < 8; ++q) {
    const Complex z = std::polar(0.35, kTwoPi * q / 8.0);
    const Matrix ref = phi(z);
    const double err = spectral_norm(herglotz_eval(mu, z) - ref) / (1.0 + spectral_norm(ref));
    out.validation_error = std::max(out.validation_error, err);
  }
  out.measure = std::move(mu);
  return out;
}

RecoveryResult herglotz_from_realization(const Realization& r, const RecoveryOptions& opt) {
  return recover(as_function(r), opt);
}

}  // namespace carath
