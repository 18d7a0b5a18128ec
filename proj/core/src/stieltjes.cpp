#include "carath/stieltjes.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace carath {

namespace {

double min_eigenvalue(const Matrix& h) {
  if (h.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Plain tagged sum without per-increment certification; used inside the
// refinement loop.  The returned partition's sum is certified once at the end.
Matrix tagged_sum(const std::function<Complex(double)>& f, const IncreasingOperatorFunction& m,
                  const Partition& p) {
  Matrix acc = Matrix::Zero(m.dim, m.dim);
  Matrix prev = m(p.knots.front());
  for (std::size_t j = 1; j < p.knots.size(); ++j) {
    Matrix cur = m(p.knots[j]);
    acc += f(p.tags[j - 1]) * (cur - prev);
    prev = std::move(cur);
  }
  return acc;
}

// Uniform m-cell partition with midpoint tags, jump points forced into the
// interior of a dedicated cell whose tag sits exactly on the jump.
Partition jump_aligned_partition(double a, double b, int m, const std::vector<double>& jumps) {
  Partition p = Partition::uniform(a, b, m);
  if (jumps.empty()) return p;
  const double h = 0.25 * (b - a) / m;
  std::vector<double> knots = p.knots;
  for (double t : jumps) {
    if (t < a || t > b) continue;
    knots.push_back(std::max(a, t - h));
    knots.push_back(std::min(b, t + h));
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end(),
                          [](double x, double y) { return std::abs(x - y) < 1e-15; }),
              knots.end());
  Partition out;
  out.knots = knots;
  out.tags.resize(knots.size() - 1);
  std::vector<double> sj = jumps;
  std::sort(sj.begin(), sj.end());
  for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
    const double lo = knots[j], hi = knots[j + 1];
    double tag = 0.5 * (lo + hi);
    for (double t : sj)
      if (t >= lo && t <= hi) { tag = t; break; }
    out.tags[j] = tag;
  }
  return out;
}

}  // namespace

MonotonicityReport certify_increasing(const IncreasingOperatorFunction& m, int grid_points) {
  MonotonicityReport rep;
  if (grid_points < 2) grid_points = 2;
  const double tv = spectral_norm(m(m.b) - m(m.a));
  const double tol = 1e-9 * (1.0 + tv);
  Matrix prev = m(m.a);
  double t_prev = m.a;
  {
    const double l0 = min_eigenvalue(prev);
    if (l0 < -tol) {
      rep.ok = false;
      rep.worst_violation = l0;
      rep.t_lo = rep.t_hi = m.a;
    }
  }
  for (int i = 1; i < grid_points; ++i) {
    const double t = m.a + (m.b - m.a) * i / (grid_points - 1);
    Matrix cur = m(t);
    const double l = min_eigenvalue(cur - prev);
    if (l < rep.worst_violation) {
      rep.worst_violation = l;
      rep.t_lo = t_prev;
      rep.t_hi = t;
    }
    if (l < -tol) rep.ok = false;
    prev = std::move(cur);
    t_prev = t;
  }
  return rep;
}

Partition Partition::uniform(double a, double b, int m) {
  if (m < 1) throw std::invalid_argument("Partition::uniform: m < 1");
  Partition p;
  p.knots.resize(m + 1);
  p.tags.resize(m);
  for (int j = 0; j <= m; ++j) p.knots[j] = a + (b - a) * j / m;
  for (int j = 0; j < m; ++j) p.tags[j] = 0.5 * (p.knots[j] + p.knots[j + 1]);
  return p;
}

double Partition::mesh() const {
  double w = 0.0;
  for (std::size_t j = 1; j < knots.size(); ++j) w = std::max(w, knots[j] - knots[j - 1]);
  return w;
}

void Partition::validate(double a, double b) const {
  if (knots.size() < 2 || tags.size() != knots.size() - 1)
    throw std::invalid_argument("Partition: malformed");
  if (std::abs(knots.front() - a) > 1e-12 || std::abs(knots.back() - b) > 1e-12)
    throw std::invalid_argument("Partition: does not subdivide [a,b]");
  for (std::size_t j = 1; j < knots.size(); ++j) {
    if (knots[j] < knots[j - 1]) throw std::invalid_argument("Partition: knots unsorted");
    if (tags[j - 1] < knots[j - 1] - 1e-12 || tags[j - 1] > knots[j] + 1e-12)
      throw std::invalid_argument("Partition: tag outside its cell");
  }
}

RiemannStieltjesSum rs_sum(const std::function<Complex(double)>& f,
                           const IncreasingOperatorFunction& m, const Partition& p) {
  p.validate(m.a, m.b);
  const double tv = spectral_norm(m(m.b) - m(m.a));
  const double tol = 1e-9 * (1.0 + tv);
  RiemannStieltjesSum out;
  out.value = Matrix::Zero(m.dim, m.dim);
  out.mesh = p.mesh();
  Matrix prev = m(p.knots.front());
  for (std::size_t j = 1; j < p.knots.size(); ++j) {
    Matrix cur = m(p.knots[j]);
    Matrix inc = cur - prev;
    if (min_eigenvalue(inc) < -tol)
      throw std::domain_error("rs_sum: non-monotone increment at t in [" +
                              std::to_string(p.knots[j - 1]) + ", " +
                              std::to_string(p.knots[j]) + "]");
    out.value += f(p.tags[j - 1]) * inc;
    prev = std::move(cur);
  }
  return out;
}

BrodBoundCheck brod_bound_check(const std::vector<Complex>& alpha,
                                const std::vector<Complex>& beta,
                                const std::vector<PositiveOperator>& h) {
  if (alpha.size() != beta.size() || alpha.size() != h.size() || h.empty())
    throw std::invalid_argument("brod_bound_check: length mismatch");
  for (std::size_t j = 0; j < alpha.size(); ++j)
    if (std::abs(alpha[j]) > std::abs(beta[j]) + 1e-14)
      throw std::invalid_argument("brod_bound_check: |alpha_j| > |beta_j|");
  const Eigen::Index n = h.front().dim();
  Matrix lhs_m = Matrix::Zero(n, n);
  Matrix rhs_m = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (h[j].dim() != n) throw std::invalid_argument("brod_bound_check: shape mismatch");
    lhs_m += alpha[j] * h[j].mat();
    rhs_m += std::abs(beta[j]) * h[j].mat();
  }
  BrodBoundCheck chk;
  chk.lhs = spectral_norm(lhs_m);
  chk.rhs = spectral_norm(rhs_m);
  chk.holds = chk.lhs <= chk.rhs + 1e-12 * (1.0 + chk.rhs);
  return chk;
}

std::vector<double> detect_jumps(const IncreasingOperatorFunction& m, double mass_floor) {
  std::vector<double> jumps;
  const Matrix total = m(m.b) - m(m.a);
  const double tv = spectral_norm(total);
  if (tv <= 0.0) return jumps;
  const double floor = std::max(mass_floor, 1e-6 * tv);
  const double span = m.b - m.a;

  struct Node { double lo, hi; Matrix at_lo, at_hi; };
  std::vector<Node> stack;
  stack.push_back({m.a, m.b, m(m.a), m(m.b)});
  while (!stack.empty()) {
    Node nd = std::move(stack.back());
    stack.pop_back();
    const double mass = spectral_norm(nd.at_hi - nd.at_lo);
    // Only chase intervals carrying far more than their uniform share.
    const double share = 8.0 * tv * (nd.hi - nd.lo) / span;
    if (mass < floor || (mass < share && nd.hi - nd.lo < 0.25 * span)) continue;
    if (nd.hi - nd.lo < 1e-10) {
      jumps.push_back(0.5 * (nd.lo + nd.hi));
      continue;
    }
    const double mid = 0.5 * (nd.lo + nd.hi);
    Matrix at_mid = m(mid);
    stack.push_back({nd.lo, mid, nd.at_lo, at_mid});
    stack.push_back({mid, nd.hi, std::move(at_mid), std::move(nd.at_hi)});
  }
  std::sort(jumps.begin(), jumps.end());
  jumps.erase(std::unique(jumps.begin(), jumps.end(),
                          [](double x, double y) { return std::abs(x - y) < 1e-9; }),
              jumps.end());
  return jumps;
}

Matrix integrate(const std::function<Complex(double)>& f, const IncreasingOperatorFunction& m,
                 double eps) {
  if (eps <= 0.0) throw std::invalid_argument("integrate: eps must be positive");
  const Matrix total = m(m.b) - m(m.a);
  const double tv = spectral_norm(total);
  if (tv == 0.0) return Matrix::Zero(m.dim, m.dim);

  std::vector<double> jumps = m.jump_hints;
  if (jumps.empty() && !m.no_jumps) jumps = detect_jumps(m);

  // Sampled modulus of continuity of f on a 4097-point grid; pick the mesh
  // whose oscillation meets the Theorem 3.1 budget eps/||M(b)-M(a)||, capped.
  constexpr int kSamples = 4097;
  std::vector<double> fr(kSamples), fi(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    const Complex v = f(m.a + (m.b - m.a) * i / (kSamples - 1));
    fr[i] = v.real();
    fi[i] = v.imag();
  }
  const double osc_budget = eps / tv;
  auto osc_at_window = [&](int w) {
    double worst = 0.0;
    for (int i = 0; i + 1 < kSamples; ++i) {
      const int j_end = std::min(kSamples - 1, i + w);
      for (int j = i + 1; j <= j_end; ++j) {
        worst = std::max(worst, std::hypot(fr[j] - fr[i], fi[j] - fi[i]));
        if (worst > osc_budget) return worst;
      }
    }
    return worst;
  };
  int m0 = 65536;
  for (int cand = 64; cand <= 4096; cand *= 2) {
    const int w = (kSamples - 1) / cand;
    if (osc_at_window(std::max(1, w)) <= osc_budget) { m0 = cand; break; }
  }

  constexpr int kCap = 1 << 20;
  Matrix prev_sum = tagged_sum(f, m, jump_aligned_partition(m.a, m.b, m0, jumps));
  for (int cells = 2 * m0; cells <= kCap; cells *= 2) {
    const Partition p = jump_aligned_partition(m.a, m.b, cells, jumps);
    Matrix cur = tagged_sum(f, m, p);
    if (spectral_norm(cur - prev_sum) <= 0.5 * eps) {
      // Certify increments of the accepted partition.
      return rs_sum(f, m, p).value;
    }
    prev_sum = std::move(cur);
  }
  throw std::runtime_error("integrate: refinement did not converge (f continuous on [a,b]?)");
}

}  // namespace carath
