#include "carath/helly.hpp"

#include <algorithm>
#include <memory>

namespace carath {

std::vector<double> dyadic_grid(double a, double b, int depth) {
  const int m = 1 << depth;
  std::vector<double> g(m + 1);
  for (int i = 0; i <= m; ++i) g[i] = a + (b - a) * i / m;
  return g;
}

namespace {

// One selection stage: keep a subset of `keep` whose values cluster within
// tol, by bisecting the value range toward the better-populated half.
// Returns the spread of the kept tail.
double refine_stage(const std::vector<double>& values, std::vector<int>& keep, double tol,
                    int min_keep) {
  auto spread = [&](const std::vector<int>& idx) {
    double lo = values[idx.front()], hi = lo;
    for (int i : idx) {
      lo = std::min(lo, values[i]);
      hi = std::max(hi, values[i]);
    }
    return hi - lo;
  };
  double s = spread(keep);
  while (s > tol && static_cast<int>(keep.size()) > min_keep) {
    double lo = values[keep.front()], hi = lo;
    for (int i : keep) {
      lo = std::min(lo, values[i]);
      hi = std::max(hi, values[i]);
    }
    const double mid = 0.5 * (lo + hi);
    std::vector<int> lower, upper;
    for (int i : keep)
      (values[i] <= mid ? lower : upper).push_back(i);
    // Population decides; ties go to the half holding the latest member, so
    // slowly converging monotone columns keep their tail.
    std::vector<int>& pick =
        (lower.size() != upper.size())
            ? (lower.size() > upper.size() ? lower : upper)
            : (!upper.empty() && upper.back() == keep.back() ? upper : lower);
    if (static_cast<int>(pick.size()) < min_keep) break;
    keep = pick;
    s = spread(keep);
  }
  return s;
}

}  // namespace

ScalarSelection scalar_helly_select(const std::vector<std::function<double(double)>>& g,
                                    const std::vector<double>& grid, double tol, int min_keep) {
  if (g.empty() || grid.empty())
    throw std::invalid_argument("scalar_helly_select: empty sequence or grid");
  ScalarSelection out;
  out.indices.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out.indices[i] = static_cast<int>(i);
  out.limit.resize(grid.size());
  out.residuals.resize(grid.size());

  // Cache all values up front; members are deterministic functions.
  std::vector<std::vector<double>> vals(g.size(), std::vector<double>(grid.size()));
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t t = 0; t < grid.size(); ++t) vals[i][t] = g[i](grid[t]);

  for (std::size_t t = 0; t < grid.size(); ++t) {
    std::vector<double> column(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) column[i] = vals[i][t];
    const double res = refine_stage(column, out.indices, tol, min_keep);
    out.residuals[t] = res;
    if (res > tol) out.converged = false;
  }
  for (std::size_t t = 0; t < grid.size(); ++t) {
    double acc = 0.0;
    for (int i : out.indices) acc += vals[i][t];
    out.limit[t] = acc / out.indices.size();
  }
  return out;
}

std::vector<Vector> default_probes(Eigen::Index n, std::uint64_t seed, int extra) {
  std::vector<Vector> probes;
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e(i) = 1.0;
    probes.push_back(e);
  }
  Rng rng(seed);
  for (int i = 0; i < extra; ++i) probes.push_back(rng.unit_vector(n));
  return probes;
}

SelectionResult helly_select(const MonotoneSequence& seq, const std::vector<Vector>& probes,
                             const HellyOptions& opt) {
  if (seq.budget < 1) throw std::invalid_argument("helly_select: empty budget");
  const Eigen::Index n = seq.bound.dim();
  const double f0_norm = spectral_norm(seq.bound.mat());
  const double stage_tol = opt.stage_tol_scale * std::max(1.0, f0_norm);

  SelectionResult out;
  out.dim = n;

  // Materialize members on the dyadic grid.
  std::vector<IncreasingOperatorFunction> members;
  for (int i = 0; i < seq.budget; ++i) members.push_back(seq.member(i));
  out.grid = dyadic_grid(members.front().a, members.front().b, opt.grid_depth);
  const std::size_t G = out.grid.size();
  std::vector<std::vector<Matrix>> table(seq.budget);
  for (int i = 0; i < seq.budget; ++i) {
    table[i].reserve(G);
    for (double t : out.grid) table[i].push_back(members[i](t));
  }

  // Bound hypothesis F_n(t) <= F0 on all sampled (n,t).
  HermitianOperator f0{seq.bound.mat(), seq.bound.base.tag, 0.0};
  for (int i = 0; i < seq.budget; ++i) {
    for (std::size_t t = 0; t < G; ++t) {
      HermitianOperator fnt{hermitian_part(table[i][t]), f0.tag, 0.0};
      if (!order_leq(fnt, f0))
        throw std::domain_error("helly_select: bound hypothesis F_n(t) <= F0 fails at member " +
                                std::to_string(i) + ", t = " + std::to_string(out.grid[t]));
    }
  }

  // The two a-priori inequalities, checked over members and probe pairs.
  const double slack = 1e-9 * (1.0 + f0_norm);
  for (int i = 0; i < seq.budget; ++i) {
    for (const Vector& x : probes) {
      for (const Vector& y : probes) {
        double worst_pair = 0.0;
        double inc_sum = 0.0;
        for (std::size_t t = 0; t < G; ++t) {
          worst_pair = std::max(worst_pair, std::abs((y.adjoint() * table[i][t] * x)(0, 0)));
          if (t > 0)
            inc_sum += std::abs((y.adjoint() * (table[i][t] - table[i][t - 1]) * x)(0, 0));
        }
        const double bound1 = f0_norm * x.norm() * y.norm();
        const double bound2 = 2.0 * bound1;
        out.inequality1_margin = std::max(out.inequality1_margin, worst_pair - bound1);
        out.inequality2_margin = std::max(out.inequality2_margin, inc_sum - bound2);
        if (worst_pair > bound1 + slack || inc_sum > bound2 + slack)
          throw std::domain_error("helly_select: a-priori pairing inequality violated");
      }
    }
  }

  // Diagonal process: one global subsequence refined stage by stage over
  // (probe pair, Re/Im, grid point).
  out.subsequence.resize(seq.budget);
  for (int i = 0; i < seq.budget; ++i) out.subsequence[i] = i;
  for (const Vector& x : probes) {
    for (const Vector& y : probes) {
      for (std::size_t t = 0; t < G; ++t) {
        std::vector<double> re(seq.budget), im(seq.budget);
        for (int i = 0; i < seq.budget; ++i) {
          const Complex v = (y.adjoint() * table[i][t] * x)(0, 0);
          re[i] = v.real();
          im[i] = v.imag();
        }
        double r1 = refine_stage(re, out.subsequence, stage_tol, opt.min_keep);
        double r2 = refine_stage(im, out.subsequence, stage_tol, opt.min_keep);
        const double res = std::max(r1, r2);
        out.residual_log.push_back(res);
        out.max_residual = std::max(out.max_residual, res);
        if (res > stage_tol) out.converged = false;
      }
    }
  }

  // Limit reconstruction: mean over the selected tail.
  const std::size_t tail = std::min<std::size_t>(out.subsequence.size(), 4);
  out.limit.resize(G);
  for (std::size_t t = 0; t < G; ++t) {
    Matrix acc = Matrix::Zero(n, n);
    for (std::size_t j = out.subsequence.size() - tail; j < out.subsequence.size(); ++j)
      acc += table[out.subsequence[j]][t];
    out.limit[t] = acc / double(tail);
  }
  return out;
}

IncreasingOperatorFunction SelectionResult::limit_function() const {
  auto grid_ptr = std::make_shared<std::vector<double>>(grid);
  auto limit_ptr = std::make_shared<std::vector<Matrix>>(limit);
  IncreasingOperatorFunction f;
  f.a = grid.front();
  f.b = grid.back();
  f.dim = dim;
  f.jump_hints = grid;
  f.eval = [grid_ptr, limit_ptr](double t) {
    const auto& g = *grid_ptr;
    auto it = std::upper_bound(g.begin(), g.end(), t);
    std::size_t idx = (it == g.begin()) ? 0 : (std::distance(g.begin(), it) - 1);
    return (*limit_ptr)[idx];
  };
  return f;
}

LimitPassResult pass_to_limit(const std::function<Complex(double)>& f,
                              const MonotoneSequence& seq, const SelectionResult& sel,
                              const std::vector<Vector>& probes, double eps) {
  if (sel.subsequence.empty()) throw std::invalid_argument("pass_to_limit: empty selection");
  LimitPassResult out;
  out.value = integrate(f, sel.limit_function(), eps);
  out.tail_value = integrate(f, seq.member(sel.subsequence.back()), eps);
  // |int f d(F-G)| <= dev * (2 max|f| + TV(f))  by summation by parts.
  double fmax = 0.0, ftv = 0.0;
  Complex prev = f(sel.grid.front());
  for (double t : sel.grid) {
    const Complex v = f(t);
    fmax = std::max(fmax, std::abs(v));
    ftv += std::abs(v - prev);
    prev = v;
  }
  // sup-distance between the step limit and the tail member: stage residual
  // at the grid points plus the tail's modulus of continuity over one cell.
  const auto tail = seq.member(sel.subsequence.back());
  double cell_inc = 0.0;
  Matrix prev_f = tail.eval(sel.grid.front());
  for (std::size_t i = 1; i < sel.grid.size(); ++i) {
    Matrix cur = tail.eval(sel.grid[i]);
    cell_inc = std::max(cell_inc, spectral_norm(cur - prev_f));
    prev_f = std::move(cur);
  }
  const double budget =
      2.0 * eps + (sel.max_residual + cell_inc) * (2.0 * fmax + ftv);
  for (const Vector& x : probes) {
    for (const Vector& y : probes) {
      const double dev = std::abs((y.adjoint() * (out.value - out.tail_value) * x)(0, 0)) /
                         (x.norm() * y.norm());
      out.max_pairing_dev = std::max(out.max_pairing_dev, dev);
    }
  }
  out.ok = out.max_pairing_dev <= budget;
  return out;
}

}  // namespace carath
