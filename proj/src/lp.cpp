#include "rdelab/lp.hpp"

#include <cmath>

#include "rdelab/errors.hpp"

namespace rdelab {

double feasibility_tolerance(const FeasibilityProblem& p,
                             const LpOptions& opts) {
  double bmax = p.b.size() > 0 ? p.b.cwiseAbs().maxCoeff() : 0.0;
  return opts.feas_tol_scale * (1.0 + bmax);
}

FeasibilityResult solve_feasibility(const FeasibilityProblem& p,
                                    const LpOptions& opts) {
  long m = p.A.rows();
  long n = p.A.cols();
  if (p.b.size() != m) {
    throw InputError("solve_feasibility: A and b dimensions differ");
  }
  if (m == 0 || n == 0) {
    throw InputError("solve_feasibility: empty system");
  }
  if (!p.A.allFinite() || !p.b.allFinite()) {
    throw InputError("solve_feasibility: non-finite coefficient");
  }

  // Tableau over structural columns 0..n-1 and artificial columns n..n+m-1;
  // the artificial block starts as the identity and gives the initial basis.
  Mat T(m, n + m);
  Vec rhs = p.b;
  T.leftCols(n) = p.A;
  T.rightCols(m) = Mat::Identity(m, m);
  for (long i = 0; i < m; ++i) {
    if (rhs(i) < 0.0) {
      rhs(i) = -rhs(i);
      T.row(i).head(n) = -T.row(i).head(n);
    }
  }
  std::vector<long> basis(m);
  for (long i = 0; i < m; ++i) basis[i] = n + i;

  // Phase-1 objective: minimize the sum of artificials. Reduced cost row for
  // the starting basis: -column sums on structural columns, 0 on artificials.
  Vec red = Vec::Zero(n + m);
  for (long j = 0; j < n; ++j) red(j) = -T.col(j).sum();
  double objective = rhs.sum();

  long cap = opts.max_iterations > 0 ? opts.max_iterations : 50 * (m + n);
  long iters = 0;
  while (true) {
    // Bland: entering column is the smallest index with negative reduced
    // cost.
    long enter = -1;
    for (long j = 0; j < n + m; ++j) {
      if (red(j) < -opts.pivot_tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;  // optimal
    if (++iters > cap) {
      throw InconclusiveError(
          "solve_feasibility: iteration cap of " + std::to_string(cap) +
          " reached without reaching phase-1 optimality");
    }
    // Ratio test; ties broken by the smallest basis variable (Bland).
    long leave = -1;
    double best = 0.0;
    for (long i = 0; i < m; ++i) {
      double a = T(i, enter);
      if (a > opts.pivot_tol) {
        double ratio = rhs(i) / a;
        if (leave < 0 || ratio < best - 1e-15 ||
            (std::abs(ratio - best) <= 1e-15 && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
    }
    if (leave < 0) {
      // Unbounded descent cannot happen: the objective is bounded below by 0.
      throw InconclusiveError(
          "solve_feasibility: no admissible pivot row (numerically stalled)");
    }
    double piv = T(leave, enter);
    T.row(leave) /= piv;
    rhs(leave) /= piv;
    for (long i = 0; i < m; ++i) {
      if (i == leave) continue;
      double f = T(i, enter);
      if (f != 0.0) {
        T.row(i) -= f * T.row(leave);
        rhs(i) -= f * rhs(leave);
      }
    }
    double fr = red(enter);
    red -= fr * T.row(leave).transpose();
    basis[leave] = enter;
    // Refresh the objective from the masses still on artificial columns;
    // cheaper than tracking increments and immune to drift.
    objective = 0.0;
    for (long i = 0; i < m; ++i) {
      if (basis[i] >= n) objective += rhs(i);
    }
  }

  FeasibilityResult res;
  res.phase1_objective = objective;
  res.iterations = iters;
  double tol = feasibility_tolerance(p, opts);
  if (objective <= tol) {
    res.status = FeasStatus::Feasible;
    Vec x = Vec::Zero(n);
    for (long i = 0; i < m; ++i) {
      if (basis[i] < n) x(basis[i]) = rhs(i);
    }
    res.x = x;
    res.residual_inf = (p.A * x - p.b).cwiseAbs().maxCoeff();
  } else {
    res.status = FeasStatus::Infeasible;
    res.x = Vec();
    res.residual_inf = 0.0;
  }
  return res;
}

}  // namespace rdelab
