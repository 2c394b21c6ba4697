#pragma once

#include "rdelab/measure.hpp"

namespace rdelab {

// Equality-form feasibility: does x >= 0 with A x = b exist?
struct FeasibilityProblem {
  Mat A;
  Vec b;
};

enum class FeasStatus { Feasible, Infeasible };

struct FeasibilityResult {
  FeasStatus status;
  // Phase-1 optimum: the least total artificial mass. At most feas_tol for
  // feasible systems; for infeasible ones it measures how far from
  // satisfiable the equations are.
  double phase1_objective;
  Vec x;                // a feasible point (entries >= -1e-12); empty otherwise
  double residual_inf;  // ||A x - b||_inf at x for feasible systems, else 0
  long iterations;
};

struct LpOptions {
  // Entries smaller than this never pivot; guards against dividing by noise.
  double pivot_tol = 1e-11;
  // Feasible iff phase-1 optimum <= feas_tol_scale * (1 + ||b||_inf).
  double feas_tol_scale = 1e-9;
  // Iteration cap; <= 0 means 50 * (rows + cols). Exceeding it throws
  // InconclusiveError rather than guessing.
  long max_iterations = 0;
};

double feasibility_tolerance(const FeasibilityProblem& p,
                             const LpOptions& opts = {});

// Dense-tableau phase-1 simplex with Bland's rule (smallest-index entering
// and leaving choices), which cannot cycle. Rows with negative right-hand
// side are negated first.
FeasibilityResult solve_feasibility(const FeasibilityProblem& p,
                                    const LpOptions& opts = {});

}  // namespace rdelab
