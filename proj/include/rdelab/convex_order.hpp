#pragma once

#include <optional>

#include "rdelab/lp.hpp"
#include "rdelab/measure.hpp"
#include "rdelab/rde_spec.hpp"

namespace rdelab {

// Row-stochastic transition kernel from the atoms of rho1 to the atoms of
// rho2 certifying rho1 <= rho2 in the convex order: each row's barycenter
// reproduces the corresponding rho1 point, and mixing the rows by the rho1
// weights reproduces the rho2 weights.
struct DilationWitness {
  Mat kernel;  // |rho1| x |rho2|
  double min_entry;
  double row_sum_residual;     // max |row sum - 1|
  double barycenter_residual;  // max row barycenter error (sup norm)
  double mixture_residual;     // max |mixed weight - rho2 weight|
};

// Recomputes the witness residuals against the two canonical measures; used
// to validate a witness without trusting the solver that produced it.
DilationWitness check_dilation_witness(const Mat& kernel,
                                       const SimplexAtomMeasure& rho1,
                                       const SimplexAtomMeasure& rho2);

enum class CvVerdict { Dominated, NotDominated, Inconclusive };

struct MomentGaps {
  // tv distance between barycenters; 0 up to roundoff whenever rho1 <= rho2.
  double first_moment_gap;
  // Least eigenvalue of M2(rho2) - M2(rho1); >= 0 up to roundoff whenever
  // rho1 <= rho2.
  double second_moment_eigen_gap;
};

MomentGaps necessary_checks(const SimplexAtomMeasure& rho1,
                            const SimplexAtomMeasure& rho2);

struct CvOptions {
  LpOptions lp;
  // Phase-1 optima within (tol, 10*tol] of the feasibility tolerance are too
  // close to call; the verdict is then Inconclusive instead of NotDominated.
  double inconclusive_band = 10.0;
  double merge_eps = kNormTol;
};

struct CvReport {
  CvVerdict verdict;
  std::optional<DilationWitness> witness;  // present iff Dominated
  MomentGaps gaps;
  double phase1_objective;
  double feasibility_tolerance;
};

// Decides rho1 <= rho2 in the convex order by solving for a dilation witness.
// Inputs are canonicalized first; the witness indices refer to the canonical
// atom lists.
CvReport check_convex_order(const SimplexAtomMeasure& rho1,
                            const SimplexAtomMeasure& rho2,
                            const CvOptions& opts = {});

// Given that the pair is already ordered, equal second moments force equal
// measures: returns true iff every eigenvalue of the second-moment difference
// is within eigen_tol of 0, and then insists the canonical forms coincide
// within atom_tol (throwing if numerics disagree with the mathematics).
bool equality_from_second_moments(const SimplexAtomMeasure& rho1,
                                  const SimplexAtomMeasure& rho2,
                                  double eigen_tol = 1e-8,
                                  double atom_tol = 1e-7);

// Pushes an ordered pair through one application of the lifted map and
// re-checks the order; the order is preserved for every spec.
CvReport monotonicity_probe(const RdeSpec& spec, const SimplexAtomMeasure& rho1,
                            const SimplexAtomMeasure& rho2,
                            double merge_eps = kNormTol,
                            long atom_budget = kDefaultAtomBudget);

}  // namespace rdelab
