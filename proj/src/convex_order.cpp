#include "rdelab/convex_order.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "rdelab/errors.hpp"
#include "rdelab/higher_level.hpp"

namespace rdelab {

DilationWitness check_dilation_witness(const Mat& kernel,
                                       const SimplexAtomMeasure& rho1,
                                       const SimplexAtomMeasure& rho2) {
  long p = rho1.size();
  long q = rho2.size();
  if (kernel.rows() != p || kernel.cols() != q) {
    throw InputError("dilation witness: kernel shape does not match atoms");
  }
  DilationWitness w;
  w.kernel = kernel;
  w.min_entry = kernel.minCoeff();
  w.row_sum_residual = (kernel.rowwise().sum() - Vec::Ones(p)).cwiseAbs()
                           .maxCoeff();
  double bary = 0.0;
  for (long i = 0; i < p; ++i) {
    Vec target = rho1.atom(int(i)).point.weights();
    Vec got = Vec::Zero(target.size());
    for (long j = 0; j < q; ++j) {
      got += kernel(i, j) * rho2.atom(int(j)).point.weights();
    }
    bary = std::max(bary, (got - target).cwiseAbs().maxCoeff());
  }
  w.barycenter_residual = bary;
  double mix = 0.0;
  for (long j = 0; j < q; ++j) {
    double got = 0.0;
    for (long i = 0; i < p; ++i) {
      got += rho1.atom(int(i)).weight * kernel(i, j);
    }
    mix = std::max(mix, std::abs(got - rho2.atom(int(j)).weight));
  }
  w.mixture_residual = mix;
  return w;
}

MomentGaps necessary_checks(const SimplexAtomMeasure& rho1,
                            const SimplexAtomMeasure& rho2) {
  if (!same_space(rho1.space(), rho2.space())) {
    throw InputError("necessary_checks: state spaces differ");
  }
  MomentGaps g;
  g.first_moment_gap = tv_distance(first_moment(rho1), first_moment(rho2));
  Mat diff = second_moment_matrix(rho2) - second_moment_matrix(rho1);
  Eigen::SelfAdjointEigenSolver<Mat> es(diff, Eigen::EigenvaluesOnly);
  g.second_moment_eigen_gap = es.eigenvalues().minCoeff();
  return g;
}

CvReport check_convex_order(const SimplexAtomMeasure& rho1_in,
                            const SimplexAtomMeasure& rho2_in,
                            const CvOptions& opts) {
  if (!same_space(rho1_in.space(), rho2_in.space())) {
    throw InputError("check_convex_order: state spaces differ");
  }
  SimplexAtomMeasure rho1 = canonicalize(rho1_in, opts.merge_eps);
  SimplexAtomMeasure rho2 = canonicalize(rho2_in, opts.merge_eps);
  long p = rho1.size();
  long q = rho2.size();
  int m = rho1.space()->size();

  // Unknowns: kernel entries, row-major. Constraint blocks:
  //   (a) each row sums to 1;
  //   (b) each row's barycenter hits the rho1 point, dropping the last state
  //       per row since (a) makes it redundant;
  //   (c) mixing rows by rho1 weights gives the rho2 weights, dropping the
  //       last atom since (a)+(b) force total mass to agree.
  // The drops remove the structural rank deficiencies of the system.
  long rows = p + p * long(m - 1) + (q - 1);
  long cols = p * q;
  Mat A = Mat::Zero(rows, cols);
  Vec b = Vec::Zero(rows);
  long r = 0;
  for (long i = 0; i < p; ++i, ++r) {
    for (long j = 0; j < q; ++j) A(r, i * q + j) = 1.0;
    b(r) = 1.0;
  }
  for (long i = 0; i < p; ++i) {
    for (int x = 0; x + 1 < m; ++x, ++r) {
      for (long j = 0; j < q; ++j) {
        A(r, i * q + j) = rho2.atom(int(j)).point(x);
      }
      b(r) = rho1.atom(int(i)).point(x);
    }
  }
  for (long j = 0; j + 1 < q; ++j, ++r) {
    for (long i = 0; i < p; ++i) {
      A(r, i * q + j) = rho1.atom(int(i)).weight;
    }
    b(r) = rho2.atom(int(j)).weight;
  }

  FeasibilityProblem problem{std::move(A), std::move(b)};
  FeasibilityResult lp = solve_feasibility(problem, opts.lp);
  double tol = feasibility_tolerance(problem, opts.lp);

  CvReport report;
  report.gaps = necessary_checks(rho1, rho2);
  report.phase1_objective = lp.phase1_objective;
  report.feasibility_tolerance = tol;
  if (lp.status == FeasStatus::Feasible) {
    Mat kernel(p, q);
    for (long i = 0; i < p; ++i) {
      for (long j = 0; j < q; ++j) kernel(i, j) = lp.x(i * q + j);
    }
    report.verdict = CvVerdict::Dominated;
    report.witness = check_dilation_witness(kernel, rho1, rho2);
  } else if (lp.phase1_objective <= opts.inconclusive_band * tol) {
    // Too close to the feasibility threshold to call either way.
    report.verdict = CvVerdict::Inconclusive;
  } else {
    report.verdict = CvVerdict::NotDominated;
  }
  return report;
}

bool equality_from_second_moments(const SimplexAtomMeasure& rho1,
                                  const SimplexAtomMeasure& rho2,
                                  double eigen_tol, double atom_tol) {
  if (!same_space(rho1.space(), rho2.space())) {
    throw InputError("equality_from_second_moments: state spaces differ");
  }
  Mat diff = second_moment_matrix(rho2) - second_moment_matrix(rho1);
  Eigen::SelfAdjointEigenSolver<Mat> es(diff, Eigen::EigenvaluesOnly);
  double spread = es.eigenvalues().cwiseAbs().maxCoeff();
  if (spread > eigen_tol) return false;

  // Equal second moments on an ordered pair force equality of the measures;
  // confirm the canonical forms agree to the stated precision.
  SimplexAtomMeasure c1 = canonicalize(rho1);
  SimplexAtomMeasure c2 = canonicalize(rho2);
  bool match = c1.size() == c2.size();
  if (match) {
    for (int i = 0; i < c1.size(); ++i) {
      if (std::abs(c1.atom(i).weight - c2.atom(i).weight) > atom_tol ||
          (c1.atom(i).point.weights() - c2.atom(i).point.weights())
                  .cwiseAbs()
                  .maxCoeff() > atom_tol) {
        match = false;
        break;
      }
    }
  }
  if (!match) {
    throw InconclusiveError(
        "equality_from_second_moments: second moments agree but canonical "
        "atom lists differ beyond tolerance; inputs were likely not an "
        "ordered pair");
  }
  return true;
}

CvReport monotonicity_probe(const RdeSpec& spec, const SimplexAtomMeasure& rho1,
                            const SimplexAtomMeasure& rho2, double merge_eps,
                            long atom_budget) {
  SimplexAtomMeasure t1 = apply_higher_level(spec, rho1, merge_eps, atom_budget);
  SimplexAtomMeasure t2 = apply_higher_level(spec, rho2, merge_eps, atom_budget);
  CvOptions opts;
  opts.merge_eps = merge_eps;
  return check_convex_order(t1, t2, opts);
}

}  // namespace rdelab
