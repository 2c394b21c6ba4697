#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rdelab/higher_level.hpp"
#include "rdelab/measure.hpp"
#include "rdelab/rde_spec.hpp"

namespace rdelab {

enum class EndogenyStatus { Endogenous, NonEndogenous, Inconclusive };
enum class EndogenyRoute { bivariate, higher_level, both };

struct DiagTraceRow {
  int t;
  double diag_mass;
  // tv step residual between t and t+1 (bivariate: of the coupled tensor;
  // higher level: of the 2nd moment measure). Empty on the final row.
  std::optional<double> residual;
};

// Outcome of an endogeny test at a fixed point mu. The question is whether
// the coupled iteration started from the independent pairing collapses onto
// the diagonal pairing; `gap_to_diagonal` is the tv distance left at the end.
struct EndogenyVerdict {
  EndogenyStatus status;
  EndogenyRoute route;
  bool converged;
  int iterations;
  double final_diag_mass;
  double gap_to_diagonal;
  TensorMeasure witness;  // final coupled tensor (or 2nd moment measure)
  std::vector<DiagTraceRow> trace;
};

struct EndogenyOptions {
  int t_max = 2000;
  double tol = 1e-10;
};

// Coupled route: iterate the two-copy map from the independent pairing
// mu x mu. Convergence to the diagonal within tol is Endogenous; a converged
// limit further than 10*tol from the diagonal is NonEndogenous; anything else
// (including non-convergence) is Inconclusive.
EndogenyVerdict endogeny_bivariate(const RdeSpec& spec, const Measure& mu,
                                   const EndogenyOptions& opts = {});

// Lifted route: iterate the map on laws of random measures from the law
// concentrated at mu and compare the limiting 2nd moment measure with the
// diagonal. Same verdict bands; budget errors from exact mode propagate.
EndogenyVerdict endogeny_higher_level(const RdeSpec& spec, const Measure& mu,
                                      const HigherOptions& opts = {});

struct ScanOptions {
  int n_starts = 32;  // includes the independent and diagonal pairings
  int t_max = 2000;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  int threads = 1;
};

// Iterates the two-copy map from the independent pairing, the diagonal
// pairing, and seeded random symmetric couplings with the right marginals;
// converged limits are clustered at 10*tol and returned sorted. One cluster
// is evidence for a unique symmetric fixed pairing (endogeny), several prove
// non-uniqueness.
std::vector<TensorMeasure> bivariate_uniqueness_scan(
    const RdeSpec& spec, const Measure& mu, const ScanOptions& opts = {});

}  // namespace rdelab
