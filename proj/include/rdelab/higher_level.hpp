#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rdelab/measure.hpp"
#include "rdelab/rde_spec.hpp"

namespace rdelab {

// Law of the constant random measure mu.
SimplexAtomMeasure dirac_at(const Measure& mu);

// Law of a point mass at a mu-distributed state: atom mu(x) at delta_x for
// every charged x. The extreme spread with barycenter mu.
SimplexAtomMeasure point_mass_mixture(const Measure& mu);

// One application of the map induced on laws of random measures: draw a noise
// atom and arity-many independent points of rho, push their product through
// the noise map. Returns the canonical form. The predicted emission count
// sum_k |rho|^arity(k) must stay within atom_budget; otherwise a BudgetError
// suggests particle mode.
SimplexAtomMeasure apply_higher_level(const RdeSpec& spec,
                                      const SimplexAtomMeasure& rho,
                                      double merge_eps = kNormTol,
                                      long atom_budget = kDefaultAtomBudget);

// Particle sweep for the same map: output i is built from noise and parent
// indices drawn by a counter rng keyed on (seed, step, i), so results are
// identical for every thread count.
std::vector<Measure> apply_higher_level_particle(
    const RdeSpec& spec, const std::vector<Measure>& particles,
    std::uint64_t seed, std::uint64_t step, int threads = 1);

enum class HigherMode { exact, particle };

struct HigherOptions {
  HigherMode mode = HigherMode::exact;
  int t_max = -1;  // -1: 500 exact, 200 particle
  double tol = 1e-10;
  double merge_eps = kNormTol;
  long atom_budget = kDefaultAtomBudget;
  int particles = 10000;
  std::uint64_t seed = 0;
  bool keep_snapshots = false;
  int threads = 1;
};

struct HigherIterationReport {
  struct Row {
    int t;
    long atom_count;  // atoms at t (exact) or the particle count
    double diag_mass;  // diagonal mass of the 2nd moment measure at t
    // tv between the 2nd moment measures at t and t+1; empty on the last row
    // when the iteration stopped by budget or t_max before stepping further.
    std::optional<double> residual;
  };
  std::vector<Row> rows;
};

struct HigherResult {
  SimplexAtomMeasure rho;  // final iterate (particle mode: canonical
                           // empirical measure of the population)
  HigherIterationReport report;
  std::vector<SimplexAtomMeasure> snapshots;
  bool converged;
  int iterations;  // index of the row whose residual met tol, or t_max
};

// Iterates the lifted map from the law concentrated at mu, which must be
// fixed by the one-variate map within tol. Stops when successive 2nd moment
// measures differ by at most tol in tv. Budget errors propagate (exact mode);
// switching to particle mode is the remedy.
HigherResult iterate_higher_level(const RdeSpec& spec, const Measure& mu,
                                  const HigherOptions& opts = {});

}  // namespace rdelab
