#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rdelab/measure.hpp"
#include "rdelab/rde_spec.hpp"

namespace rdelab {

inline constexpr long kDefaultNodeBudget = 10'000'000;

// A sampled recursion tree of fixed depth. Nodes are addressed by words over
// child indices (bytes 1..arity); the root is the empty word. Each node
// carries the noise atom drawn for it; a node of arity k has children
// word+1..word+k, and words of length `depth` are boundary leaves (not
// stored). Node draws are keyed by (seed, word), independent of traversal
// order.
struct SampledTree {
  std::shared_ptr<const RdeSpec> spec;
  int depth;
  std::uint64_t seed;
  std::map<std::string, int> nodes;
};

// Samples the noise for all internal nodes reachable from the root. Refuses
// (rather than truncates) trees whose node count passes `node_budget`.
SampledTree sample_tree(std::shared_ptr<const RdeSpec> spec, int depth,
                        std::uint64_t seed,
                        long node_budget = kDefaultNodeBudget);

// Root state after drawing i.i.d. boundary states from `boundary` at the
// leaves (keyed by (boundary_seed, word)) and evaluating the noise maps
// bottom-up. Over independent trees and boundaries, the root state has the
// law of `depth` applications of the map to `boundary`.
int evaluate_root(const SampledTree& tree, const Measure& boundary,
                  std::uint64_t boundary_seed);

// Conditional law of the root given the tree's noise: boundary_law at the
// leaves, pushforwards bottom-up. Over independent trees this random measure
// has the law of `depth` applications of the lifted map to the law
// concentrated at boundary_law.
Measure xi_root(const SampledTree& tree, const Measure& boundary_law);

struct McEstimate {
  double value;
  long n_samples;
  double std_error;
  std::uint64_t seed;
};

// Probability that two evaluations of the same tree with independent
// boundaries drawn from mu agree at the root. mu must be fixed by the map
// within fixed_tol. Equals, in expectation, the diagonal mass after `depth`
// coupled-map applications to mu x mu. The infinite-tree statement "the
// root is determined by the noise alone" is not computable directly; this
// agreement probability tending to 1 as depth grows is its truncated
// stand-in, and on a finite state space the two are equivalent.
McEstimate coupled_agreement(const RdeSpec& spec, const Measure& mu, int depth,
                             long n_samples, std::uint64_t seed,
                             int threads = 1, double fixed_tol = 1e-8,
                             long node_budget = kDefaultNodeBudget);

struct RootLawEstimate {
  Measure law;      // empirical root frequencies
  Vec std_errors;   // per-state binomial standard errors
  long n_samples;
  std::uint64_t seed;
};

// Root frequencies over independent (tree, boundary) samples; estimates
// `depth` applications of the map to `boundary`.
RootLawEstimate empirical_root_law(const RdeSpec& spec,
                                   const Measure& boundary, int depth,
                                   long n_samples, std::uint64_t seed,
                                   int threads = 1,
                                   long node_budget = kDefaultNodeBudget);

// Conditional root laws over independent trees; sample s uses tree seed
// derived from (seed, s). Estimates the lifted iteration empirically.
std::vector<Measure> sample_xi_roots(const RdeSpec& spec,
                                     const Measure& boundary_law, int depth,
                                     long n_samples, std::uint64_t seed,
                                     int threads = 1,
                                     long node_budget = kDefaultNodeBudget);

}  // namespace rdelab
