#include "rdelab/endogeny.hpp"

#include <algorithm>
#include <optional>

#include "rdelab/errors.hpp"
#include "rdelab/parallel.hpp"
#include "rdelab/rng.hpp"
#include "rdelab/sampling.hpp"

namespace rdelab {

namespace {

void require_fixed(const RdeSpec& spec, const Measure& mu, double tol,
                   const char* what) {
  double r = tv_distance(apply_map(spec, mu), mu);
  if (r > tol) {
    throw NotFixedPointError(std::string(what) +
                             ": measure is not fixed by the map (residual " +
                             std::to_string(r) + " > " + std::to_string(tol) +
                             ")");
  }
}

EndogenyStatus classify(bool converged, double gap, double tol) {
  if (!converged) return EndogenyStatus::Inconclusive;
  if (gap <= tol) return EndogenyStatus::Endogenous;
  if (gap > 10.0 * tol) return EndogenyStatus::NonEndogenous;
  return EndogenyStatus::Inconclusive;
}

}  // namespace

EndogenyVerdict endogeny_bivariate(const RdeSpec& spec, const Measure& mu,
                                   const EndogenyOptions& opts) {
  if (opts.t_max < 1) throw InputError("endogeny_bivariate: t_max must be >= 1");
  require_fixed(spec, mu, opts.tol, "endogeny_bivariate");

  TensorMeasure diag = diagonal_measure(mu, 2);
  TensorMeasure nu = product(mu, mu);
  std::vector<DiagTraceRow> trace;
  bool converged = false;
  int iterations = opts.t_max;
  for (int t = 0; t < opts.t_max; ++t) {
    TensorMeasure next = apply_coupled(spec, nu);
    double r = tv_distance(next, nu);
    trace.push_back({t, diagonal_mass(nu), r});
    nu = std::move(next);
    if (r <= opts.tol) {
      converged = true;
      iterations = t;
      break;
    }
  }
  trace.push_back({int(trace.size()), diagonal_mass(nu), std::nullopt});

  double gap = tv_distance(nu, diag);
  EndogenyVerdict v{classify(converged, gap, opts.tol),
                    EndogenyRoute::bivariate,
                    converged,
                    iterations,
                    diagonal_mass(nu),
                    gap,
                    nu,
                    std::move(trace)};
  return v;
}

EndogenyVerdict endogeny_higher_level(const RdeSpec& spec, const Measure& mu,
                                      const HigherOptions& opts) {
  HigherResult run = iterate_higher_level(spec, mu, opts);
  TensorMeasure m2 = moment_measure(run.rho, 2);
  double gap = tv_distance(m2, diagonal_measure(mu, 2));
  std::vector<DiagTraceRow> trace;
  trace.reserve(run.report.rows.size());
  for (const auto& row : run.report.rows) {
    trace.push_back({row.t, row.diag_mass, row.residual});
  }
  EndogenyVerdict v{classify(run.converged, gap, opts.tol),
                    EndogenyRoute::higher_level,
                    run.converged,
                    run.iterations,
                    diagonal_mass(m2),
                    gap,
                    m2,
                    std::move(trace)};
  return v;
}

std::vector<TensorMeasure> bivariate_uniqueness_scan(const RdeSpec& spec,
                                                     const Measure& mu,
                                                     const ScanOptions& opts) {
  if (opts.n_starts < 2) {
    throw InputError("bivariate_uniqueness_scan: need at least two starts");
  }
  require_fixed(spec, mu, opts.tol, "bivariate_uniqueness_scan");

  std::vector<TensorMeasure> starts;
  starts.push_back(product(mu, mu));
  starts.push_back(diagonal_measure(mu, 2));
  CounterRng rng = CounterRng(opts.seed).derive(salt::kScanStart);
  for (int s = 2; s < opts.n_starts; ++s) {
    CounterRng local = rng.derive(std::uint64_t(s));
    starts.push_back(random_symmetric_coupling(local, mu));
  }

  std::vector<std::optional<TensorMeasure>> limits(starts.size());
  parallel_for(long(starts.size()), opts.threads, [&](long i) {
    TensorMeasure nu = starts[std::size_t(i)];
    for (int t = 0; t < opts.t_max; ++t) {
      TensorMeasure next = apply_coupled(spec, nu);
      double r = tv_distance(next, nu);
      nu = std::move(next);
      if (r <= opts.tol) {
        limits[std::size_t(i)] = std::move(nu);
        return;
      }
    }
    // Starts that fail to settle are dropped rather than reported as limits.
  });

  // Deterministic greedy clustering at 10*tol, then sort representatives.
  std::vector<TensorMeasure> reps;
  for (const auto& lim : limits) {
    if (!lim) continue;
    bool found = false;
    for (const auto& rep : reps) {
      if (tv_distance(*lim, rep) <= 10.0 * opts.tol) {
        found = true;
        break;
      }
    }
    if (!found) reps.push_back(*lim);
  }
  std::sort(reps.begin(), reps.end(),
            [](const TensorMeasure& a, const TensorMeasure& b) {
              for (long i = 0; i < a.entry_count(); ++i) {
                if (a[i] != b[i]) return a[i] < b[i];
              }
              return false;
            });
  return reps;
}

}  // namespace rdelab
