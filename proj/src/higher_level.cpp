#include "rdelab/higher_level.hpp"

#include <cmath>
#include <optional>

#include "rdelab/errors.hpp"
#include "rdelab/parallel.hpp"
#include "rdelab/rng.hpp"

namespace rdelab {

namespace {

// Empirical 2nd moment measure of a particle population.
TensorMeasure population_m2(const std::vector<Measure>& pop) {
  int m = pop.front().size();
  Vec entries = Vec::Zero(long(m) * m);
  for (const Measure& p : pop) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        entries(long(i) * m + j) += p(i) * p(j);
      }
    }
  }
  entries /= double(pop.size());
  return TensorMeasure(pop.front().space(), 2, std::move(entries));
}

SimplexAtomMeasure population_measure(const std::vector<Measure>& pop,
                                      double merge_eps) {
  std::vector<Atom> atoms;
  atoms.reserve(pop.size());
  double w = 1.0 / double(pop.size());
  for (const Measure& p : pop) atoms.push_back({w, p});
  return canonicalize(SimplexAtomMeasure(pop.front().space(), atoms),
                      merge_eps);
}

}  // namespace

SimplexAtomMeasure dirac_at(const Measure& mu) {
  return SimplexAtomMeasure(mu.space(), {{1.0, mu}});
}

SimplexAtomMeasure point_mass_mixture(const Measure& mu) {
  std::vector<Atom> atoms;
  for (int x = 0; x < mu.size(); ++x) {
    if (mu(x) > 0.0) {
      atoms.push_back({mu(x), Measure::point_mass(mu.space(), x)});
    }
  }
  return SimplexAtomMeasure(mu.space(), std::move(atoms));
}

SimplexAtomMeasure apply_higher_level(const RdeSpec& spec,
                                      const SimplexAtomMeasure& rho,
                                      double merge_eps, long atom_budget) {
  if (!same_space(spec.space(), rho.space())) {
    throw InputError("apply_higher_level: state spaces differ");
  }
  double a = double(rho.size());
  double predicted = 0.0;
  for (const NoiseAtom& atom : spec.noise()) {
    if (atom.prob > 0.0) predicted += std::pow(a, double(atom.arity));
  }
  if (predicted > double(atom_budget)) {
    throw BudgetError(
        "apply_higher_level: would emit about " + std::to_string(predicted) +
        " atoms, over the budget of " + std::to_string(atom_budget) +
        "; switch to particle mode or raise the budget");
  }

  std::vector<Atom> out;
  out.reserve(std::size_t(predicted));
  std::vector<Measure> margs;
  std::vector<int> idx;
  for (int k = 0; k < spec.num_noise(); ++k) {
    const NoiseAtom& atom = spec.noise(k);
    if (atom.prob == 0.0) continue;
    if (atom.arity == 0) {
      out.push_back({atom.prob, pushforward(spec, k, {})});
      continue;
    }
    idx.assign(atom.arity, 0);
    while (true) {
      double w = atom.prob;
      for (int j = 0; j < atom.arity && w != 0.0; ++j) {
        w *= rho.atom(idx[j]).weight;
      }
      if (w != 0.0) {
        margs.clear();
        for (int j = 0; j < atom.arity; ++j) {
          margs.push_back(rho.atom(idx[j]).point);
        }
        out.push_back({w, pushforward(spec, k, margs)});
      }
      int j = atom.arity - 1;
      for (; j >= 0; --j) {
        if (++idx[j] < rho.size()) break;
        idx[j] = 0;
      }
      if (j < 0) break;
    }
  }
  return canonicalize(SimplexAtomMeasure(rho.space(), std::move(out)),
                      merge_eps);
}

std::vector<Measure> apply_higher_level_particle(
    const RdeSpec& spec, const std::vector<Measure>& particles,
    std::uint64_t seed, std::uint64_t step, int threads) {
  if (particles.empty()) {
    throw InputError("apply_higher_level_particle: empty population");
  }
  for (const Measure& p : particles) {
    if (!same_space(spec.space(), p.space())) {
      throw InputError("apply_higher_level_particle: state spaces differ");
    }
  }
  long n = long(particles.size());
  std::vector<std::optional<Measure>> out(n);
  const CounterRng base = CounterRng(seed).derive(salt::kParticle).derive(step);
  parallel_for(n, threads, [&](long i) {
    CounterRng rng = base.derive(std::uint64_t(i));
    int k = rng.next_categorical(spec.noise_cumulative());
    const NoiseAtom& atom = spec.noise(k);
    std::vector<Measure> margs;
    margs.reserve(atom.arity);
    for (int j = 0; j < atom.arity; ++j) {
      margs.push_back(particles[rng.next_index(int(n))]);
    }
    out[i] = pushforward(spec, k, margs);
  });
  std::vector<Measure> result;
  result.reserve(n);
  for (auto& p : out) result.push_back(std::move(*p));
  return result;
}

HigherResult iterate_higher_level(const RdeSpec& spec, const Measure& mu,
                                  const HigherOptions& opts) {
  if (!(opts.tol >= 0.0)) throw InputError("iterate_higher_level: bad tol");
  int t_max = opts.t_max;
  if (t_max < 0) t_max = opts.mode == HigherMode::exact ? 500 : 200;
  if (t_max < 1) throw InputError("iterate_higher_level: t_max must be >= 1");
  double fixed_res = tv_distance(apply_map(spec, mu), mu);
  if (fixed_res > opts.tol) {
    throw NotFixedPointError(
        "iterate_higher_level: start is not fixed by the map (residual " +
        std::to_string(fixed_res) + ")");
  }

  HigherResult res{dirac_at(mu), {}, {}, false, t_max};

  if (opts.mode == HigherMode::exact) {
    SimplexAtomMeasure rho = dirac_at(mu);
    TensorMeasure m2 = moment_measure(rho, 2);
    if (opts.keep_snapshots) res.snapshots.push_back(rho);
    for (int t = 0; t < t_max; ++t) {
      SimplexAtomMeasure next =
          apply_higher_level(spec, rho, opts.merge_eps, opts.atom_budget);
      TensorMeasure m2_next = moment_measure(next, 2);
      double r = tv_distance(m2_next, m2);
      res.report.rows.push_back({t, rho.size(), diagonal_mass(m2), r});
      rho = std::move(next);
      m2 = std::move(m2_next);
      if (opts.keep_snapshots) res.snapshots.push_back(rho);
      if (r <= opts.tol) {
        res.converged = true;
        res.iterations = t;
        break;
      }
    }
    res.report.rows.push_back(
        {int(res.report.rows.size()), rho.size(), diagonal_mass(m2),
         std::nullopt});
    res.rho = std::move(rho);
    return res;
  }

  if (opts.particles < 1) {
    throw InputError("iterate_higher_level: need at least one particle");
  }
  std::vector<Measure> pop(std::size_t(opts.particles), mu);
  TensorMeasure m2 = population_m2(pop);
  if (opts.keep_snapshots) {
    res.snapshots.push_back(population_measure(pop, opts.merge_eps));
  }
  for (int t = 0; t < t_max; ++t) {
    std::vector<Measure> next = apply_higher_level_particle(
        spec, pop, opts.seed, std::uint64_t(t), opts.threads);
    TensorMeasure m2_next = population_m2(next);
    double r = tv_distance(m2_next, m2);
    res.report.rows.push_back({t, long(pop.size()), diagonal_mass(m2), r});
    pop = std::move(next);
    m2 = std::move(m2_next);
    if (opts.keep_snapshots) {
      res.snapshots.push_back(population_measure(pop, opts.merge_eps));
    }
    if (r <= opts.tol) {
      res.converged = true;
      res.iterations = t;
      break;
    }
  }
  res.report.rows.push_back({int(res.report.rows.size()), long(pop.size()),
                             diagonal_mass(m2), std::nullopt});
  res.rho = population_measure(pop, opts.merge_eps);
  return res;
}

}  // namespace rdelab
