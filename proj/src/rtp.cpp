#include "rdelab/rtp.hpp"

#include <cmath>

#include "rdelab/errors.hpp"
#include "rdelab/parallel.hpp"
#include "rdelab/rng.hpp"

namespace rdelab {

namespace {

CounterRng node_rng(std::uint64_t seed, std::uint64_t purpose,
                    const std::string& word) {
  CounterRng r = CounterRng(seed).derive(purpose);
  for (char c : word) r = r.derive(std::uint64_t(std::uint8_t(c)));
  return r;
}

int draw_state(CounterRng& rng, const Measure& mu) {
  double u = rng.next_unit();
  double acc = 0.0;
  int last = 0;
  for (int x = 0; x < mu.size(); ++x) {
    if (mu(x) == 0.0) continue;
    acc += mu(x);
    last = x;
    if (u < acc) return x;
  }
  return last;
}

int eval_node(const SampledTree& tree, const Measure& boundary,
              std::uint64_t boundary_seed, std::string& word) {
  if (int(word.size()) == tree.depth) {
    CounterRng rng = node_rng(boundary_seed, salt::kBoundaryA, word);
    return draw_state(rng, boundary);
  }
  int k = tree.nodes.at(word);
  const NoiseAtom& atom = tree.spec->noise(k);
  std::vector<int> args(atom.arity);
  for (int c = 1; c <= atom.arity; ++c) {
    word.push_back(char(c));
    args[c - 1] = eval_node(tree, boundary, boundary_seed, word);
    word.pop_back();
  }
  return apply_noise(*tree.spec, k, args);
}

Measure xi_node(const SampledTree& tree, const Measure& boundary_law,
                std::string& word) {
  if (int(word.size()) == tree.depth) return boundary_law;
  int k = tree.nodes.at(word);
  const NoiseAtom& atom = tree.spec->noise(k);
  std::vector<Measure> margs;
  margs.reserve(atom.arity);
  for (int c = 1; c <= atom.arity; ++c) {
    word.push_back(char(c));
    margs.push_back(xi_node(tree, boundary_law, word));
    word.pop_back();
  }
  return pushforward(*tree.spec, k, margs);
}

}  // namespace

SampledTree sample_tree(std::shared_ptr<const RdeSpec> spec, int depth,
                        std::uint64_t seed, long node_budget) {
  if (!spec) throw InputError("sample_tree: null spec");
  if (depth < 0) throw InputError("sample_tree: negative depth");
  SampledTree tree{std::move(spec), depth, seed, {}};
  std::vector<std::string> frontier;
  if (depth > 0) frontier.push_back("");
  long count = 0;
  const auto cumulative = tree.spec->noise_cumulative();
  while (!frontier.empty()) {
    std::string word = std::move(frontier.back());
    frontier.pop_back();
    if (++count > node_budget) {
      throw BudgetError("sample_tree: node budget of " +
                        std::to_string(node_budget) +
                        " exceeded; lower the depth or the budget");
    }
    CounterRng rng = node_rng(seed, salt::kTreeNoise, word);
    int k = rng.next_categorical(cumulative);
    tree.nodes.emplace(word, k);
    // Children are internal nodes only when strictly above the boundary;
    // words of length `depth` are leaves and never stored.
    const NoiseAtom& atom = tree.spec->noise(k);
    if (int(word.size()) + 1 < depth) {
      for (int c = 1; c <= atom.arity; ++c) {
        frontier.push_back(word + char(c));
      }
    }
  }
  return tree;
}

int evaluate_root(const SampledTree& tree, const Measure& boundary,
                  std::uint64_t boundary_seed) {
  if (!same_space(tree.spec->space(), boundary.space())) {
    throw InputError("evaluate_root: state spaces differ");
  }
  std::string word;
  return eval_node(tree, boundary, boundary_seed, word);
}

Measure xi_root(const SampledTree& tree, const Measure& boundary_law) {
  if (!same_space(tree.spec->space(), boundary_law.space())) {
    throw InputError("xi_root: state spaces differ");
  }
  std::string word;
  return xi_node(tree, boundary_law, word);
}

McEstimate coupled_agreement(const RdeSpec& spec, const Measure& mu, int depth,
                             long n_samples, std::uint64_t seed, int threads,
                             double fixed_tol, long node_budget) {
  if (n_samples < 1) throw InputError("coupled_agreement: need samples");
  double r = tv_distance(apply_map(spec, mu), mu);
  if (r > fixed_tol) {
    throw NotFixedPointError(
        "coupled_agreement: measure is not fixed by the map (residual " +
        std::to_string(r) + ")");
  }
  auto shared = std::make_shared<const RdeSpec>(spec);
  std::vector<std::uint8_t> agree(static_cast<std::size_t>(n_samples));
  CounterRng base(seed);
  parallel_for(n_samples, threads, [&](long s) {
    CounterRng per = base.derive(salt::kSample).derive(std::uint64_t(s));
    std::uint64_t tree_seed = per.derive(salt::kTreeNoise).next_u64();
    std::uint64_t seed_a = per.derive(salt::kBoundaryA).next_u64();
    std::uint64_t seed_b = per.derive(salt::kBoundaryB).next_u64();
    SampledTree tree = sample_tree(shared, depth, tree_seed, node_budget);
    int x = evaluate_root(tree, mu, seed_a);
    int y = evaluate_root(tree, mu, seed_b);
    agree[std::size_t(s)] = x == y ? 1 : 0;
  });
  long hits = 0;
  for (std::uint8_t a : agree) hits += a;
  double v = double(hits) / double(n_samples);
  double se = std::sqrt(std::max(0.0, v * (1.0 - v) / double(n_samples)));
  return McEstimate{v, n_samples, se, seed};
}

RootLawEstimate empirical_root_law(const RdeSpec& spec, const Measure& boundary,
                                   int depth, long n_samples,
                                   std::uint64_t seed, int threads,
                                   long node_budget) {
  if (n_samples < 1) throw InputError("empirical_root_law: need samples");
  auto shared = std::make_shared<const RdeSpec>(spec);
  std::vector<int> states(static_cast<std::size_t>(n_samples));
  CounterRng base(seed);
  parallel_for(n_samples, threads, [&](long s) {
    CounterRng per = base.derive(salt::kSample).derive(std::uint64_t(s));
    std::uint64_t tree_seed = per.derive(salt::kTreeNoise).next_u64();
    std::uint64_t bseed = per.derive(salt::kBoundaryA).next_u64();
    SampledTree tree = sample_tree(shared, depth, tree_seed, node_budget);
    states[std::size_t(s)] = evaluate_root(tree, boundary, bseed);
  });
  int m = spec.num_states();
  Vec counts = Vec::Zero(m);
  for (int x : states) counts(x) += 1.0;
  Vec freq = counts / double(n_samples);
  Vec se(m);
  for (int x = 0; x < m; ++x) {
    se(x) = std::sqrt(std::max(0.0, freq(x) * (1.0 - freq(x)) /
                                        double(n_samples)));
  }
  return RootLawEstimate{Measure(spec.space(), freq), se, n_samples, seed};
}

std::vector<Measure> sample_xi_roots(const RdeSpec& spec,
                                     const Measure& boundary_law, int depth,
                                     long n_samples, std::uint64_t seed,
                                     int threads, long node_budget) {
  if (n_samples < 1) throw InputError("sample_xi_roots: need samples");
  auto shared = std::make_shared<const RdeSpec>(spec);
  std::vector<std::optional<Measure>> out(static_cast<std::size_t>(n_samples));
  CounterRng base(seed);
  parallel_for(n_samples, threads, [&](long s) {
    CounterRng per = base.derive(salt::kSample).derive(std::uint64_t(s));
    std::uint64_t tree_seed = per.derive(salt::kTreeNoise).next_u64();
    SampledTree tree = sample_tree(shared, depth, tree_seed, node_budget);
    out[std::size_t(s)] = xi_root(tree, boundary_law);
  });
  std::vector<Measure> result;
  result.reserve(std::size_t(n_samples));
  for (auto& p : out) result.push_back(std::move(*p));
  return result;
}

}  // namespace rdelab
