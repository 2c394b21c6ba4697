#include "rdelab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rdelab/errors.hpp"

namespace rdelab {

namespace {

// m^n with a cap; the dense representation must stay addressable.
long pow_checked(int m, int n, long cap = kDefaultTensorBudget) {
  long r = 1;
  for (int i = 0; i < n; ++i) {
    if (r > cap / m) {
      throw BudgetError("dense tensor would exceed entry budget (" +
                        std::to_string(cap) + " entries)");
    }
    r *= m;
  }
  return r;
}

void check_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) {
    throw InputError(std::string(what) + " contains a non-finite value");
  }
}

// Shared validation for probability weights: reject genuine negatives, clamp
// roundoff-level ones, require the sum to sit within `sum_tol` of 1, then
// renormalize exactly.
void normalize_weights(Vec& w, double sum_tol, const char* what) {
  check_finite(w, what);
  for (long i = 0; i < w.size(); ++i) {
    if (w(i) < -kNormTol) {
      throw InputError(std::string(what) + ": negative weight " +
                       std::to_string(w(i)) + " at position " +
                       std::to_string(i));
    }
    if (w(i) < 0.0) w(i) = 0.0;
  }
  double s = w.sum();
  if (std::abs(s - 1.0) > sum_tol) {
    throw InputError(std::string(what) + ": weights sum to " +
                     std::to_string(s) + ", not 1");
  }
  if (s != 1.0 && s > 0.0) w /= s;
}

void require_same_space(const StateSpacePtr& a, const StateSpacePtr& b,
                        const char* what) {
  if (!same_space(a, b)) {
    throw InputError(std::string(what) + ": state spaces differ");
  }
}

}  // namespace

Measure::Measure(StateSpacePtr space, Vec weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (!space_) throw InputError("measure: null state space");
  if (weights_.size() != space_->size()) {
    throw InputError("measure: expected " + std::to_string(space_->size()) +
                     " weights, got " + std::to_string(weights_.size()));
  }
  normalize_weights(weights_, kNormTol, "measure");
}

Measure Measure::point_mass(StateSpacePtr space, int state) {
  if (!space) throw InputError("point_mass: null state space");
  if (state < 0 || state >= space->size()) {
    throw InputError("point_mass: state index out of range");
  }
  Vec w = Vec::Zero(space->size());
  w(state) = 1.0;
  return Measure(std::move(space), std::move(w));
}

Measure Measure::uniform(StateSpacePtr space) {
  if (!space) throw InputError("uniform: null state space");
  int m = space->size();
  return Measure(std::move(space), Vec::Constant(m, 1.0 / m));
}

TensorMeasure::TensorMeasure(StateSpacePtr space, int order, Vec entries)
    : space_(std::move(space)), order_(order), entries_(std::move(entries)) {
  if (!space_) throw InputError("tensor measure: null state space");
  if (order_ < 1 || order_ > kMaxTensorOrder) {
    throw InputError("tensor measure: order must be 1.." +
                     std::to_string(kMaxTensorOrder) + ", got " +
                     std::to_string(order_));
  }
  long expect = pow_checked(space_->size(), order_);
  if (entries_.size() != expect) {
    throw InputError("tensor measure: expected " + std::to_string(expect) +
                     " entries, got " + std::to_string(entries_.size()));
  }
  normalize_weights(entries_, kNormTol * double(expect), "tensor measure");
}

long TensorMeasure::flat_index(std::span<const int> coords) const {
  if (int(coords.size()) != order_) {
    throw InputError("flat_index: expected " + std::to_string(order_) +
                     " coordinates");
  }
  int m = num_states();
  long idx = 0;
  for (int c : coords) {
    if (c < 0 || c >= m) throw InputError("flat_index: coordinate out of range");
    idx = idx * m + c;
  }
  return idx;
}

void TensorMeasure::coords_of(long flat, std::span<int> coords) const {
  int m = num_states();
  for (int j = order_ - 1; j >= 0; --j) {
    coords[j] = int(flat % m);
    flat /= m;
  }
}

SimplexAtomMeasure::SimplexAtomMeasure(StateSpacePtr space,
                                       std::vector<Atom> atoms)
    : space_(std::move(space)), atoms_(std::move(atoms)) {
  if (!space_) throw InputError("atom measure: null state space");
  if (atoms_.empty()) throw InputError("atom measure: no atoms");
  Vec w(long(atoms_.size()));
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    require_same_space(space_, atoms_[i].point.space(), "atom measure");
    w(long(i)) = atoms_[i].weight;
  }
  normalize_weights(w, kNormTol, "atom measure");
  for (std::size_t i = 0; i < atoms_.size(); ++i) atoms_[i].weight = w(long(i));
}

TensorMeasure product(std::span<const Measure> factors) {
  if (factors.empty() || int(factors.size()) > kMaxTensorOrder) {
    throw InputError("product: need 1.." + std::to_string(kMaxTensorOrder) +
                     " factors");
  }
  const StateSpacePtr& space = factors[0].space();
  for (const auto& f : factors) {
    require_same_space(space, f.space(), "product");
  }
  int n = int(factors.size());
  int m = space->size();
  long total = pow_checked(m, n);
  Vec entries(total);
  std::vector<int> c(n, 0);
  for (long flat = 0; flat < total; ++flat) {
    long rest = flat;
    for (int j = n - 1; j >= 0; --j) {
      c[j] = int(rest % m);
      rest /= m;
    }
    double v = 1.0;
    for (int j = 0; j < n; ++j) v *= factors[j](c[j]);
    entries(flat) = v;
  }
  return TensorMeasure(space, n, std::move(entries));
}

TensorMeasure product(const Measure& a, const Measure& b) {
  const Measure fs[] = {a, b};
  return product(std::span<const Measure>(fs, 2));
}

TensorMeasure product(const Measure& a, const Measure& b, const Measure& c) {
  const Measure fs[] = {a, b, c};
  return product(std::span<const Measure>(fs, 3));
}

TensorMeasure marginal(const TensorMeasure& nu, std::span<const int> coords) {
  int n = nu.order();
  int k = int(coords.size());
  if (k < 1 || k > n) {
    throw InputError("marginal: need between 1 and order coordinates");
  }
  std::vector<bool> used(n, false);
  for (int c : coords) {
    if (c < 1 || c > n) {
      throw InputError("marginal: coordinate " + std::to_string(c) +
                       " out of range 1.." + std::to_string(n));
    }
    if (used[c - 1]) {
      throw InputError("marginal: repeated coordinate " + std::to_string(c));
    }
    used[c - 1] = true;
  }
  int m = nu.num_states();
  long out_total = 1;
  for (int j = 0; j < k; ++j) out_total *= m;
  Vec out = Vec::Zero(out_total);
  std::vector<int> c(n);
  for (long flat = 0; flat < nu.entry_count(); ++flat) {
    nu.coords_of(flat, c);
    long out_flat = 0;
    for (int j = 0; j < k; ++j) out_flat = out_flat * m + c[coords[j] - 1];
    out(out_flat) += nu[flat];
  }
  return TensorMeasure(nu.space(), k, std::move(out));
}

Measure as_measure(const TensorMeasure& nu) {
  if (nu.order() != 1) {
    throw InputError("as_measure: tensor must have order 1");
  }
  return Measure(nu.space(), nu.entries());
}

TensorMeasure diagonal_measure(const Measure& mu, int n) {
  if (n < 2 || n > kMaxTensorOrder) {
    throw InputError("diagonal_measure: order must be 2.." +
                     std::to_string(kMaxTensorOrder));
  }
  int m = mu.size();
  long total = pow_checked(m, n);
  Vec entries = Vec::Zero(total);
  for (int x = 0; x < m; ++x) {
    long flat = 0;
    for (int j = 0; j < n; ++j) flat = flat * m + x;
    entries(flat) = mu(x);
  }
  return TensorMeasure(mu.space(), n, std::move(entries));
}

TensorMeasure moment_measure(const SimplexAtomMeasure& rho, int n) {
  if (n < 1 || n > kMaxTensorOrder) {
    throw InputError("moment_measure: order must be 1.." +
                     std::to_string(kMaxTensorOrder));
  }
  int m = rho.space()->size();
  long total = pow_checked(m, n);
  Vec entries = Vec::Zero(total);
  std::vector<int> c(n);
  for (const Atom& a : rho.atoms()) {
    for (long flat = 0; flat < total; ++flat) {
      long rest = flat;
      double v = a.weight;
      for (int j = n - 1; j >= 0; --j) {
        v *= a.point(int(rest % m));
        rest /= m;
      }
      entries(flat) += v;
    }
  }
  return TensorMeasure(rho.space(), n, std::move(entries));
}

Measure first_moment(const SimplexAtomMeasure& rho) {
  Vec w = Vec::Zero(rho.space()->size());
  for (const Atom& a : rho.atoms()) w += a.weight * a.point.weights();
  return Measure(rho.space(), std::move(w));
}

double diagonal_mass(const TensorMeasure& nu) {
  if (nu.order() != 2) {
    throw InputError("diagonal_mass: tensor must have order 2");
  }
  int m = nu.num_states();
  double s = 0.0;
  for (int x = 0; x < m; ++x) s += nu[long(x) * m + x];
  return s;
}

double tv_distance(const Measure& a, const Measure& b) {
  require_same_space(a.space(), b.space(), "tv_distance");
  return 0.5 * (a.weights() - b.weights()).cwiseAbs().sum();
}

double tv_distance(const TensorMeasure& a, const TensorMeasure& b) {
  require_same_space(a.space(), b.space(), "tv_distance");
  if (a.order() != b.order()) {
    throw InputError("tv_distance: tensor orders differ");
  }
  return 0.5 * (a.entries() - b.entries()).cwiseAbs().sum();
}

Mat second_moment_matrix(const SimplexAtomMeasure& rho) {
  int m = rho.space()->size();
  Mat M = Mat::Zero(m, m);
  for (const Atom& a : rho.atoms()) {
    M += a.weight * (a.point.weights() * a.point.weights().transpose());
  }
  return M;
}

namespace {

struct Cluster {
  double weight;
  Vec coord_sum;  // weight-scaled coordinate accumulator
  Vec anchor;     // first point, used for merge tests during the sweep

  Vec mean() const { return coord_sum / weight; }
};

bool lex_less(const Vec& a, const Vec& b) {
  for (long i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return false;
}

double sup_dist(const Vec& a, const Vec& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

SimplexAtomMeasure canonicalize(const SimplexAtomMeasure& rho,
                                double merge_eps) {
  if (merge_eps < 0.0 || !std::isfinite(merge_eps)) {
    throw InputError("canonicalize: merge tolerance must be finite and >= 0");
  }
  std::vector<const Atom*> live;
  live.reserve(rho.atoms().size());
  for (const Atom& a : rho.atoms()) {
    if (a.weight > 0.0) live.push_back(&a);
  }
  if (live.empty()) throw InputError("canonicalize: all atoms have weight 0");
  std::sort(live.begin(), live.end(), [](const Atom* a, const Atom* b) {
    return lex_less(a->point.weights(), b->point.weights());
  });

  // Sweep in lexicographic order, merging runs close to a cluster anchor.
  std::vector<Cluster> clusters;
  for (const Atom* a : live) {
    const Vec& p = a->point.weights();
    if (!clusters.empty() && sup_dist(p, clusters.back().anchor) <= merge_eps) {
      clusters.back().weight += a->weight;
      clusters.back().coord_sum += a->weight * p;
    } else {
      clusters.push_back({a->weight, a->weight * p, p});
    }
  }

  // The sweep can leave representatives within tolerance when close points
  // interleave lexicographically; fold those until stable. First coordinates
  // are sorted, so only a short window ahead can be within reach.
  bool merged = true;
  while (merged && clusters.size() > 1) {
    merged = false;
    std::sort(clusters.begin(), clusters.end(),
              [](const Cluster& a, const Cluster& b) {
                return lex_less(a.mean(), b.mean());
              });
    std::vector<Cluster> next;
    std::vector<bool> gone(clusters.size(), false);
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      if (gone[i]) continue;
      Cluster cur = clusters[i];
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        if (gone[j]) continue;
        Vec mi = cur.mean();
        Vec mj = clusters[j].mean();
        if (mj(0) - mi(0) > merge_eps) break;
        if (sup_dist(mi, mj) <= merge_eps) {
          cur.weight += clusters[j].weight;
          cur.coord_sum += clusters[j].coord_sum;
          gone[j] = true;
          merged = true;
        }
      }
      next.push_back(std::move(cur));
    }
    clusters = std::move(next);
  }

  std::sort(clusters.begin(), clusters.end(),
            [](const Cluster& a, const Cluster& b) {
              return lex_less(a.mean(), b.mean());
            });
  std::vector<Atom> atoms;
  atoms.reserve(clusters.size());
  for (const Cluster& c : clusters) {
    atoms.push_back({c.weight, Measure(rho.space(), c.mean())});
  }
  return SimplexAtomMeasure(rho.space(), std::move(atoms));
}

SymmetryReport symmetry_check(const TensorMeasure& nu, double tol) {
  int n = nu.order();
  int m = nu.num_states();
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  while (std::next_permutation(p.begin(), p.end())) perms.push_back(p);

  double worst = 0.0;
  std::vector<int> c(n), pc(n);
  for (long flat = 0; flat < nu.entry_count(); ++flat) {
    nu.coords_of(flat, c);
    for (const auto& perm : perms) {
      for (int j = 0; j < n; ++j) pc[j] = c[perm[j]];
      long pflat = 0;
      for (int j = 0; j < n; ++j) pflat = pflat * m + pc[j];
      worst = std::max(worst, std::abs(nu[flat] - nu[pflat]));
    }
  }
  return {worst <= tol, worst};
}

}  // namespace rdelab
