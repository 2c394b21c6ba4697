#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "rdelab/state_space.hpp"

namespace rdelab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Weights within this distance of a unit sum are renormalized on
// construction; anything further off is rejected.
inline constexpr double kNormTol = 1e-12;

// Dense tensors are kept to low order; higher orders are out of scope for the
// exact routines.
inline constexpr int kMaxTensorOrder = 3;

// Cap on dense tensor work per coupled-map application (entries touched).
inline constexpr long kDefaultTensorBudget = 10'000'000;

// Cap on atoms a measure over the simplex may accumulate in exact mode.
inline constexpr long kDefaultAtomBudget = 100'000;

// Probability measure on a finite state space.
class Measure {
 public:
  Measure(StateSpacePtr space, Vec weights);

  static Measure point_mass(StateSpacePtr space, int state);
  static Measure uniform(StateSpacePtr space);

  const StateSpacePtr& space() const { return space_; }
  int size() const { return int(weights_.size()); }
  const Vec& weights() const { return weights_; }
  double operator()(int state) const { return weights_(state); }

 private:
  StateSpacePtr space_;
  Vec weights_;
};

// Probability measure on the n-fold product of a state space, stored as a
// flat dense vector. Coordinate 1 is the most significant digit:
//   flat index of (s_1,...,s_n) = sum_j s_j * m^(n-j),  m = |space|.
class TensorMeasure {
 public:
  TensorMeasure(StateSpacePtr space, int order, Vec entries);

  const StateSpacePtr& space() const { return space_; }
  int order() const { return order_; }
  int num_states() const { return space_->size(); }
  long entry_count() const { return entries_.size(); }
  const Vec& entries() const { return entries_; }
  double operator[](long flat) const { return entries_(flat); }

  long flat_index(std::span<const int> coords) const;
  // Inverse of flat_index; writes `order()` coordinates.
  void coords_of(long flat, std::span<int> coords) const;

 private:
  StateSpacePtr space_;
  int order_;
  Vec entries_;
};

struct Atom {
  double weight;
  Measure point;
};

// Finitely supported probability measure on the simplex of measures: a
// weighted list of points, each point itself a Measure on the base space.
class SimplexAtomMeasure {
 public:
  SimplexAtomMeasure(StateSpacePtr space, std::vector<Atom> atoms);

  const StateSpacePtr& space() const { return space_; }
  int size() const { return int(atoms_.size()); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const Atom& atom(int i) const { return atoms_.at(i); }

 private:
  StateSpacePtr space_;
  std::vector<Atom> atoms_;
};

// Product measure of 1 to kMaxTensorOrder factors over a shared space.
TensorMeasure product(std::span<const Measure> factors);
TensorMeasure product(const Measure& a, const Measure& b);
TensorMeasure product(const Measure& a, const Measure& b, const Measure& c);

// Pushforward under (x_1,...,x_n) -> (x_{coords[0]},...,x_{coords[k-1]}).
// Coordinates are 1-based, distinct, and may permute; the result has order
// coords.size().
TensorMeasure marginal(const TensorMeasure& nu, std::span<const int> coords);

Measure as_measure(const TensorMeasure& nu);  // order-1 tensors only

// Mass mu(x) placed at (x,...,x); n in {2,3}.
TensorMeasure diagonal_measure(const Measure& mu, int n);

// n-th moment measure sum_i w_i * point_i^(x n); n in {1,...,kMaxTensorOrder}.
TensorMeasure moment_measure(const SimplexAtomMeasure& rho, int n);

// Barycenter of rho, i.e. its first moment measure as a Measure.
Measure first_moment(const SimplexAtomMeasure& rho);

// Mass on the diagonal of an order-2 tensor; equals 1 exactly when the two
// coordinates agree almost surely.
double diagonal_mass(const TensorMeasure& nu);

double tv_distance(const Measure& a, const Measure& b);
double tv_distance(const TensorMeasure& a, const TensorMeasure& b);

// Second moment of rho as a symmetric |S| x |S| matrix.
Mat second_moment_matrix(const SimplexAtomMeasure& rho);

// Canonical form: atoms with points within merge_eps (sup-norm) are merged
// into their weighted mean, zero-weight atoms are dropped, and the result is
// sorted lexicographically by point coordinates. The default tolerance only
// collapses numerically identical points. Preserves the first moment up to
// merge_eps plus roundoff.
SimplexAtomMeasure canonicalize(const SimplexAtomMeasure& rho,
                                double merge_eps = kNormTol);

struct SymmetryReport {
  bool symmetric;
  double max_asymmetry;  // max |nu(x) - nu(permuted x)| over all permutations
};

SymmetryReport symmetry_check(const TensorMeasure& nu, double tol = kNormTol);

}  // namespace rdelab
