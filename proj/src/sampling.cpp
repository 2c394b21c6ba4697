#include "rdelab/sampling.hpp"

#include <cmath>

#include "rdelab/errors.hpp"

namespace rdelab {

Measure random_measure(CounterRng& rng, const StateSpacePtr& space) {
  if (!space) throw InputError("random_measure: null state space");
  int m = space->size();
  Vec w(m);
  for (int i = 0; i < m; ++i) {
    w(i) = -std::log1p(-rng.next_unit());  // Exp(1)
  }
  double s = w.sum();
  if (s <= 0.0) return Measure::uniform(space);
  return Measure(space, w / s);
}

TensorMeasure random_symmetric_coupling(CounterRng& rng, const Measure& mu) {
  int m = mu.size();
  Mat W(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) W(i, j) = 0.1 + rng.next_unit();
  }
  W = 0.5 * (W + W.transpose()).eval();

  // Symmetric biproportional fit: find d with diag(d) W diag(d) having row
  // sums mu. Gauss-Seidel updates keep the iterate symmetric by construction.
  Vec d = Vec::Ones(m);
  for (int i = 0; i < m; ++i) {
    if (mu(i) == 0.0) d(i) = 0.0;
  }
  for (int iter = 0; iter < 2000; ++iter) {
    for (int i = 0; i < m; ++i) {
      if (mu(i) == 0.0) continue;
      double denom = W.row(i).dot(d);
      if (denom > 0.0) d(i) = mu(i) / denom;
    }
    double err = 0.0;
    for (int i = 0; i < m; ++i) {
      double rowsum = d(i) * W.row(i).dot(d);
      err = std::max(err, std::abs(rowsum - mu(i)));
    }
    if (err <= 1e-14) break;
  }
  Mat K = d.asDiagonal() * W * d.asDiagonal();
  // Absorb the leftover fit error into the diagonal so row sums match mu
  // exactly; stays symmetric. Fall back to a product/diagonal blend in the
  // (never observed) case the residual outweighs a diagonal entry.
  bool corrected = true;
  Vec leftover(m);
  for (int i = 0; i < m; ++i) {
    leftover(i) = mu(i) - K.row(i).sum();
    if (K(i, i) + leftover(i) < 0.0) corrected = false;
  }
  if (corrected) {
    for (int i = 0; i < m; ++i) K(i, i) += leftover(i);
  } else {
    K = mu.weights() * mu.weights().transpose();
  }

  double a = rng.next_unit();
  double b = rng.next_unit() * (1.0 - a);
  Mat D = Mat::Zero(m, m);
  for (int i = 0; i < m; ++i) D(i, i) = mu(i);
  Mat P = mu.weights() * mu.weights().transpose();
  Mat mixed = a * K + b * D + (1.0 - a - b) * P;

  Vec entries(long(m) * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) entries(long(i) * m + j) = mixed(i, j);
  }
  return TensorMeasure(mu.space(), 2, std::move(entries));
}

}  // namespace rdelab
