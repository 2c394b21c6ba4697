#pragma once

#include "rdelab/measure.hpp"
#include "rdelab/rng.hpp"

namespace rdelab {

// Measure with Dirichlet(1,...,1)-distributed weights.
Measure random_measure(CounterRng& rng, const StateSpacePtr& space);

// Random coupling of (mu, mu): a symmetric order-2 tensor whose both
// marginals are mu. Built by symmetric biproportional scaling of a random
// positive matrix, then mixed with the diagonal and independent couplings at
// random weights. States with zero mass keep empty rows and columns.
TensorMeasure random_symmetric_coupling(CounterRng& rng, const Measure& mu);

}  // namespace rdelab
