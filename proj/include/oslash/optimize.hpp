#pragma once

#include "oslash/distance.hpp"
#include "oslash/embedding.hpp"

namespace osl {

// Gradient-descent upper bounds on c_p: minimizes a smoothed max-stretch
// objective (log-sum-exp over the log pair ratios, temperature annealed)
// with Adam, over a few internal restarts, and returns the best
// configuration scaled to contraction exactly 1.  Deterministic for a fixed
// seed.  The true distortion of the result is always a valid upper bound,
// however far the optimizer is from the optimum.
PointConfig optimize_embedding(const DistanceMatrix& d, double p, int dim,
                               unsigned seed, int iters);

}  // namespace osl
