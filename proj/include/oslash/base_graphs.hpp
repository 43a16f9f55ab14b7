#pragma once

#include <vector>

#include "oslash/graph.hpp"
#include "oslash/layered.hpp"

namespace osl {

// A finite group of graph automorphisms given explicitly as permutations of
// the vertex set.  Actions attached to base graphs are transitive (rotations
// of a circulant, translations of a hypercube); actions lifted to stretched
// graphs are not, since endpoints stay fixed.
struct GroupAction {
  std::vector<std::vector<int>> perms;

  int degree() const { return perms.empty() ? 0 : (int)perms[0].size(); }
  std::size_t size() const { return perms.size(); }
};

struct BaseGraph {
  MetricGraph g;
  GroupAction action;
};

// Single edge with the swap action; the smallest usable base.
BaseGraph k2();

// Circulant graph on Z_m with connection set gens (symmetrized, mod m);
// action = the m rotations.  Rejects empty connection sets and disconnected
// choices (gcd(gens, m) > 1).
BaseGraph cayley_cycle(int m, std::vector<int> gens);

// r-dimensional hypercube with the 2^r translations.
BaseGraph hypercube(int r);

// True iff every permutation is an automorphism of g (edges map to edges of
// equal length) and the set is closed under composition and contains the
// identity; transitivity additionally required unless require_transitive is
// false.
bool action_check(const GroupAction& a, const MetricGraph& g, bool require_transitive = true);

// Lifts a base action to a stretched graph: pi~ maps v^(i) to (pi v)^(i) and
// fixes every endpoint/tail vertex.  Postcondition: the lift passes
// action_check on lg.st.g without the transitivity requirement.
GroupAction lift_action(const GroupAction& a, const LayeredGraph& lg);

struct SpectralReport {
  double mu2 = 0;       // second-smallest Laplacian eigenvalue, clamped at 0
  int degree = 0;
  int n = 0;
  double residual = 0;  // ||L x - mu2 x|| / ||x|| for the computed eigenpair
};

// Laplacian spectral gap of a regular unit-length graph.
SpectralReport mu2(const MetricGraph& g);

}  // namespace osl
