#pragma once

#include <vector>

#include "comb/comb_model.hpp"

namespace comb {

// J_0(y) .. J_K(y) by downward (Miller) recurrence with sum-rule normalization.
// Relative accuracy near machine precision for the non-negligible entries.
std::vector<double> bessel_j_sequence(double y, int K);

// Window large enough that boundary truncation is below machine noise for
// propagation up to time t: polynomial filters of degree ~3t reach graph
// distance ~3t, so L = M = ceil(3 t) + margin.
Truncation truncation_for(double t, int margin = 40);

// Chebyshev expansion of exp(-i t H) applied to psi0 on psi0's own window.
// The coefficient tail is driven below tol/10; the polynomial degree is capped
// at 16 (|t|+1), past which ToleranceNotReached is thrown.
WaveState evolve(const WaveState& psi0, double t, double tol = 1e-10);

// Matrix element <target| exp(-i t H) |origin> on the default window for t.
cplx amplitude_exact(const Vertex& origin, const Vertex& target, double t, double tol = 1e-10);

}  // namespace comb
