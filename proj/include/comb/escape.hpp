#pragma once

#include "comb/comb_model.hpp"

namespace comb {

// Late-time escape probabilities for the walk started at the origin: the mass
// that ends up travelling along tooth n, or sitting at height j while it
// spreads along the spine.

// Probability of escaping along tooth n (column n of the comb).
double prob_tooth(int n);

// Total probability over all teeth, via geometric resummation of the
// per-tooth weights.
double prob_teeth_total();

// Probability of ending at height j in the ballistic spine wave.
double prob_spine_dist(int j);

// Total probability carried by the spine wave.
double prob_spine_total();

// Generalizations for a start at height j0 on the central tooth. The escape
// probability into any other tooth does not depend on j0; the central tooth
// captures more of the wave as j0 grows.
double prob_tooth_j0(int n, int j0);
double prob_teeth_total_j0(int j0);
double prob_spine_total_j0(int j0);

// Coarse-grained velocity profile along the central tooth for a start at
// height j0: the local mean of t |A|^2 at tooth velocity u, including the
// interference between the direct and the spine-bounced wave.
double profile_initial_tooth(double u, int j0);

}  // namespace comb
