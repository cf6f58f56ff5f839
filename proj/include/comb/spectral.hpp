#pragma once

#include "comb/comb_model.hpp"

namespace comb {

// Tooth-bound state parameters for spine momentum alpha in (pi/2, 3 pi/2):
// decay rate gamma with e^gamma = 1 - 2 cos(alpha) > 1, energy 2 + 2 cosh(gamma),
// and real normalization constant c with c^2 = (1 - e^{-2 gamma}) / (2 pi).
struct LocalizedState {
    double gamma;
    double energy;
    double c;
};

// Scattering eigenfunction with spine momentum alpha and tooth momentum theta,
// energy 2 - 2 cos(theta).  On the spine it reduces to 2 i sin(theta) e^{i alpha n}.
cplx extended_eigenfunction(double alpha, double theta, const Vertex& v);

// Density normalization N(alpha, theta) = 4 pi^2 (y^2 + 2 y cos(theta) + 1),
// y = 1 - 2 cos(alpha).  Vanishes only where the scattering family degenerates.
double extended_norm(double alpha, double theta);

// True when N is below eps; callers integrate around these points instead of
// dividing through them.
bool extended_norm_degenerate(double alpha, double theta, double eps = 1e-10);

LocalizedState localized_state(double alpha);

// c e^{i alpha n} (-1)^j e^{-gamma j}
cplx localized_eigenfunction(double alpha, const Vertex& v);

// Node counts for the completeness quadrature.  alpha runs over a full period
// (trapezoid with corner-clustering reparametrization), theta over (0, pi)
// (Gauss-Legendre), the bound-state band over (pi/2, 3 pi/2) (Gauss-Legendre).
struct CompletenessQuad {
    int n_theta = 128;
    int n_alpha = 2048;
    int n_localized = 128;
};

// Spectral resolution of the identity evaluated between two delta states:
// scattering double integral plus bound-band integral minus the Kronecker delta.
cplx completeness_defect(const Vertex& v1, const Vertex& v2, const CompletenessQuad& quad = {});

}  // namespace comb
