#pragma once

#include <vector>

#include "comb/comb_model.hpp"
#include "comb/errors.hpp"

namespace comb {

// ---- two-sheeted square root and the z <-> w mapping ----

enum class Sheet { first, second };

struct CutPoint {
    cplx z;
    Sheet sheet = Sheet::first;
};

// First-sheet S(z) = sqrt((z+3)(z-1)) with cut on [-3, 1], S(z) ~ z for
// large |z| and S > 0 on (1, inf). Throws OnCutError for z on the cut.
cplx sqrt_cut(const cplx& z);

// S evaluated on either sheet; the second sheet negates the first.
cplx sqrt_sheet(const CutPoint& p);

// w_pm = (1 + z)/2 +- S(z)/2; w_plus w_minus = 1, |w_minus| < 1 < |w_plus|.
cplx w_plus(const cplx& z);
cplx w_minus(const cplx& z);

// Inverse mapping z(w) = w + 1/w - 1.
cplx z_of_w(const cplx& w);

// i(z + 1/z - 2) - u log z - v log w_plus(z), principal logs. Terms with a
// zero coefficient are skipped so e.g. the u = v = 0 form is defined on the
// cut interior where w_plus is not.
cplx potential(const cplx& z, double u, double v);

// Same exponent through w: i(z + 1/z - 2) - u log z(w) - v log w.
cplx potential_w(const cplx& w, double u, double v);

// ---- closed-contour amplitude quadrature ----

enum class ContourKind { ellipse_around_cut, custom_polyline };

struct ContourSpec {
    ContourKind kind = ContourKind::ellipse_around_cut;
    // ellipse z = -1 + 2 cosh(rho + i theta), confocal with the cut endpoints
    double rho = 0.45;
    // starting node count; doubled until two successive passes agree
    int nodes = 64;
    // closed counter-clockwise loop around [-3, 1] for custom_polyline
    std::vector<cplx> polyline;
};

// max over the contour of Re[i(z + 1/z - 2)], the growth rate that limits
// how far in t double-precision quadrature stays certified
double max_growth_rate(const ContourSpec& spec);

// A_t(0, j0; n, j) as delta_{n,0} A0 + Areg, where
//   Areg = (1/2 pi i) oint (1 - z^-2)/S(z) w_minus^{|n|} z^{-(j+j0)} e^{-it(2-z-1/z)} dz
//   A0   = (1/2 pi i) oint z^{-j-1} (z^{j0} - z^{-j0}) e^{-it(2-z-1/z)} dz
// (A0 vanishes identically at j0 = 0). Node count doubles until two passes
// agree within tol; QuadratureDivergence if the round-off bound
// e^{t max Re V} eps exceeds tol or doubling fails to settle.
cplx amplitude_contour(int n, int j, double t, int j0 = 0,
                       const ContourSpec& spec = ContourSpec{},
                       double tol = 1e-9);

}  // namespace comb
