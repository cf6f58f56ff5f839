#pragma once

#include <utility>
#include <vector>

#include "comb/comb_model.hpp"

namespace comb {

// ---- regime geography in the velocity plane ----

enum class Regime { oscillatory, airy_front, evanescent };
enum class Axis { tooth, spine, bulk };

struct RegimeLabel {
    Regime regime = Regime::oscillatory;
    Axis axis = Axis::tooth;
};

// (u_c, v_c) = (2, 3 sqrt(3)/4): ballistic front speeds along a tooth and
// along the spine.
std::pair<double, double> critical_velocities();

// Strict boundaries: u = 2 on the tooth axis and v = v_c on the spine axis
// get the airy_front label; the open bulk quadrant u, v > 0 is evanescent
// throughout.
RegimeLabel classify_regime(double u, double v);

// ---- tooth-direction saddles (z plane) ----

// z_pm(u) = -i u/2 pm sqrt(4 - u^2)/2, the stationary points of the tooth
// exponent i(z + 1/z - 2) - u log z. On the unit circle for u < 2 with
// z_plus = e^{-i phi}, z_minus = -e^{i phi}, phi = arcsin(u/2); merged at -i
// for u = 2; purely imaginary at -i e^{-+psi}, psi = arccosh(u/2), for u > 2
// (z_minus = -i e^{psi} carries the decaying exponent).
struct ToothSaddles {
    double u = 0;
    cplx z_plus, z_minus;
    double phi = 0;  // set for u <= 2
    double psi = 0;  // set for u >= 2
};

ToothSaddles tooth_saddles(double u);

// ---- return amplitude at the origin ----

// Large-t closed form for A_t(0,0;0,0) as the sum of the band-edge
// branch-point term (energy 16/3, order t^{-1/2}), the spectral-bottom
// saddle z = 1 (energy 0, order t^{-3/4}) and the band-threshold saddle
// z = -1 (energy 4, order t^{-3/2}).
struct ReturnAsymptotic {
    cplx total;
    cplx band_edge_term;
    cplx spectral_bottom_term;
    cplx band_threshold_term;
};

ReturnAsymptotic return_amplitude_asymptotic(double t);

// ---- tooth regime: amplitudes, coarse profile, envelope, decay rates ----

// A_t(0,0; n,j) at large t with u = j/t held fixed: two-saddle oscillatory
// sum for u < 2, Airy front for |u - 2| <= 4 t^{-2/3}, single-saddle
// exponential decay for u > 2. j = 0 queries route to the return form
// (n = 0) or the spine form (n != 0).
cplx tooth_amplitude_asymptotic(int n, int j, double t);

// Coarse-grained profile c(u, n): local mean of t |A|^2 over the
// oscillations around j = u t. Defined on 0 < u < 2.
double coarse_profile_tooth(double u, int n);

// Envelope pair (d_minus, d_plus) bounding the oscillation of t |A|^2 about
// c(u, 0); d_minus <= c(u, 0) <= d_plus on 0 < u < 2.
std::pair<double, double> tooth_bounds(double u);

// Exponential decay rate in t beyond the tooth front, u >= 2:
// varpi(u) = u log((u + sqrt(u^2 - 4))/2) - sqrt(u^2 - 4), zero at u = 2.
double tooth_decay_rate(double u);

// Local decay exponent in j of the evanescent tail, u >= 2:
// chi(u) = arccosh(u/2), the u-derivative of varpi; zero at u = 2.
double tooth_tail_exponent(double u);

// ---- spine-direction saddles (w plane) ----

// One root of the degree-6 stationary-point equation
//   i (w-1)^3 (w+1) (w^2+1) - u w (w^2-w+1)(w^2-1) - v w (w^2-w+1)^2 = 0
// annotated with the exponent W(w) = i(z + 1/z - 2) - u log z - v log w at
// z = w + 1/w - 1 and its second w-derivative.
struct SpineSaddleRoot {
    cplx w;
    int multiplicity = 1;
    double re_W = 0;
    double im_W = 0;
    cplx W_second;
};

struct SpineSaddles {
    double u = 0, v = 0;
    std::vector<SpineSaddleRoot> roots;  // six counted with multiplicity
};

// Companion-matrix eigenvalues polished by Newton iteration, clustered into
// multiplicity groups. RootFindingFailure if a polished root's residual
// exceeds 1e-12 relative to the Horner magnitude sum.
SpineSaddles spine_saddles(double u, double v);

// A_t(0,0; n,j) at large t with v = |n|/t held fixed and j fixed: two
// unit-circle saddles for v < v_c, Airy front for |v - v_c| <= 3 t^{-2/3},
// single off-circle saddle for v > v_c. The blend window is narrower than
// the tooth one because the Airy argument carries the extra factor sigma.
cplx spine_amplitude_asymptotic(int n, int j, double t);

// Coarse-grained profile Q(v, j): local mean of t |A|^2 over the
// oscillations around n = v t at tooth height j. Defined on 0 < v < v_c.
double coarse_profile_spine(double v, int j);

// Exponential decay rate in t beyond the spine front: chi(v) = -Re W at the
// picked saddle for v >= v_c, zero at v = v_c.
double spine_decay_rate(double v);

// ---- Airy function ----

// Ai(x) on [-20, 20], absolute error below 1e-10; RangeError outside.
double airy_ai(double x);

}  // namespace comb
