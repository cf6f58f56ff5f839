#pragma once

#include <array>
#include <utility>
#include <vector>

#include "comb/asymptotics.hpp"
#include "comb/comb_model.hpp"

namespace comb {

// The bulk exponent i(z + 1/z - 2) - u log z - v log w diverges at w = 0,
// e^{i pi/3}, e^{-i pi/3} and infinity; each pole has a sector where the
// real part drops to -inf. Downhill flow lines end in one of these four.
enum class Valley { center, upper_third, lower_third, infinity };

// One downhill branch of the flow dw/ds = -conj(W') / |W'| leaving a simple
// stationary point. The imaginary part of the exponent is conserved by the
// flow; im_drift accumulates the numerical leak, kept below 1e-8 by step
// rejection. The real part decreases strictly along points.
struct DescentPath {
    cplx seed;
    std::vector<cplx> points;  // seed first, valley entry last
    Valley terminal = Valley::center;
    double im_drift = 0.0;
};

// Both downhill branches from a simple stationary point of the exponent at
// velocities (u, v). DomainError if w_s is not a simple stationary point;
// StallError if the step size underflows before a valley is reached.
std::pair<DescentPath, DescentPath> trace_descent(const cplx& w_s, double u, double v);

// The six stationary points together with contour membership: relevant[k] is
// true when the steepest-descent deformation of a counterclockwise loop
// around the unit circle passes through saddles.roots[k]. Membership is
// decided by the uphill branches (the loop snags on a saddle exactly when
// its uphill branches end on opposite sides of the unit circle) and then
// cross-checked by assembling the downhill branches of the flagged saddles
// into a closed curve and verifying it winds once around each finite pole.
// ClassificationAmbiguous if the configuration is degenerate, the assembly
// check fails, or the point lies within the ambiguity tube around a phase
// coincidence of two saddles.
struct ContourSaddles {
    SpineSaddles saddles;
    std::vector<bool> relevant;
};

ContourSaddles relevant_saddles(double u, double v);

// Identities of the three contour-side saddles followed continuously from
// zero velocity: index 0 tracks the root that starts at -1, index 1 the root
// that starts at -i, index 2 the branch of the triple root at +1 that
// carries the decaying exponent. Continuation runs along the straight ray
// from the origin and refuses configurations that would drag a label
// through a coalescence (axis queries at or beyond a front velocity).
struct TrackedSaddles {
    std::array<SpineSaddleRoot, 3> w;
    std::array<bool, 3> relevant;
};

TrackedSaddles tracked_saddles(double u, double v);

// Decay-region code for the open quadrant. major: 'A' if all three tracked
// saddles lie on the contour, 'B' if the -1 track has dropped off, 'C' if
// the triple-branch track has dropped off, 'D' if only the -i track
// remains. sub: 1-based index of the observed magnitude ordering within the
// orderings that occur for that major region. dominance: tracked indices
// sorted by descending Re of the exponent.
struct RegionLabel {
    char major = 'A';
    int sub = 1;
    std::array<int, 3> dominance;
    TrackedSaddles saddles;
};

RegionLabel classify_region(double u, double v);

// Velocity on the u axis (between the tooth front at 2 and 3) where the -1
// saddle leaves the deformed contour, bisected to 1e-6.
double stokes_point_on_u_axis();

struct VelocityRect {
    double u_min = 0.05, u_max = 2.5;
    double v_min = 0.05, v_max = 2.5;
};

// Zero contour of Re W(w_a) - Re W(w_b) for two tracked saddles over the
// rectangle: the locus where their exponential magnitudes coincide. Returns
// the longest marching chain, each node polished along its grid edge until
// the residual is below 1e-8. Indices follow TrackedSaddles.
std::vector<std::pair<double, double>> anti_stokes_line(int a, int b,
                                                        const VelocityRect& box, int grid);

// Zero contour of Im W(w_a) - Im W(w_b) (principal branches): the locus
// where the two saddles' oscillation phases lock and contour membership can
// switch. Same conventions as anti_stokes_line.
std::vector<std::pair<double, double>> stokes_line(int a, int b,
                                                   const VelocityRect& box, int grid);

// Interior point where all three tracked saddles have equal Re W, located
// by damped Newton from a coarse scan; the three pairwise magnitude loci
// meet there.
std::pair<double, double> equal_magnitude_point();

// Large-t amplitude A_t(0,0; n,j) in the bulk (n >= 1, j >= 1, both
// coordinates scaling with t): sum of the Gaussian contributions of the
// contour-side saddles at u = j/t, v = n/t, traversed in the direction the
// deformed loop crosses them.
cplx bulk_amplitude_asymptotic(int n, int j, double t);

}  // namespace comb
