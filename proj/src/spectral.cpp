#include "comb/spectral.hpp"

#include <cmath>

#include "comb/quadrature.hpp"

namespace comb {

static const double PI = std::acos(-1.0);

cplx extended_eigenfunction(double alpha, double theta, const Vertex& v) {
    if (v.j < 0) throw DomainError("extended_eigenfunction: j must be >= 0");
    const double y = 1.0 - 2.0 * std::cos(alpha);
    const cplx eit(std::cos(theta), std::sin(theta));
    const cplx A = y + eit;
    const cplx B = -(y + std::conj(eit));
    const cplx en(std::cos(alpha * v.n), std::sin(alpha * v.n));
    const cplx ejt(std::cos(theta * v.j), std::sin(theta * v.j));
    return en * (A * ejt + B * std::conj(ejt));
}

double extended_norm(double alpha, double theta) {
    const double y = 1.0 - 2.0 * std::cos(alpha);
    return 4.0 * PI * PI * (y * y + 2.0 * y * std::cos(theta) + 1.0);
}

bool extended_norm_degenerate(double alpha, double theta, double eps) {
    return extended_norm(alpha, theta) < eps;
}

LocalizedState localized_state(double alpha) {
    double a = std::fmod(alpha, 2.0 * PI);
    if (a < 0) a += 2.0 * PI;
    if (!(a > PI / 2 && a < 3 * PI / 2))
        throw DomainError("localized_state: alpha must lie strictly inside (pi/2, 3 pi/2)");
    const double g = 1.0 - 2.0 * std::cos(alpha);
    LocalizedState s;
    s.gamma = std::log(g);
    s.energy = 2.0 + g + 1.0 / g;  // 2 + 2 cosh(gamma)
    s.c = std::sqrt((1.0 - 1.0 / (g * g)) / (2.0 * PI));
    return s;
}

cplx localized_eigenfunction(double alpha, const Vertex& v) {
    if (v.j < 0) throw DomainError("localized_eigenfunction: j must be >= 0");
    LocalizedState s = localized_state(alpha);
    const double sign = (v.j % 2 == 0) ? 1.0 : -1.0;
    const cplx en(std::cos(alpha * v.n), std::sin(alpha * v.n));
    return s.c * sign * std::exp(-s.gamma * v.j) * en;
}

cplx completeness_defect(const Vertex& v1, const Vertex& v2, const CompletenessQuad& quad) {
    if (quad.n_theta < 2 || quad.n_alpha < 8 || quad.n_localized < 2)
        throw DomainError("completeness_defect: quadrature too coarse");

    cplx total(0.0, 0.0);

    // scattering part: Gauss-Legendre in theta, periodic trapezoid in a
    // reparametrized alpha.  alpha(s) = s + 0.45 sin(2s) clusters nodes near
    // alpha = pi/2 and 3 pi/2, where the integrand sharpens against the band edge.
    const GaussRule th = gauss_legendre_on(quad.n_theta, 0.0, PI);
    const double ds = 2.0 * PI / quad.n_alpha;
    for (int it = 0; it < quad.n_theta; ++it) {
        const double theta = th.x[it];
        cplx alpha_sum(0.0, 0.0);
        for (int ia = 0; ia < quad.n_alpha; ++ia) {
            const double s = ia * ds;
            const double alpha = s + 0.45 * std::sin(2.0 * s);
            const double jac = 1.0 + 0.9 * std::cos(2.0 * s);
            const double N = extended_norm(alpha, theta);
            const cplx f1 = extended_eigenfunction(alpha, theta, v1);
            const cplx f2 = extended_eigenfunction(alpha, theta, v2);
            alpha_sum += jac * f1 * std::conj(f2) / N;
        }
        total += th.w[it] * alpha_sum * ds;
    }

    // bound-band part, analytic across (pi/2, 3 pi/2)
    const GaussRule loc = gauss_legendre_on(quad.n_localized, PI / 2, 3 * PI / 2);
    for (int k = 0; k < quad.n_localized; ++k) {
        const cplx f1 = localized_eigenfunction(loc.x[k], v1);
        const cplx f2 = localized_eigenfunction(loc.x[k], v2);
        total += loc.w[k] * f1 * std::conj(f2);
    }

    if (v1 == v2) total -= 1.0;
    return total;
}

}  // namespace comb
