#include "comb/escape.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>

#include "comb/asymptotics.hpp"
#include "comb/contour.hpp"
#include "comb/errors.hpp"
#include "comb/quadrature.hpp"

namespace comb {

namespace {

constexpr double pi = 3.14159265358979323846;

// |w_-(e^{-i phi})|^2, the squared modulus of the bounded tooth root on the
// lower edge of the unit circle.
double tooth_weight(double phi) {
    return std::norm(w_minus(std::polar(1.0, -phi)));
}

// sqrt((5 + 3 cos phi)(1 - cos phi)) in the half-angle form that stays
// accurate when phi is small.
double arc_measure(double phi) {
    return std::sqrt(2.0 * (5.0 + 3.0 * std::cos(phi))) * std::sin(0.5 * phi);
}

double composite(const std::function<double(double)>& f, double a, double b, int panels) {
    const GaussRule& g = gauss_legendre(24);
    const double width = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        double acc = 0.0;
        for (size_t i = 0; i < g.x.size(); ++i) {
            const double x = lo + 0.5 * width * (g.x[i] + 1.0);
            acc += g.w[i] * f(x);
        }
        total += acc * 0.5 * width;
    }
    return total;
}

// Evaluates at the given panel count and at twice it; the two must agree or
// the quadrature has not converged.
double converged(const std::function<double(double)>& f, double a, double b, int panels) {
    const double coarse = composite(f, a, b, panels);
    const double fine = composite(f, a, b, 2 * panels);
    if (std::abs(fine - coarse) > 1e-11 * std::abs(fine) + 1e-13)
        throw QuadratureDivergence("escape probability quadrature did not converge");
    return fine;
}

// Source amplitude for a start at height j0, evaluated on the arc: the direct
// wave z^{j0} - z^{-j0} plus the bounced wave (z - 1/z) z^{-j0} / S(z),
// divided by 2 pi i z.
double saddle_weight_j0(double phi, int j0) {
    double out = 0.0;
    for (cplx z : {std::polar(1.0, -phi), -std::polar(1.0, phi)}) {
        const cplx zj = std::pow(z, j0);
        const cplx num = zj - 1.0 / zj + (z - 1.0 / z) / (zj * sqrt_cut(z));
        out += std::norm(num / (2.0 * pi * z));
    }
    return out;
}

}  // namespace

double prob_tooth(int n) {
    const int a = std::abs(n);
    auto f = [a](double s) {
        const double phi = s * s;
        if (phi < 1e-18) return 0.0;
        const double sp = std::sin(phi);
        return sp * sp * std::pow(tooth_weight(phi), a) / arc_measure(phi) / pi * 2.0 * s;
    };
    const double top = std::sqrt(pi);
    if (a < 64) return converged(f, 0.0, top, std::max(16, a));
    // The weight decays like e^{-sqrt(2) a s} from the left end and like
    // e^{-2 sqrt(pi) a (top - s)} from the right end; the middle of the range
    // is suppressed by at least 0.41^a and contributes nothing at this size.
    const double cut = 60.0 / a;
    return converged(f, 0.0, cut, 32) + converged(f, top - cut, top, 32);
}

double prob_teeth_total() {
    auto f = [](double s) {
        const double phi = s * s;
        if (phi < 1e-18) return 0.0;
        const double q = tooth_weight(phi);
        const double sp = std::sin(phi);
        return sp * sp * (1.0 + q) / (1.0 - q) / arc_measure(phi) / pi * 2.0 * s;
    };
    return converged(f, 0.0, std::sqrt(pi), 16);
}

double prob_spine_dist(int j) {
    if (j < 0) throw DomainError("prob_spine_dist: j must be >= 0");
    auto f = [j](double theta) {
        const double c = std::cos(theta);
        const double z = -2.0 + c;
        const double w = 1.0 - 1.0 / (z * z);
        return w * w * std::pow(z * z, -j) * std::sqrt((1.0 - c) / (3.0 - c)) / pi;
    };
    const int panels = std::max(8, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(j)))));
    return converged(f, 0.0, pi, panels);
}

double prob_spine_total() {
    auto f = [](double theta) {
        const double c = std::cos(theta);
        const double z = -2.0 + c;
        return (1.0 - 1.0 / (z * z)) * std::sqrt((1.0 - c) / (3.0 - c)) / pi;
    };
    return converged(f, 0.0, pi, 8);
}

double prob_tooth_j0(int n, int j0) {
    if (j0 < 0) throw DomainError("prob_tooth_j0: j0 must be >= 0");
    if (n != 0) {
        // Independent of j0: integrate the coarse tooth profile over velocity.
        // u = 2 sin phi absorbs the band-edge factor and phi = rho^2 removes
        // the half-power behavior of the saddle weights at u = 0.
        const int a = std::abs(n);
        auto f = [a](double rho) {
            const double phi = rho * rho;
            if (phi < 1e-18) return 0.0;
            return coarse_profile_tooth(2.0 * std::sin(phi), a) * 2.0 * std::cos(phi) * 2.0 * rho;
        };
        return converged(f, 0.0, std::sqrt(0.5 * pi), std::max(16, a));
    }
    auto f = [j0](double rho) {
        const double phi = rho * rho;
        if (phi < 1e-18) return 0.0;
        return 2.0 * pi * saddle_weight_j0(phi, j0) * 2.0 * rho;
    };
    return converged(f, 0.0, std::sqrt(0.5 * pi), std::max(16, 2 * j0 + 2));
}

double prob_teeth_total_j0(int j0) {
    return prob_tooth_j0(0, j0) - prob_tooth(0) + prob_teeth_total();
}

double prob_spine_total_j0(int j0) {
    return 1.0 - prob_teeth_total_j0(j0);
}

double profile_initial_tooth(double u, int j0) {
    if (!(u > 0.0 && u < 2.0)) throw DomainError("profile_initial_tooth: u must lie in (0, 2)");
    if (j0 < 0) throw DomainError("profile_initial_tooth: j0 must be >= 0");
    const double phi = std::asin(0.5 * u);
    return 2.0 * pi * saddle_weight_j0(phi, j0) / std::sqrt(4.0 - u * u);
}

}  // namespace comb
