#include "comb/contour.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "comb/quadrature.hpp"

namespace comb {

namespace {

bool on_cut(const cplx& z) {
    return z.imag() == 0.0 && z.real() >= -3.0 && z.real() <= 1.0;
}

}  // namespace

cplx sqrt_cut(const cplx& z) {
    if (on_cut(z)) throw OnCutError("sqrt_cut: z on the cut [-3, 1]");
    return std::sqrt(z + 3.0) * std::sqrt(z - 1.0);
}

cplx sqrt_sheet(const CutPoint& p) {
    cplx s = sqrt_cut(p.z);
    return p.sheet == Sheet::first ? s : -s;
}

cplx w_plus(const cplx& z) { return (1.0 + z) / 2.0 + sqrt_cut(z) / 2.0; }

cplx w_minus(const cplx& z) { return (1.0 + z) / 2.0 - sqrt_cut(z) / 2.0; }

cplx z_of_w(const cplx& w) {
    if (w == cplx(0.0, 0.0)) throw DomainError("z_of_w: w = 0");
    return w + 1.0 / w - 1.0;
}

cplx potential(const cplx& z, double u, double v) {
    if (z == cplx(0.0, 0.0)) throw DomainError("potential: z = 0");
    cplx val = cplx(0.0, 1.0) * (z + 1.0 / z - 2.0);
    if (u != 0.0) val -= u * std::log(z);
    if (v != 0.0) val -= v * std::log(w_plus(z));
    return val;
}

cplx potential_w(const cplx& w, double u, double v) {
    if (w == cplx(0.0, 0.0)) throw DomainError("potential_w: w = 0");
    cplx z = z_of_w(w);
    if (z == cplx(0.0, 0.0)) throw DomainError("potential_w: z(w) = 0");
    cplx val = cplx(0.0, 1.0) * (z + 1.0 / z - 2.0);
    if (u != 0.0) val -= u * std::log(z);
    if (v != 0.0) val -= v * std::log(w);
    return val;
}

namespace {

struct Node {
    cplx z;
    cplx dz;  // dz/dparameter times parameter weight
};

// contour nodes with total weights such that oint f dz = sum f(z_k) dz_k
std::vector<Node> contour_nodes(const ContourSpec& spec, int n) {
    std::vector<Node> out;
    out.reserve(n);
    if (spec.kind == ContourKind::ellipse_around_cut) {
        if (spec.rho <= 0.0) throw DomainError("ContourSpec: rho must be > 0");
        double h = 2.0 * M_PI / n;
        for (int m = 0; m < n; ++m) {
            cplx s(spec.rho, m * h);
            out.push_back({-1.0 + 2.0 * std::cosh(s), cplx(0.0, 2.0) * std::sinh(s) * h});
        }
        return out;
    }
    const auto& poly = spec.polyline;
    if (poly.size() < 3) throw DomainError("ContourSpec: polyline needs at least 3 vertices");
    size_t segs = poly.size();
    int per = std::max(2, n / static_cast<int>(segs));
    const GaussRule& rule = gauss_legendre(per);
    for (size_t k = 0; k < segs; ++k) {
        cplx a = poly[k], b = poly[(k + 1) % segs];
        for (int m = 0; m < per; ++m) {
            double s = 0.5 * (rule.x[m] + 1.0);
            out.push_back({a + (b - a) * s, (b - a) * (0.5 * rule.w[m])});
        }
    }
    return out;
}

}  // namespace

double max_growth_rate(const ContourSpec& spec) {
    double best = -1e300;
    for (const Node& nd : contour_nodes(spec, 2048))
        best = std::max(best, potential(nd.z, 0.0, 0.0).real());
    return best;
}

cplx amplitude_contour(int n, int j, double t, int j0, const ContourSpec& spec, double tol) {
    if (t < 0.0) throw DomainError("amplitude_contour: t < 0");
    if (j < 0 || j0 < 0) throw DomainError("amplitude_contour: tooth coordinates must be >= 0");
    if (tol <= 0.0) throw DomainError("amplitude_contour: tol must be > 0");

    // round-off certification: quadrature loses a factor e^{t max Re V} where
    // V carries the full integrand exponent at velocities (j+j0)/t and |n|/t
    if (t > 0.0) {
        double u = (j + j0) / t, v = std::abs(n) / t;
        double rate = -1e300;
        for (const Node& nd : contour_nodes(spec, 2048))
            rate = std::max(rate, potential(nd.z, u, v).real());
        double eps = 2.3e-16;
        if (std::exp(t * rate) * eps >= tol)
            throw QuadratureDivergence("amplitude_contour: t beyond certified range for this contour");
    }

    int an = std::abs(n);
    bool with_a0 = (j0 > 0 && n == 0);
    auto pass = [&](int nodes) {
        cplx reg(0.0, 0.0), a0(0.0, 0.0);
        for (const Node& nd : contour_nodes(spec, nodes)) {
            const cplx& z = nd.z;
            cplx ph = std::exp(cplx(0.0, -t) * (2.0 - z - 1.0 / z));
            cplx zj = std::pow(z, -(j + j0));
            reg += (1.0 - 1.0 / (z * z)) / sqrt_cut(z) * std::pow(w_minus(z), an) * zj * ph * nd.dz;
            if (with_a0) {
                cplx zp = std::pow(z, j0);
                a0 += std::pow(z, -j - 1) * (zp - 1.0 / zp) * ph * nd.dz;
            }
        }
        cplx norm(0.0, 2.0 * M_PI);
        return reg / norm + (with_a0 ? a0 / norm : cplx(0.0, 0.0));
    };

    int nodes = std::max(8, spec.nodes);
    cplx prev = pass(nodes);
    const int cap = 1 << 17;
    while (nodes < cap) {
        nodes *= 2;
        cplx cur = pass(nodes);
        if (std::abs(cur - prev) <= tol) return cur;
        prev = cur;
    }
    throw QuadratureDivergence("amplitude_contour: node doubling did not settle");
}

}  // namespace comb
