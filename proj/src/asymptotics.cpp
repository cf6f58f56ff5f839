#include "comb/asymptotics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>

#include <Eigen/Dense>

#include "comb/contour.hpp"
#include "comb/errors.hpp"

namespace comb {

namespace {

constexpr double pi = 3.14159265358979323846;

double v_crit() { return 0.75 * std::sqrt(3.0); }

// ---- tooth-direction steepest descent ----

// one-saddle contribution to the closed-contour integral: integrand
// prefactor (1 - z^-2)/(2 pi i S) times the lateral factor w_-^{|n|} and the
// Gaussian correction sqrt(2 pi / (t (-V''))), all on principal branches
cplx tooth_descent_term(const cplx& z, int n, double u, double t) {
    const cplx i1(0.0, 1.0);
    const cplx V = potential(z, u, 0.0);
    const cplx Vpp = 2.0 * i1 / (z * z * z) + u / (z * z);
    const cplx pref = (1.0 - 1.0 / (z * z)) / (2.0 * pi * i1 * sqrt_cut(z));
    return pref * std::pow(w_minus(z), double(std::abs(n))) * std::exp(t * V) *
           std::sqrt(2.0 * pi / (t * (-Vpp)));
}

cplx i_power(int j) {
    switch (j & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
    }
    return {0.0, -1.0};
}

// ---- spine-direction saddle machinery ----

// coefficients, descending powers, of the degree-6 stationary-point
// polynomial i(w-1)^3(w+1)(w^2+1) - u w(w^2-w+1)(w^2-1) - v w(w^2-w+1)^2
std::array<cplx, 7> spine_poly(double u, double v) {
    return {cplx(0.0, 1.0),          cplx(-u - v, -2.0), cplx(u + 2.0 * v, 1.0),
            cplx(-3.0 * v, 0.0),     cplx(-u + 2.0 * v, -1.0),
            cplx(u - v, 2.0),        cplx(0.0, -1.0)};
}

cplx horner(const std::array<cplx, 7>& c, const cplx& w) {
    cplx p = c[0];
    for (int k = 1; k < 7; ++k) p = p * w + c[k];
    return p;
}

cplx horner_deriv(const std::array<cplx, 7>& c, const cplx& w) {
    cplx p = 6.0 * c[0];
    for (int k = 1; k < 6; ++k) p = p * w + double(6 - k) * c[k];
    return p;
}

double horner_scale(const std::array<cplx, 7>& c, double r) {
    double s = std::abs(c[0]);
    for (int k = 1; k < 7; ++k) s = s * r + std::abs(c[k]);
    return s;
}

// W''(w) for the exponent i(z + 1/z - 2) - u log z - v log w, z = w + 1/w - 1
cplx spine_W_second(const cplx& w, double u, double v) {
    const cplx z = z_of_w(w);
    const cplx dz = 1.0 - 1.0 / (w * w);
    const cplx w3 = w * w * w;
    cplx val = cplx(0.0, 1.0) *
               ((2.0 / w3) * (1.0 - 1.0 / (z * z)) + dz * dz * (2.0 / (z * z * z)));
    if (u != 0.0) val -= u * ((2.0 / w3) / z - dz * dz / (z * z));
    if (v != 0.0) val += v / (w * w);
    return val;
}

// real spine saddle positions: (1 - z^-2) sqrt((z+3)(1-z)) = v has one root
// in (-3,-2) and one in (-2,-1) for 0 < v < v_c
double spine_f(double z) {
    return (1.0 - 1.0 / (z * z)) * std::sqrt((z + 3.0) * (1.0 - z));
}

double spine_saddle_z(double v, double a, double b) {
    double fa = spine_f(a) - v;
    for (int it = 0; it < 100; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = spine_f(m) - v;
        if ((fa <= 0.0) == (fm <= 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// one unit-circle saddle contribution; the exponent t W already carries
// w^{-|n|} through the -v log w term at v = |n|/t
cplx spine_osc_term(double z, int j, double v, double t) {
    const double gr = 1.0 - 1.0 / (z * z);
    if (gr == 0.0) return {0.0, 0.0};
    const double beta = std::acos((z + 1.0) / 2.0);
    const cplx w = std::polar(1.0, -beta);
    const cplx W = potential_w(w, 0.0, v);
    const cplx Wpp = spine_W_second(w, 0.0, v);
    const double zmj = (j % 2 ? -1.0 : 1.0) * std::pow(-z, -double(j));
    const cplx g = gr / w;
    return g / (2.0 * pi * cplx(0.0, 1.0)) * zmj * std::exp(t * W) *
           std::sqrt(2.0 * pi / (t * (-Wpp)));
}

// picks the decaying saddle beyond the spine front: Re W < 0, nearest the
// merge point e^{-2 i pi/3}
SpineSaddleRoot spine_decaying_root(double v) {
    const SpineSaddles ss = spine_saddles(0.0, v);
    const cplx wc = std::polar(1.0, -2.0 * pi / 3.0);
    const SpineSaddleRoot* best = nullptr;
    for (const SpineSaddleRoot& r : ss.roots) {
        if (r.re_W >= -1e-13) continue;
        if (!best || std::abs(r.w - wc) < std::abs(best->w - wc)) best = &r;
    }
    if (!best) {
        for (const SpineSaddleRoot& r : ss.roots)
            if (!best || std::abs(r.w - wc) < std::abs(best->w - wc)) best = &r;
    }
    return *best;
}

}  // namespace

// ---- regime geography ----

std::pair<double, double> critical_velocities() { return {2.0, v_crit()}; }

RegimeLabel classify_regime(double u, double v) {
    if (u < 0.0 || v < 0.0) throw DomainError("classify_regime: velocities must be >= 0");
    if (u > 0.0 && v > 0.0) return {Regime::evanescent, Axis::bulk};
    if (v == 0.0) {
        if (u < 2.0) return {Regime::oscillatory, Axis::tooth};
        if (u == 2.0) return {Regime::airy_front, Axis::tooth};
        return {Regime::evanescent, Axis::tooth};
    }
    if (v < v_crit()) return {Regime::oscillatory, Axis::spine};
    if (v == v_crit()) return {Regime::airy_front, Axis::spine};
    return {Regime::evanescent, Axis::spine};
}

// ---- tooth saddles ----

ToothSaddles tooth_saddles(double u) {
    if (u < 0.0) throw DomainError("tooth_saddles: u must be >= 0");
    ToothSaddles s;
    s.u = u;
    if (u <= 2.0) {
        s.phi = std::asin(0.5 * u);
        s.z_plus = std::polar(1.0, -s.phi);
        s.z_minus = -std::polar(1.0, s.phi);
        s.psi = 0.0;
    } else {
        s.phi = 0.5 * pi;
        s.psi = std::acosh(0.5 * u);
        s.z_plus = cplx(0.0, -std::exp(-s.psi));
        s.z_minus = cplx(0.0, -std::exp(s.psi));
    }
    return s;
}

// ---- return amplitude ----

ReturnAsymptotic return_amplitude_asymptotic(double t) {
    if (t <= 0.0) throw DomainError("return_amplitude_asymptotic: t must be positive");
    ReturnAsymptotic r;
    r.band_edge_term = std::sqrt(2.0 / (9.0 * pi)) *
                       std::polar(1.0, 0.25 * pi - 16.0 * t / 3.0) / std::sqrt(t);
    r.spectral_bottom_term = std::sqrt(2.0) / (4.0 * pi) * std::tgamma(0.75) *
                             std::polar(1.0, -0.375 * pi) / std::pow(t, 0.75);
    r.band_threshold_term = 0.75 / std::sqrt(pi) *
                            std::polar(1.0, 0.25 * pi - 4.0 * t) / std::pow(t, 1.5);
    r.total = r.band_edge_term + r.spectral_bottom_term + r.band_threshold_term;
    return r;
}

// ---- tooth amplitude and profiles ----

cplx tooth_amplitude_asymptotic(int n, int j, double t) {
    if (t <= 0.0) throw DomainError("tooth_amplitude_asymptotic: t must be positive");
    if (j < 0) throw DomainError("tooth_amplitude_asymptotic: j must be >= 0");
    if (j == 0)
        return n == 0 ? return_amplitude_asymptotic(t).total
                      : spine_amplitude_asymptotic(n, 0, t);
    const double u = j / t;
    if (std::abs(u - 2.0) <= 4.0 * std::pow(t, -2.0 / 3.0)) {
        const double jhat = (j - 2.0 * t) / std::cbrt(t);
        const cplx c2 = std::sqrt(cplx(0.8, -0.4));
        return c2 * std::pow(w_minus(cplx(0.0, -1.0)), double(std::abs(n))) *
               std::exp(cplx(0.0, -2.0 * t)) * i_power(j) * airy_ai(jhat) /
               std::cbrt(t);
    }
    const ToothSaddles s = tooth_saddles(u);
    if (u < 2.0)
        return tooth_descent_term(s.z_plus, n, u, t) +
               tooth_descent_term(s.z_minus, n, u, t);
    return tooth_descent_term(s.z_minus, n, u, t);
}

double coarse_profile_tooth(double u, int n) {
    if (!(u > 0.0 && u < 2.0)) throw DomainError("coarse_profile_tooth: u must lie in (0, 2)");
    const double r = std::sqrt(4.0 - u * u);
    const ToothSaddles s = tooth_saddles(u);
    const double a = 2.0 * std::abs(n);
    const double wp = std::pow(std::abs(w_minus(s.z_plus)), a);
    const double wm = std::pow(std::abs(w_minus(s.z_minus)), a);
    return u * u / (2.0 * pi * r) *
           (wp / std::sqrt(8.0 + 3.0 * u * u - 4.0 * r) +
            wm / std::sqrt(8.0 + 3.0 * u * u + 4.0 * r));
}

std::pair<double, double> tooth_bounds(double u) {
    if (!(u > 0.0 && u < 2.0)) throw DomainError("tooth_bounds: u must lie in (0, 2)");
    const double r = std::sqrt(4.0 - u * u);
    const double base = u * u / (2.0 * pi * r);
    const double a = std::pow(8.0 + 3.0 * u * u - 4.0 * r, -0.25);
    const double b = std::pow(8.0 + 3.0 * u * u + 4.0 * r, -0.25);
    return {base * (a - b) * (a - b), base * (a + b) * (a + b)};
}

double tooth_decay_rate(double u) {
    if (u < 0.0) throw DomainError("tooth_decay_rate: u must be >= 0");
    if (u <= 2.0) return 0.0;
    const double r = std::sqrt(u * u - 4.0);
    return u * std::log(0.5 * (u + r)) - r;
}

double tooth_tail_exponent(double u) {
    if (u < 0.0) throw DomainError("tooth_tail_exponent: u must be >= 0");
    if (u <= 2.0) return 0.0;
    return std::acosh(0.5 * u);
}

// ---- spine saddles ----

SpineSaddles spine_saddles(double u, double v) {
    if (u < 0.0 || v < 0.0) throw DomainError("spine_saddles: velocities must be >= 0");
    const std::array<cplx, 7> c = spine_poly(u, v);

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(6, 6);
    for (int k = 0; k < 6; ++k) companion(k, 5) = -(c[6 - k] / c[0]);
    for (int k = 1; k < 6; ++k) companion(k, k - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
    if (es.info() != Eigen::Success)
        throw RootFindingFailure("spine_saddles: eigenvalue iteration failed");

    // per-root Newton polish; a multiple root stalls with visible final steps
    std::array<cplx, 6> w;
    std::array<double, 6> last_step{};
    for (int k = 0; k < 6; ++k) {
        w[k] = es.eigenvalues()(k);
        double step = 1.0;
        for (int it = 0; it < 100; ++it) {
            const cplx dp = horner_deriv(c, w[k]);
            if (std::abs(dp) == 0.0) break;
            const cplx d = horner(c, w[k]) / dp;
            w[k] -= d;
            step = std::abs(d);
            if (step < 1e-15 * (1.0 + std::abs(w[k]))) break;
            if (std::abs(w[k]) > 1e6)
                throw RootFindingFailure("spine_saddles: Newton iteration diverged");
        }
        last_step[k] = step;
    }

    // group roots closer than the loose radius, then keep the group only if
    // the members look like one stalled multiple root rather than a pair of
    // converged simple roots that happen to lie close
    std::array<int, 6> group{};
    for (int k = 0; k < 6; ++k) group[k] = k;
    auto find = [&](int k) {
        while (group[k] != k) k = group[k] = group[group[k]];
        return k;
    };
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b)
            if (std::abs(w[a] - w[b]) <
                1e-4 * (1.0 + std::max(std::abs(w[a]), std::abs(w[b]))))
                group[find(a)] = find(b);

    SpineSaddles out;
    out.u = u;
    out.v = v;
    std::array<bool, 6> used{};
    for (int a = 0; a < 6; ++a) {
        if (used[a]) continue;
        std::vector<int> members;
        for (int b = 0; b < 6; ++b)
            if (find(b) == find(a)) {
                members.push_back(b);
                used[b] = true;
            }
        double diam = 0.0, maxstep = 0.0;
        for (int p : members) {
            maxstep = std::max(maxstep, last_step[p]);
            for (int q : members) diam = std::max(diam, std::abs(w[p] - w[q]));
        }
        const bool stalled = maxstep > 1e-11 * (1.0 + std::abs(w[members[0]]));
        if (members.size() > 1 && (stalled || diam < 64.0 * maxstep)) {
            cplx centroid(0.0, 0.0);
            for (int p : members) centroid += w[p];
            centroid /= double(members.size());
            const double m = double(members.size());
            for (int it = 0; it < 8; ++it) {
                const cplx dp = horner_deriv(c, centroid);
                if (std::abs(dp) == 0.0) break;
                const cplx d = m * horner(c, centroid) / dp;
                if (std::abs(d) > 10.0 * (diam + 1e-12)) break;
                centroid -= d;
            }
            SpineSaddleRoot r;
            r.w = centroid;
            r.multiplicity = int(members.size());
            out.roots.push_back(r);
        } else {
            for (int p : members) {
                SpineSaddleRoot r;
                r.w = w[p];
                r.multiplicity = 1;
                out.roots.push_back(r);
            }
        }
    }

    // merge any representatives the polish drove together
    for (std::size_t a = 0; a < out.roots.size(); ++a)
        for (std::size_t b = a + 1; b < out.roots.size();) {
            if (std::abs(out.roots[a].w - out.roots[b].w) <
                1e-6 * (1.0 + std::abs(out.roots[a].w))) {
                out.roots[a].multiplicity += out.roots[b].multiplicity;
                out.roots.erase(out.roots.begin() + b);
            } else {
                ++b;
            }
        }

    for (SpineSaddleRoot& r : out.roots) {
        const double res = std::abs(horner(c, r.w));
        if (res > 1e-12 * horner_scale(c, std::abs(r.w)))
            throw RootFindingFailure("spine_saddles: root residual above tolerance");
        const cplx W = potential_w(r.w, u, v);
        r.re_W = W.real();
        r.im_W = W.imag();
        r.W_second = spine_W_second(r.w, u, v);
    }
    std::sort(out.roots.begin(), out.roots.end(),
              [](const SpineSaddleRoot& a, const SpineSaddleRoot& b) {
                  if (a.w.real() != b.w.real()) return a.w.real() < b.w.real();
                  return a.w.imag() < b.w.imag();
              });
    return out;
}

// ---- spine amplitude and profiles ----

cplx spine_amplitude_asymptotic(int n, int j, double t) {
    if (t <= 0.0) throw DomainError("spine_amplitude_asymptotic: t must be positive");
    if (j < 0) throw DomainError("spine_amplitude_asymptotic: j must be >= 0");
    const double vc = v_crit();
    const double v = std::abs(double(n)) / t;
    if (std::abs(v - vc) <= 3.0 * std::pow(t, -2.0 / 3.0)) {
        const double sigma = std::cbrt(16.0 / (21.0 * std::sqrt(3.0)));
        const double nhat = (std::abs(double(n)) - vc * t) / std::cbrt(t);
        const cplx wc_pow = std::polar(1.0, 2.0 * pi * double(std::abs(n) % 3) / 3.0);
        const double zmj = (j % 2 ? -1.0 : 1.0) * std::pow(2.0, -double(j));
        return 0.75 * sigma * std::exp(cplx(0.0, -4.5 * t)) * wc_pow * zmj *
               airy_ai(sigma * nhat) / std::cbrt(t);
    }
    if (v < vc) {
        double z1, z2;
        if (v == 0.0) {
            z1 = -3.0;
            z2 = -1.0;
        } else {
            z1 = spine_saddle_z(v, -3.0, -2.0);
            z2 = spine_saddle_z(v, -2.0, -1.0);
        }
        return spine_osc_term(z1, j, v, t) + spine_osc_term(z2, j, v, t);
    }
    const SpineSaddleRoot r = spine_decaying_root(v);
    const cplx z = z_of_w(r.w);
    const cplx g = (1.0 - 1.0 / (z * z)) / r.w;
    return g / (2.0 * pi * cplx(0.0, 1.0)) * std::pow(z, -double(j)) *
           std::exp(t * potential_w(r.w, 0.0, v)) *
           std::sqrt(2.0 * pi / (t * (-r.W_second)));
}

double coarse_profile_spine(double v, int j) {
    if (!(v > 0.0 && v < v_crit()))
        throw DomainError("coarse_profile_spine: v must lie in (0, v_c)");
    if (j < 0) throw DomainError("coarse_profile_spine: j must be >= 0");
    const double zs[2] = {spine_saddle_z(v, -3.0, -2.0), spine_saddle_z(v, -2.0, -1.0)};
    double q = 0.0;
    for (double z : zs) {
        const double beta = std::acos((z + 1.0) / 2.0);
        const cplx w = std::polar(1.0, -beta);
        const double g = 1.0 - 1.0 / (z * z);
        q += g * g * std::pow(-z, -2.0 * j) /
             (2.0 * pi * std::abs(spine_W_second(w, 0.0, v)));
    }
    return q;
}

double spine_decay_rate(double v) {
    if (v < 0.0) throw DomainError("spine_decay_rate: v must be >= 0");
    if (v <= v_crit()) return 0.0;
    return -spine_decaying_root(v).re_W;
}

// ---- Airy function ----

double airy_ai(double x) {
    if (!(x >= -20.0 && x <= 20.0)) throw RangeError("airy_ai: x outside [-20, 20]");
    if (std::abs(x) <= 6.5) {
        const double a0 = 0.35502805388781723926;
        const double b0 = 0.25881940379280679840;
        const double x3 = x * x * x;
        double f = 1.0, g = x, tf = 1.0, tg = x;
        for (int k = 0; k < 200; ++k) {
            tf *= x3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
            tg *= x3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
            f += tf;
            g += tg;
            if (std::abs(tf) < 1e-24 && std::abs(tg) < 1e-24) break;
        }
        return a0 * f - b0 * g;
    }
    const double z = std::abs(x);
    const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
    if (x > 0.0) {
        double sum = 1.0, term = 1.0;
        for (int k = 1; k <= 60; ++k) {
            const double next = -term * (6.0 * k - 5.0) * (6.0 * k - 1.0) / (72.0 * k * zeta);
            if (std::abs(next) >= std::abs(term)) break;
            term = next;
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return std::exp(-zeta) * sum / (2.0 * std::sqrt(pi) * std::pow(z, 0.25));
    }
    // cos/sin series with terms u_m zeta^{-m}, signs +,+,-,- repeating
    double tm = 1.0, prev = 1.0;
    double s_cos = 1.0, s_sin = 0.0;
    for (int m = 1; m <= 60; ++m) {
        tm *= (6.0 * m - 5.0) * (6.0 * m - 1.0) / (72.0 * m * zeta);
        if (tm >= prev) break;
        const double sgn = ((m & 3) == 0 || (m & 3) == 1) ? 1.0 : -1.0;
        if (m & 1)
            s_sin += sgn * tm;
        else
            s_cos += sgn * tm;
        prev = tm;
    }
    const double ang = zeta - 0.25 * pi;
    return (std::cos(ang) * s_cos + std::sin(ang) * s_sin) /
           (std::sqrt(pi) * std::pow(z, 0.25));
}

}  // namespace comb
