#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "comb/asymptotics.hpp"
#include "comb/contour.hpp"
#include "comb/errors.hpp"
#include "comb/quadrature.hpp"

using namespace comb;

namespace {

constexpr double pi = 3.14159265358979323846;

double rel_err(const cplx& got, const cplx& want) {
    return std::abs(got - want) / std::abs(want);
}

struct LatticePoint {
    int n;
    int j;
    cplx amplitude;
};

// Reference amplitudes on the t = 200 lattice, generated by direct state
// propagation with truncation (340, 460) and series tolerance 1e-12.
const std::vector<LatticePoint> kToothOscillatory = {
    {0, 100, {0.0025808050180469917, -0.014876244866554093}},
    {0, 200, {0.007648428043692139, -0.016214795442692519}},
    {0, 300, {0.0090025276710587986, -0.034785880178702308}},
    {1, 100, {0.0075719795298321724, -0.0051475544939678609}},
    {1, 200, {0.01620464294010792, -0.0042501144313069989}},
};

const std::vector<LatticePoint> kToothFront = {
    {0, 394, {0.026914734837408451, -0.081585919492488154}},
    {0, 396, {-0.024902763160877497, 0.076622422672362814}},
    {0, 398, {0.021166229618658043, -0.065867833722097549}},
    {0, 400, {-0.016780324335349203, 0.052695350161973166}},
    {0, 402, {0.012533006679353009, -0.039654894319301255}},
    {0, 404, {-0.0088811444090046553, 0.028280551638910988}},
    {0, 406, {0.0060023449500056034, -0.019219397218712173}},
    {0, 408, {-0.0038848977510695707, 0.012499656364727971}},
    {0, 410, {0.0024157967922990376, -0.0078060814044395559}},
    {0, 412, {-0.0014471892085978503, 0.0046940414994810949}},
};

const std::vector<LatticePoint> kToothRightEdgeFront = {
    {0, 420, {-0.00013357063101245942, 0.00043832337801286484}},
    {0, 421, {-0.00031483766265565858, -9.5830971900260503e-05}},
    {0, 422, {6.8270917968044225e-05, -0.00022453754269100926}},
    {0, 423, {0.00015902397433234408, 4.8301474156103145e-05}},
};

const std::vector<LatticePoint> kToothRightEdgeEvanescent = {
    {0, 424, {-3.3941931891555004e-05, 0.00011185759551865258}},
    {0, 425, {-7.815423661369848e-05, -2.3692894876674447e-05}},
};

const std::vector<LatticePoint> kToothEvanescent = {
    {0, 430, {3.5671271374479934e-06, -1.181391770719082e-05}},
    {0, 440, {-5.1937255346049529e-08, 1.7293409285374856e-07}},
};

const std::vector<LatticePoint> kToothBlendLeft = {
    {0, 374, {0.0096649180184817177, -0.035745417192984373}},
    {0, 375, {0.017761570439834239, 0.0034517323536278179}},
    {0, 376, {0.0032122471446166625, -0.0024828259210312267}},
    {0, 377, {0.022498289823519393, 0.009532513961612199}},
    {0, 378, {-0.014815829536680035, 0.040016146931879062}},
    {0, 379, {-0.053232958866095144, -0.018539722235154488}},
    {0, 380, {0.020391046536689668, -0.060961922778903943}},
};

const std::vector<LatticePoint> kSpineOscillatory = {
    {80, 0, {0.018593509343879776, -0.010727850915964626}},
    {160, 0, {-0.017241972313689836, 0.0098125370988793714}},
    {240, 0, {-0.0064744436819108471, 0.016563493724073612}},
};

const std::vector<LatticePoint> kSpineFront = {
    {250, 0, {0.043683789771293793, 0.024086016640666719}},
    {252, 0, {0.0019804226862692063, -0.051787180186215982}},
    {254, 0, {-0.04548339261985139, 0.021457435331098156}},
    {256, 0, {0.037023809037705344, 0.027638028377522175}},
    {258, 0, {0.0058458118567875084, -0.040112476495542997}},
    {260, 0, {-0.031999103654341984, 0.011989990969063984}},
    {262, 0, {0.021207938173578203, 0.017975166248593428}},
    {264, 0, {0.0041008544769949602, -0.021514843823758664}},
    {266, 0, {-0.015841346416762929, 0.0054541536100545865}},
    {268, 0, {0.0094221307004228178, 0.008169493842542265}},
    {270, 0, {0.0016611041689104534, -0.0088947495389229379}},
};

const std::vector<LatticePoint> kSpineEvanescent = {
    {280, 0, {0.0010652386353508503, 0.00074417163435020644}},
    {290, 0, {-9.2461112465700416e-05, 6.9353037374881698e-05}},
};

double rms_ratio(const std::vector<LatticePoint>& pts, double t) {
    double num = 0.0, den = 0.0;
    for (const auto& p : pts) {
        num += std::norm(tooth_amplitude_asymptotic(p.n, p.j, t));
        den += std::norm(p.amplitude);
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("critical velocities") {
    auto [uc, vc] = critical_velocities();
    CHECK(uc == 2.0);
    CHECK(std::abs(vc - 3.0 * std::sqrt(3.0) / 4.0) < 1e-15);
}

TEST_CASE("regime classification covers both axes and the bulk") {
    auto at = [](double u, double v) { return classify_regime(u, v); };

    CHECK(at(0.0, 0.0).regime == Regime::oscillatory);
    CHECK(at(0.0, 0.0).axis == Axis::tooth);
    CHECK(at(1.0, 0.0).regime == Regime::oscillatory);
    CHECK(at(1.0, 0.0).axis == Axis::tooth);
    CHECK(at(2.0, 0.0).regime == Regime::airy_front);
    CHECK(at(2.5, 0.0).regime == Regime::evanescent);
    CHECK(at(2.5, 0.0).axis == Axis::tooth);

    const double vc = critical_velocities().second;
    CHECK(at(0.0, 1.0).regime == Regime::oscillatory);
    CHECK(at(0.0, 1.0).axis == Axis::spine);
    CHECK(at(0.0, vc).regime == Regime::airy_front);
    CHECK(at(0.0, vc).axis == Axis::spine);
    CHECK(at(0.0, 1.4).regime == Regime::evanescent);
    CHECK(at(0.0, 1.4).axis == Axis::spine);

    CHECK(at(1.0, 1.0).regime == Regime::evanescent);
    CHECK(at(1.0, 1.0).axis == Axis::bulk);
    CHECK(at(0.1, 0.1).axis == Axis::bulk);

    CHECK_THROWS_AS(classify_regime(-0.1, 0.0), DomainError);
    CHECK_THROWS_AS(classify_regime(0.0, -0.1), DomainError);
}

TEST_CASE("tooth saddles sit on the unit circle below the band edge") {
    {
        ToothSaddles s = tooth_saddles(0.0);
        CHECK(std::abs(s.z_plus - cplx(1.0, 0.0)) < 1e-14);
        CHECK(std::abs(s.z_minus - cplx(-1.0, 0.0)) < 1e-14);
    }
    {
        ToothSaddles s = tooth_saddles(1.0);
        CHECK(std::abs(s.phi - pi / 6.0) < 1e-15);
        CHECK(std::abs(s.z_plus - std::polar(1.0, -pi / 6.0)) < 1e-14);
        CHECK(std::abs(s.z_minus + std::polar(1.0, pi / 6.0)) < 1e-14);
    }
    {
        ToothSaddles s = tooth_saddles(2.0);
        CHECK(std::abs(s.z_plus - cplx(0.0, -1.0)) < 1e-14);
        CHECK(std::abs(s.z_minus - cplx(0.0, -1.0)) < 1e-14);
    }

    for (double u = 0.05; u < 2.0; u += 0.05) {
        ToothSaddles s = tooth_saddles(u);
        for (cplx z : {s.z_plus, s.z_minus}) {
            CHECK(std::abs(std::abs(z) - 1.0) < 1e-14);
            cplx vp = cplx(0.0, 1.0) * (1.0 - 1.0 / (z * z)) - u / z;
            CHECK(std::abs(vp) < 1e-12);
            CHECK(std::abs(potential(z, u, 0.0).real()) < 1e-12);
        }
    }
}

TEST_CASE("tooth saddles become purely imaginary beyond the band edge") {
    for (double u : {2.1, 2.5, 3.0, 4.0}) {
        ToothSaddles s = tooth_saddles(u);
        CHECK(std::abs(s.z_plus.real()) < 1e-14);
        CHECK(std::abs(s.z_minus.real()) < 1e-14);
        const double psi = std::acosh(0.5 * u);
        CHECK(std::abs(s.z_minus - cplx(0.0, -std::exp(psi))) < 1e-13);
        CHECK(std::abs(s.z_plus - cplx(0.0, -std::exp(-psi))) < 1e-13);
        CHECK(std::abs(s.psi - psi) < 1e-14);
        cplx vp = cplx(0.0, 1.0) * (1.0 - 1.0 / (s.z_minus * s.z_minus)) - u / s.z_minus;
        CHECK(std::abs(vp) < 1e-12);
    }
    ToothSaddles lo = tooth_saddles(1.999);
    ToothSaddles hi = tooth_saddles(2.001);
    CHECK(std::abs(lo.z_plus - hi.z_plus) < 0.1);
    CHECK(std::abs(lo.z_minus - hi.z_minus) < 0.1);
}

TEST_CASE("return amplitude term magnitudes follow their closed forms") {
    for (double t : {50.0, 100.0, 400.0}) {
        ReturnAsymptotic r = return_amplitude_asymptotic(t);
        const double edge = std::sqrt(2.0 / (9.0 * pi)) / std::sqrt(t);
        const double bottom = 0.13790783141510466 * std::pow(t, -0.75);
        const double threshold = 0.42314218766081722 * std::pow(t, -1.5);
        CHECK(std::abs(std::abs(r.band_edge_term) - edge) < 1e-12 * edge);
        CHECK(std::abs(std::abs(r.spectral_bottom_term) - bottom) < 1e-12 * bottom);
        CHECK(std::abs(std::abs(r.band_threshold_term) - threshold) < 1e-12 * threshold);
        CHECK(std::abs(r.total - (r.band_edge_term + r.spectral_bottom_term + r.band_threshold_term)) < 1e-16);
    }
}

TEST_CASE("return amplitude matches exact propagation to subleading order") {
    // Reference values from direct propagation at tolerance 1e-12.
    const cplx exact_t50(-0.012485478914203483, -0.041452993511470949);
    const cplx exact_t100(0.0028832210997491654, 0.022425487295125655);
    CHECK(std::abs(return_amplitude_asymptotic(50.0).total - exact_t50) < 0.5 * std::pow(50.0, -1.25));
    CHECK(std::abs(return_amplitude_asymptotic(100.0).total - exact_t100) < 0.5 * std::pow(100.0, -1.25));
}

TEST_CASE("spine amplitude at the origin reduces to the band edge return term") {
    for (double t : {47.0, 200.0}) {
        ReturnAsymptotic r = return_amplitude_asymptotic(t);
        CHECK(std::abs(spine_amplitude_asymptotic(0, 0, t) - r.band_edge_term) < 1e-13);
    }
}

TEST_CASE("tooth amplitude oscillatory fixtures") {
    const double t = 200.0;
    const double tol[] = {0.01, 0.003, 0.003, 0.025, 0.005};
    for (size_t i = 0; i < kToothOscillatory.size(); ++i) {
        const auto& p = kToothOscillatory[i];
        CHECK(rel_err(tooth_amplitude_asymptotic(p.n, p.j, t), p.amplitude) < tol[i]);
    }
}

TEST_CASE("tooth amplitude front fixtures") {
    const double t = 200.0;
    for (const auto& p : kToothFront)
        CHECK(rel_err(tooth_amplitude_asymptotic(p.n, p.j, t), p.amplitude) < 0.10);
}

TEST_CASE("tooth amplitude right edge handoff") {
    const double t = 200.0;
    for (const auto& p : kToothRightEdgeFront)
        CHECK(rel_err(tooth_amplitude_asymptotic(p.n, p.j, t), p.amplitude) < 0.10);
    for (const auto& p : kToothRightEdgeEvanescent)
        CHECK(rel_err(tooth_amplitude_asymptotic(p.n, p.j, t), p.amplitude) < 0.05);

    std::vector<LatticePoint> edge = kToothRightEdgeFront;
    edge.insert(edge.end(), kToothRightEdgeEvanescent.begin(), kToothRightEdgeEvanescent.end());
    const double ratio = rms_ratio(edge, t);
    CHECK(ratio > 0.9);
    CHECK(ratio < 1.1);
}

TEST_CASE("tooth amplitude evanescent fixtures") {
    const double t = 200.0;
    for (const auto& p : kToothEvanescent)
        CHECK(rel_err(tooth_amplitude_asymptotic(p.n, p.j, t), p.amplitude) < 0.03);
}

TEST_CASE("tooth amplitude stays continuous through the left blend window") {
    const double ratio = rms_ratio(kToothBlendLeft, 200.0);
    CHECK(ratio > 0.9);
    CHECK(ratio < 1.1);
}

TEST_CASE("tooth amplitude is even in the column index") {
    for (int n : {1, 3, 7}) {
        cplx a = tooth_amplitude_asymptotic(n, 150, 200.0);
        cplx b = tooth_amplitude_asymptotic(-n, 150, 200.0);
        CHECK(a == b);
    }
}

TEST_CASE("spine amplitude oscillatory fixtures") {
    const double t = 200.0;
    const double tol[] = {0.001, 0.01, 0.12};
    for (size_t i = 0; i < kSpineOscillatory.size(); ++i) {
        const auto& p = kSpineOscillatory[i];
        CHECK(rel_err(spine_amplitude_asymptotic(p.n, p.j, t), p.amplitude) < tol[i]);
    }
}

TEST_CASE("spine amplitude front fixtures") {
    const double t = 200.0;
    for (const auto& p : kSpineFront)
        CHECK(rel_err(spine_amplitude_asymptotic(p.n, p.j, t), p.amplitude) < 0.20);
}

TEST_CASE("spine amplitude evanescent fixtures") {
    const double t = 200.0;
    for (const auto& p : kSpineEvanescent)
        CHECK(rel_err(spine_amplitude_asymptotic(p.n, p.j, t), p.amplitude) < 0.05);
}

TEST_CASE("spine amplitude is even in the column index") {
    for (int n : {80, 252, 285}) {
        cplx a = spine_amplitude_asymptotic(n, 0, 200.0);
        cplx b = spine_amplitude_asymptotic(-n, 0, 200.0);
        CHECK(a == b);
    }
}

TEST_CASE("coarse tooth profile reference values") {
    struct Ref { double u; int n; double c; };
    const Ref refs[] = {
        {0.5, 0, 0.025564398393668048},
        {1.0, 0, 0.067238782442510562},
        {1.5, 0, 0.14848522273561016},
        {1.0, 1, 0.031651159524946252},
        {1.0, 2, 0.015511606721430322},
        {0.5, 3, 0.0051227800274603487},
    };
    for (const auto& r : refs)
        CHECK(std::abs(coarse_profile_tooth(r.u, r.n) - r.c) < 1e-12 * r.c);
    CHECK(coarse_profile_tooth(1.0, -2) == coarse_profile_tooth(1.0, 2));
}

TEST_CASE("tooth envelope bounds bracket the on-axis profile") {
    struct Ref { double u, lo, hi; };
    const Ref refs[] = {
        {0.5, 0.0051943045723615939, 0.045934492214974502},
        {1.0, 0.0043665639652185125, 0.13011100091980261},
        {1.5, 0.0025784289641890794, 0.29439201650703125},
    };
    for (const auto& r : refs) {
        auto [lo, hi] = tooth_bounds(r.u);
        CHECK(std::abs(lo - r.lo) < 1e-12 * r.lo);
        CHECK(std::abs(hi - r.hi) < 1e-12 * r.hi);
    }
    for (double u = 0.1; u < 2.0; u += 0.1) {
        auto [lo, hi] = tooth_bounds(u);
        CHECK(lo > 0.0);
        CHECK(lo < hi);
        CHECK(std::abs(coarse_profile_tooth(u, 0) - 0.5 * (lo + hi)) < 1e-15);
    }
}

TEST_CASE("coarse spine profile reference values and band edge limit") {
    struct Ref { double v; int j; double q; };
    const Ref refs[] = {
        {0.8, 0, 0.089665120244839687},
        {0.8, 1, 0.015121720341497135},
        {1.2, 0, 0.18974168350262708},
        {0.4, 0, 0.074093016603550705},
    };
    for (const auto& r : refs)
        CHECK(std::abs(coarse_profile_spine(r.v, r.j) - r.q) < 1e-12 * r.q);
    CHECK(std::abs(coarse_profile_spine(1e-3, 0) - 2.0 / (9.0 * pi)) < 1e-5 * (2.0 / (9.0 * pi)));
}

TEST_CASE("spine profile velocity integral matches level probabilities") {
    // Level probabilities from the spectral-density quadrature oracle.
    const double level[] = {0.29208241045158701, 0.053756283640838369};
    const double vc = critical_velocities().second;
    const GaussRule g = gauss_legendre_on(96, 0.0, 1.0);
    for (int j = 0; j < 2; ++j) {
        double s = 0.0;
        for (size_t i = 0; i < g.x.size(); ++i) {
            const double v = vc * (1.0 - g.x[i] * g.x[i]);
            if (v <= 0.0 || v >= vc) continue;
            s += g.w[i] * coarse_profile_spine(v, j) * 2.0 * vc * g.x[i];
        }
        CHECK(std::abs(2.0 * s - level[j]) < 1e-8);
    }
}

TEST_CASE("spine saddle roots at the origin of velocity space") {
    SpineSaddles s = spine_saddles(0.0, 0.0);
    int total = 0;
    bool found_triple = false, found_i = false, found_mi = false, found_m1 = false;
    for (const auto& r : s.roots) {
        total += r.multiplicity;
        if (r.multiplicity == 3 && std::abs(r.w - cplx(1.0, 0.0)) < 1e-6) found_triple = true;
        if (r.multiplicity == 1 && std::abs(r.w - cplx(0.0, 1.0)) < 1e-10) found_i = true;
        if (r.multiplicity == 1 && std::abs(r.w - cplx(0.0, -1.0)) < 1e-10) found_mi = true;
        if (r.multiplicity == 1 && std::abs(r.w - cplx(-1.0, 0.0)) < 1e-10) found_m1 = true;
    }
    CHECK(total == 6);
    CHECK(found_triple);
    CHECK(found_i);
    CHECK(found_mi);
    CHECK(found_m1);
}

TEST_CASE("spine saddle roots coalesce at the critical velocity") {
    const double vc = critical_velocities().second;
    SpineSaddles s = spine_saddles(0.0, vc);
    int total = 0;
    bool found_double = false;
    for (const auto& r : s.roots) {
        total += r.multiplicity;
        if (r.multiplicity == 2 && std::abs(r.w - std::polar(1.0, -2.0 * pi / 3.0)) < 1e-6)
            found_double = true;
    }
    CHECK(total == 6);
    CHECK(found_double);
}

TEST_CASE("spine saddle roots include the oscillatory pair on the unit circle") {
    // Independent bisection route: real zeros of (1 - z^-2) sqrt((z+3)(1-z)) = v.
    const double v = 0.8;
    const double z1 = -2.7762148956026362;
    const double z2 = -1.2958067183668827;
    SpineSaddles s = spine_saddles(0.0, v);
    for (double zk : {z1, z2}) {
        const cplx w = std::polar(1.0, -std::acos(0.5 * (zk + 1.0)));
        bool found = false;
        for (const auto& r : s.roots)
            if (std::abs(r.w - w) < 1e-10) found = true;
        CHECK(found);
    }
}

TEST_CASE("spine saddle root properties hold across velocity space") {
    std::mt19937 rng(20260822);
    std::uniform_real_distribution<double> U(0.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double u = U(rng);
        const double v = U(rng);
        SpineSaddles s = spine_saddles(u, v);
        int total = 0;
        double log_modulus = 0.0;
        for (const auto& r : s.roots) {
            total += r.multiplicity;
            log_modulus += r.multiplicity * std::log(std::abs(r.w));
            if (r.multiplicity == 1) {
                const double h = 1e-5;
                const cplx fd = (potential_w(r.w + h, u, v) - 2.0 * potential_w(r.w, u, v)
                                 + potential_w(r.w - h, u, v)) / (h * h);
                CHECK(std::abs(fd - r.W_second) < 1e-3 * std::abs(r.W_second) + 1e-10);
            }
            CHECK(std::abs(potential_w(r.w, u, v).real() - r.re_W) < 1e-12);
        }
        CHECK(total == 6);
        CHECK(std::abs(log_modulus) < 1e-10);
    }
}

TEST_CASE("spine saddle selection beyond the critical velocity") {
    SpineSaddles s = spine_saddles(0.0, 1.4);
    bool found = false;
    for (const auto& r : s.roots)
        if (std::abs(r.w - cplx(-0.596213, -1.08088)) < 1e-5) {
            found = true;
            CHECK(r.re_W < 0.0);
        }
    CHECK(found);
}

TEST_CASE("decay rates vanish inside the light cones and grow beyond them") {
    CHECK(tooth_decay_rate(1.0) == 0.0);
    CHECK(tooth_decay_rate(2.0) == 0.0);
    CHECK(std::abs(tooth_decay_rate(2.5) - (2.5 * std::log(2.0) - 1.5)) < 1e-15);
    CHECK(tooth_tail_exponent(1.5) == 0.0);
    CHECK(tooth_tail_exponent(2.0) == 0.0);
    CHECK(std::abs(tooth_tail_exponent(2.5) - std::acosh(1.25)) < 1e-15);

    double prev = 0.0;
    for (double u = 2.1; u < 4.05; u += 0.1) {
        const double w = tooth_decay_rate(u);
        CHECK(w > prev);
        prev = w;
    }
    prev = 0.0;
    for (double u = 2.1; u < 4.05; u += 0.1) {
        const double x = tooth_tail_exponent(u);
        CHECK(x > prev);
        prev = x;
    }

    const double vc = critical_velocities().second;
    CHECK(spine_decay_rate(0.5) == 0.0);
    CHECK(spine_decay_rate(vc) == 0.0);
    prev = 0.0;
    for (double v = 1.35; v < 1.75; v += 0.05) {
        const double chi = spine_decay_rate(v);
        CHECK(chi > prev);
        prev = chi;
    }

    CHECK_THROWS_AS(tooth_decay_rate(-0.5), DomainError);
    CHECK_THROWS_AS(tooth_tail_exponent(-0.5), DomainError);
    CHECK_THROWS_AS(spine_decay_rate(-0.5), DomainError);
}

TEST_CASE("airy function reference table") {
    struct Ref { double x, ai; };
    const Ref table[] = {
        {-20, -0.1764061270779846896}, {-15, 0.2782174908708289295},
        {-10, 0.04024123848644319069}, {-8, -0.05270505035638620262},
        {-5.5, 0.0177815412765749756}, {-4, -0.0702655329492895151},
        {-3, -0.3788142936776580743}, {-2, 0.227407428201685576},
        {-1, 0.5355608832923521188}, {-0.5, 0.4757280916105395888},
        {0, 0.3550280538878172393}, {0.5, 0.2316936064808334898},
        {1, 0.1352924163128814155}, {2, 0.03492413042327437914},
        {3, 0.006591139357460719144}, {4, 0.0009515638512048018736},
        {5.5, 0.00003368531190859981443}, {8, 4.692207616099231626e-8},
        {12, 1.393184688875360839e-13}, {20, 1.691672868670540314e-27},
    };
    for (const auto& r : table)
        CHECK(std::abs(airy_ai(r.x) - r.ai) < 1e-10);
    CHECK_THROWS_AS(airy_ai(20.5), RangeError);
    CHECK_THROWS_AS(airy_ai(-20.5), RangeError);

    double prev = airy_ai(0.0);
    for (double x = 0.5; x <= 20.0; x += 0.5) {
        const double a = airy_ai(x);
        CHECK(a > 0.0);
        CHECK(a < prev);
        prev = a;
    }
}

TEST_CASE("airy function satisfies its differential equation") {
    auto stencil = [](double x, double h) {
        return (-airy_ai(x - 2 * h) + 16 * airy_ai(x - h) - 30 * airy_ai(x)
                + 16 * airy_ai(x + h) - airy_ai(x + 2 * h)) / (12 * h * h);
    };
    for (double x = -4.0; x <= 4.0 + 1e-9; x += 0.25)
        CHECK(std::abs(stencil(x, 3e-3) - x * airy_ai(x)) < 1e-8);
    for (double x = -18.0; x <= 18.0 + 1e-9; x += 0.5)
        CHECK(std::abs(stencil(x, 1e-2) - x * airy_ai(x)) < 1e-6);
}

TEST_CASE("amplitude routines reject invalid arguments") {
    CHECK_THROWS_AS(tooth_amplitude_asymptotic(0, 100, 0.0), DomainError);
    CHECK_THROWS_AS(tooth_amplitude_asymptotic(0, 100, -5.0), DomainError);
    CHECK_THROWS_AS(tooth_amplitude_asymptotic(0, -1, 10.0), DomainError);
    CHECK_THROWS_AS(spine_amplitude_asymptotic(0, 0, 0.0), DomainError);
    CHECK_THROWS_AS(spine_amplitude_asymptotic(0, -2, 10.0), DomainError);
    CHECK_THROWS_AS(tooth_saddles(-0.5), DomainError);
    CHECK_THROWS_AS(spine_saddles(-0.5, 0.0), DomainError);
    CHECK_THROWS_AS(coarse_profile_tooth(-0.1, 0), DomainError);
    CHECK_THROWS_AS(coarse_profile_tooth(2.0, 0), DomainError);
    CHECK_THROWS_AS(coarse_profile_spine(-0.1, 0), DomainError);
    CHECK_THROWS_AS(coarse_profile_spine(critical_velocities().second, 0), DomainError);
    CHECK_THROWS_AS(return_amplitude_asymptotic(0.0), DomainError);
}
