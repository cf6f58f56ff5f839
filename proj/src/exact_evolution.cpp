#include "comb/exact_evolution.hpp"

#include <algorithm>
#include <cmath>

#include "comb/errors.hpp"

namespace comb {

static std::vector<double> bessel_small_y(double y, int K) {
    // ascending series, adequate below y ~ 1 where cancellation is absent
    std::vector<double> out(K + 1, 0.0);
    for (int k = 0; k <= K; ++k) {
        double term = 1.0;
        for (int i = 1; i <= k; ++i) term *= (y / 2) / i;
        if (term == 0.0) break;
        double sum = 0.0, t = term;
        for (int m = 0; m < 40 && std::abs(t) > 1e-300; ++m) {
            sum += t;
            t *= -(y / 2) * (y / 2) / ((m + 1.0) * (k + m + 1.0));
        }
        out[k] = sum;
    }
    return out;
}

std::vector<double> bessel_j_sequence(double y, int K) {
    if (y < 0 || K < 0) throw DomainError("bessel_j_sequence: need y >= 0, K >= 0");
    if (y < 1.0) return bessel_small_y(y, K);

    // Downward recursion must be seeded past the turning point near k ~ y,
    // where J_k is the minimal solution, even when only small orders are asked for.
    int turn = static_cast<int>(std::ceil(y + 12.0 * std::cbrt(y)));
    int base = std::max(K, turn);
    int start = base + 50 + static_cast<int>(0.1 * base);
    std::vector<double> j(start + 2, 0.0);
    j[start + 1] = 0.0;
    j[start] = 1e-30;
    for (int k = start; k >= 1; --k) {
        j[k - 1] = (2.0 * k / y) * j[k] - j[k + 1];
        if (std::abs(j[k - 1]) > 1e250) {
            double s = 1e-250;
            for (int i = k - 1; i <= start + 1; ++i) j[i] *= s;
        }
    }
    double norm = j[0];
    for (int k = 2; k <= start; k += 2) norm += 2.0 * j[k];
    std::vector<double> out(K + 1);
    for (int k = 0; k <= K; ++k) out[k] = j[k] / norm;
    return out;
}

Truncation truncation_for(double t, int margin) {
    if (t < 0) t = -t;
    int reach = static_cast<int>(std::ceil(3.0 * t)) + margin;
    return Truncation(std::max(reach, 1), std::max(reach, 1));
}

// X = (H - 3)/3 maps the spectrum into [-1, 1]
static void apply_scaled(const WaveState& in, WaveState& out) {
    apply_hamiltonian(in, out);
    const cplx* a = in.amplitudes().data();
    cplx* b = out.amplitudes().data();
    const size_t N = in.amplitudes().size();
    for (size_t i = 0; i < N; ++i) b[i] = (b[i] - 3.0 * a[i]) / 3.0;
}

WaveState evolve(const WaveState& psi0, double t, double tol) {
    if (tol <= 0) throw DomainError("evolve: tol must be positive");
    if (t == 0.0) return psi0;

    const double y = 3.0 * std::abs(t);
    const double sgn = t > 0 ? 1.0 : -1.0;
    const int cap = static_cast<int>(16.0 * (std::abs(t) + 1.0));

    int K = static_cast<int>(std::ceil(y + 12.0 * std::cbrt(std::max(y, 1.0)) + 20.0));
    K = std::min(K, cap);
    std::vector<double> J;
    for (;;) {
        J = bessel_j_sequence(y, K);
        double tail = 0.0;
        for (int k = std::max(0, K - 7); k <= K; ++k) tail += std::abs(J[k]);
        if (tail < tol / 10.0) break;
        if (K >= cap)
            throw ToleranceNotReached("evolve: Chebyshev degree cap reached before tail < tol/10");
        K = std::min(static_cast<int>(K * 1.3) + 20, cap);
    }

    // e^{-i t H} = e^{-3 i t} [ J_0 + 2 sum_k (-i sgn)^k J_k T_k(X) ],  X = (H-3)/3
    const size_t N = psi0.amplitudes().size();
    WaveState tprev = psi0;           // T_0 psi
    WaveState tcur(psi0.truncation());
    WaveState out(psi0.truncation());
    apply_scaled(psi0, tcur);         // T_1 psi

    const cplx mi(0.0, -sgn);
    cplx ck(1.0, 0.0);  // (-i sgn)^k
    {
        const cplx* p0 = tprev.amplitudes().data();
        const cplx* p1 = tcur.amplitudes().data();
        cplx* o = out.amplitudes().data();
        cplx c1 = 2.0 * mi * J[1];
        for (size_t i = 0; i < N; ++i) o[i] = J[0] * p0[i] + c1 * p1[i];
    }
    ck = mi * mi;
    WaveState tnext(psi0.truncation());
    for (int k = 2; k <= K; ++k) {
        apply_scaled(tcur, tnext);
        cplx* nx = tnext.amplitudes().data();
        const cplx* pv = tprev.amplitudes().data();
        cplx* o = out.amplitudes().data();
        const cplx coef = 2.0 * ck * J[k];
        for (size_t i = 0; i < N; ++i) {
            nx[i] = 2.0 * nx[i] - pv[i];
            o[i] += coef * nx[i];
        }
        std::swap(tprev.amplitudes(), tcur.amplitudes());
        std::swap(tcur.amplitudes(), tnext.amplitudes());
        ck *= mi;
    }

    const cplx phase = std::exp(cplx(0.0, -3.0 * t));
    for (auto& a : out.amplitudes()) a *= phase;
    return out;
}

cplx amplitude_exact(const Vertex& origin, const Vertex& target, double t, double tol) {
    Truncation base = truncation_for(t);
    int L = base.L + std::max(std::abs(origin.n), std::abs(target.n));
    int M = base.M + std::max(origin.j, target.j);
    Truncation tr(L, M);
    WaveState psi(tr);
    psi.at(origin) = 1.0;
    if (t == 0.0) return origin == target ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
    WaveState evolved = evolve(psi, t, tol);
    return evolved.at(target);
}

}  // namespace comb
