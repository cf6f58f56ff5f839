#include "comb/comb_model.hpp"

#include <cmath>

namespace comb {

Truncation::Truncation(int L_, int M_) : L(L_), M(M_) {
    if (L < 1 || M < 1) throw DomainError("Truncation: L and M must be >= 1");
}

int Truncation::index(const Vertex& v) const {
    if (!contains(v)) throw DomainError("Truncation::index: vertex outside window");
    return (v.n + L) * (M + 1) + v.j;
}

WaveState::WaveState(const Truncation& trunc) : trunc_(trunc), amp_(trunc.size(), cplx(0.0, 0.0)) {}

double WaveState::norm() const {
    double s = 0.0;
    for (const cplx& a : amp_) s += std::norm(a);
    return std::sqrt(s);
}

int degree(const Vertex& v) {
    if (v.j < 0) throw DomainError("degree: j must be >= 0");
    return v.j == 0 ? 3 : 2;
}

void apply_hamiltonian(const WaveState& psi, WaveState& out) {
    const Truncation& tr = psi.truncation();
    if (!(out.truncation().L == tr.L && out.truncation().M == tr.M))
        throw DomainError("apply_hamiltonian: truncation mismatch");
    const int L = tr.L, M = tr.M, jc = M + 1;
    const cplx* in = psi.amplitudes().data();
    cplx* o = out.amplitudes().data();

    for (int ni = 0; ni < 2 * L + 1; ++ni) {
        const cplx* col = in + ni * jc;
        cplx* oc = o + ni * jc;
        // spine site: degree 3, neighbors (n-1,0), (n+1,0), (n,1)
        cplx acc = 3.0 * col[0];
        if (ni > 0) acc -= in[(ni - 1) * jc];
        if (ni < 2 * L) acc -= in[(ni + 1) * jc];
        acc -= col[1];
        oc[0] = acc;
        // tooth sites: degree 2, neighbors (n,j-1), (n,j+1)
        for (int j = 1; j <= M; ++j) {
            cplx a = 2.0 * col[j] - col[j - 1];
            if (j < M) a -= col[j + 1];
            oc[j] = a;
        }
    }
}

WaveState apply_hamiltonian(const WaveState& psi) {
    WaveState out(psi.truncation());
    apply_hamiltonian(psi, out);
    return out;
}

double spectral_bound() { return 6.0; }

}  // namespace comb
