#pragma once

#include <complex>
#include <vector>

#include "comb/errors.hpp"

namespace comb {

using cplx = std::complex<double>;

// Site of the comb graph: spine coordinate n, tooth coordinate j (j = 0 on the spine).
struct Vertex {
    int n = 0;
    int j = 0;
};

inline bool operator==(const Vertex& a, const Vertex& b) { return a.n == b.n && a.j == b.j; }

// Finite window |n| <= L, 0 <= j <= M used to represent states of the infinite comb.
struct Truncation {
    int L = 1;
    int M = 1;

    Truncation() = default;
    Truncation(int L_, int M_);

    int n_count() const { return 2 * L + 1; }
    int j_count() const { return M + 1; }
    int size() const { return n_count() * j_count(); }

    bool contains(const Vertex& v) const {
        return v.n >= -L && v.n <= L && v.j >= 0 && v.j <= M;
    }
    int index(const Vertex& v) const;  // row-major over (n, j)
};

// Wavefunction on a truncation window, dense storage.
class WaveState {
  public:
    explicit WaveState(const Truncation& trunc);

    const Truncation& truncation() const { return trunc_; }

    cplx& at(const Vertex& v) { return amp_[trunc_.index(v)]; }
    const cplx& at(const Vertex& v) const { return amp_[trunc_.index(v)]; }

    std::vector<cplx>& amplitudes() { return amp_; }
    const std::vector<cplx>& amplitudes() const { return amp_; }

    double norm() const;

  private:
    Truncation trunc_;
    std::vector<cplx> amp_;
};

// Vertex degree in the infinite comb: 3 on the spine, 2 on a tooth.
int degree(const Vertex& v);

// Action of the graph Laplacian of the infinite comb, compressed to the window.
// The diagonal keeps the infinite-comb degree everywhere (including window
// boundary sites); hopping terms to sites outside the window are dropped.
WaveState apply_hamiltonian(const WaveState& psi);

// In-place variant writing into out (must share psi's truncation).
void apply_hamiltonian(const WaveState& psi, WaveState& out);

// Upper bound on the operator norm of the Hamiltonian, valid for every window.
double spectral_bound();

}  // namespace comb
