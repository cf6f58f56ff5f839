#include "comb/stokes_atlas.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <vector>

#include "comb/contour.hpp"
#include "comb/errors.hpp"

namespace comb {
namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kImag{0.0, 1.0};

constexpr double kValleyRadius = 1e-3;
constexpr double kFarRadius = 1e3;
constexpr double kImDriftBudget = 1e-8;

cplx w_derivative(const cplx& w, double u, double v) {
    const cplx z = z_of_w(w);
    const cplx dz = 1.0 - 1.0 / (w * w);
    cplx g = kImag * (1.0 - 1.0 / (z * z)) * dz;
    if (u != 0.0) g -= u * dz / z;
    if (v != 0.0) g -= v / w;
    return g;
}

cplx w_second_derivative(const cplx& w, double u, double v) {
    const cplx z = z_of_w(w);
    const cplx dz = 1.0 - 1.0 / (w * w);
    const cplx d2z = 2.0 / (w * w * w);
    cplx g = kImag * (2.0 * dz * dz / (z * z * z) + (1.0 - 1.0 / (z * z)) * d2z);
    if (u != 0.0) g -= u * (d2z * z - dz * dz) / (z * z);
    if (v != 0.0) g += v / (w * w);
    return g;
}

// Real part of the exponent. The real parts of the logs are log-moduli, so
// this is single-valued everywhere off the poles.
double exponent_re(const cplx& w, double u, double v) {
    const cplx z = z_of_w(w);
    double re = std::real(kImag * (z + 1.0 / z - 2.0));
    if (u != 0.0) re -= u * std::log(std::abs(z));
    if (v != 0.0) re -= v * std::log(std::abs(w));
    return re;
}

// The three finite poles of the exponent and, for each, the direction along
// which its real part rises fastest. Near a finite pole the exponent behaves
// like c / (w - p); uphill is the half-plane dot(w - p, c) > 0. At w = 0 the
// leading term gives c = i; at e^{+-i pi/3} it gives c = i / z'(p). At
// infinity the exponent behaves like i w, so downhill is Im w > 0.
const std::array<cplx, 3> kPole = {
    cplx(0.0, 0.0),
    std::polar(1.0, kPi / 3.0),
    std::polar(1.0, -kPi / 3.0),
};
const std::array<cplx, 3> kPoleUphill = {
    cplx(0.0, 1.0),
    std::polar(1.0, kPi / 3.0),
    std::polar(1.0, 2.0 * kPi / 3.0),
};

double nearest_pole_distance(const cplx& w) {
    double d = std::abs(w - kPole[0]);
    d = std::min(d, std::abs(w - kPole[1]));
    return std::min(d, std::abs(w - kPole[2]));
}

Valley valley_of_pole(int i) {
    switch (i) {
        case 0: return Valley::center;
        case 1: return Valley::upper_third;
        default: return Valley::lower_third;
    }
}

int node_of_valley(Valley t) {
    switch (t) {
        case Valley::center: return 0;
        case Valley::upper_third: return 1;
        case Valley::lower_third: return 2;
        default: return 3;
    }
}

// sign = -1 follows the downhill flow, +1 the uphill flow. Termination
// requires the matching side of the local divergence: a downhill path must
// enter a pole disk on the side where the exponent drops.
std::optional<Valley> terminal_at(const cplx& w, int sign) {
    for (int i = 0; i < 3; ++i) {
        const cplx d = w - kPole[i];
        const double r = std::abs(d);
        if (r > kValleyRadius) continue;
        const double side =
            (d.real() * kPoleUphill[i].real() + d.imag() * kPoleUphill[i].imag()) / r;
        if (r <= 1e-5 || sign * side > 0.1) return valley_of_pole(i);
        return std::nullopt;
    }
    if (std::abs(w) >= kFarRadius && -sign * w.imag() > 0.1 * std::abs(w))
        return Valley::infinity;
    return std::nullopt;
}

struct FlowTrace {
    DescentPath path;
    cplx launch{};
    double min_other = std::numeric_limits<double>::infinity();
    std::size_t near_idx = std::size_t(-1);
};

// Below this clearance a flow has effectively run along a saddle connection
// and its exit side carries no information; the caller must resolve the far
// basin from the hit point's own branches instead.
constexpr double kHitRadius = 1e-4;

// One branch of the normalized gradient flow dw/ds = sign * conj(W') / |W'|.
// The imaginary part of the exponent is a first integral; each step measures
// its leak with a Simpson estimate of the chord integral of W' and is
// rejected if the leak or the monotonicity of the real part fails.
FlowTrace trace_flow(const cplx& w_s, double u, double v, const cplx& dir0, int sign,
                     const std::vector<cplx>& others) {
    FlowTrace out;
    out.launch = dir0;
    out.path.seed = w_s;
    out.path.points.push_back(w_s);

    const auto field = [&](const cplx& w) -> cplx {
        const cplx g = w_derivative(w, u, v);
        const double m = std::abs(g);
        if (!(m > 1e-300)) throw StallError("flow field vanished away from the seed");
        return double(sign) * std::conj(g) / m;
    };
    const auto leak_of = [&](const cplx& a, const cplx& b) -> double {
        const cplx dw = b - a;
        const cplx dW = dw / 6.0 *
                        (w_derivative(a, u, v) + 4.0 * w_derivative(0.5 * (a + b), u, v) +
                         w_derivative(b, u, v));
        return std::abs(dW.imag());
    };

    const double delta0 = 1e-5 * (1.0 + std::abs(w_s));
    cplx w = w_s + delta0 * dir0;
    out.path.im_drift += leak_of(w_s, w);
    out.path.points.push_back(w);

    double h = delta0 / 4.0;
    double h_cap = 0.02;
    double step_tol = 5e-13;
    const double re_seed = exponent_re(w_s, u, v);
    const double commit_gate = std::max(40.0, 4.0 * (1.0 + std::abs(re_seed)));
    double re_here = exponent_re(w, u, v);

    for (long step = 0; step < 200000; ++step) {
        if (auto t = terminal_at(w, sign)) {
            out.path.terminal = *t;
            return out;
        }
        // Once the exponent has moved this far past every stationary value the
        // flow can no longer leave the divergence basin it is in; stop at the
        // nearest pole instead of grinding into its stiff neighborhood.
        if (sign * (re_here - re_seed) > commit_gate) {
            for (int i = 0; i < 3; ++i) {
                if (std::abs(w - kPole[i]) <= 0.05) {
                    out.path.terminal = valley_of_pole(i);
                    return out;
                }
            }
        }
        double d_other = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < others.size(); ++m) {
            const double d = std::abs(w - others[m]);
            if (d < d_other) d_other = d;
            if (d < out.min_other) {
                out.min_other = d;
                out.near_idx = m;
            }
        }
        const double dp = nearest_pole_distance(w);
        double allowed =
            std::min(std::max(h_cap, 0.15 * std::abs(w)), std::max(dp / 3.0, 2e-4));
        allowed = std::min(allowed, std::max(d_other / 3.0, 3e-5));
        h = std::min(h, allowed);
        while (true) {
            const cplx k1 = field(w);
            const cplx k2 = field(w + 0.5 * h * k1);
            const cplx k3 = field(w + 0.5 * h * k2);
            const cplx k4 = field(w + h * k3);
            const cplx w1 = w + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            const double leak = leak_of(w, w1);
            const double re_next = exponent_re(w1, u, v);
            if (leak <= step_tol && sign * (re_next - re_here) > 0.0) {
                out.path.im_drift += leak;
                w = w1;
                re_here = re_next;
                break;
            }
            h *= 0.5;
            if (h < 1e-13) throw StallError("flow step size underflowed");
        }
        if (out.path.im_drift > 0.8 * kImDriftBudget && step_tol > 1e-14) {
            step_tol *= 0.125;
            h_cap = std::max(0.25 * h_cap, 1e-3);
        }
        if (out.path.im_drift > kImDriftBudget)
            throw StallError("phase conservation budget exhausted along the flow");
        out.path.points.push_back(w);
        h = std::min(h * 1.3, allowed);
    }
    throw StallError("flow did not reach a valley within the step budget");
}

// Unit directions d with W'' d^2 = sign |W''|: for sign = -1 the two downhill
// branch directions, for +1 the uphill ones.
std::pair<cplx, cplx> branch_directions(const cplx& W2, int sign) {
    cplx d = std::sqrt(double(sign) * std::abs(W2) / W2);
    d /= std::abs(d);
    return {d, -d};
}

// ---------------------------------------------------------------------------
// Contour membership and assembly.

struct ContourEdge {
    int root = -1;
    std::array<DescentPath, 2> branch;
    std::array<int, 2> node{};
    std::array<cplx, 2> launch{};
    std::array<std::array<double, 3>, 2> sweep{};  // arg increase per pole, per entry side
};

double arg_increase(const std::vector<cplx>& pts, const cplx& pole) {
    double total = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        total += std::arg((pts[i] - pole) / (pts[i - 1] - pole));
    return total;
}

std::vector<cplx> connector_arc(const cplx& a, const cplx& b, int node) {
    const cplx p = node == 3 ? cplx(0.0, 0.0) : kPole[node];
    const double avoid = node == 3 ? -kPi / 2.0 : std::arg(kPoleUphill[node]);
    const double ta = std::arg(a - p);
    const double ra = std::abs(a - p);
    const double rb = std::abs(b - p);
    double sweep = std::arg((b - p) / (a - p));
    double off = std::remainder(avoid - ta, 2.0 * kPi);
    if (off < 0.0) off += 2.0 * kPi;  // avoided direction, measured ccw from a
    double ccw = sweep < 0.0 ? sweep + 2.0 * kPi : sweep;
    if (off < ccw + 1e-12 && off > -1e-12) ccw -= 2.0 * kPi;  // ccw sweep hits it: go cw
    const int m = std::max(4, int(std::ceil(std::abs(ccw) / (kPi / 64.0))));
    std::vector<cplx> pts;
    pts.reserve(m + 1);
    for (int i = 0; i <= m; ++i) {
        const double s = double(i) / m;
        pts.push_back(p + (ra + s * (rb - ra)) * std::polar(1.0, ta + s * ccw));
    }
    return pts;
}

struct Assembly {
    std::vector<ContourEdge> edges;
    std::vector<std::pair<int, int>> circuit;  // (edge index, side entered from)
    int orientation = 1;
};

// Traversal of an edge entered from side s runs reverse(branch[s]) then
// branch[1-s]; the tangent at the seed is the launch direction of the exit
// branch.
std::vector<cplx> edge_points(const ContourEdge& e, int s) {
    std::vector<cplx> pts(e.branch[s].points.rbegin(), e.branch[s].points.rend());
    pts.insert(pts.end(), e.branch[1 - s].points.begin() + 1, e.branch[1 - s].points.end());
    return pts;
}

bool circuit_search(const std::vector<ContourEdge>& edges, int start_node, int at,
                    unsigned used, std::vector<std::pair<int, int>>& seq,
                    const std::function<bool()>& full_check) {
    if (used == (1u << edges.size()) - 1u) return at == start_node && full_check();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (used & (1u << e)) continue;
        for (int s = 0; s < 2; ++s) {
            if (edges[e].node[s] != at) continue;
            seq.emplace_back(int(e), s);
            if (circuit_search(edges, start_node, edges[e].node[1 - s], used | (1u << e), seq,
                               full_check))
                return true;
            seq.pop_back();
        }
    }
    return false;
}

// Assembles the downhill branches of the flagged saddles into a closed curve
// (valley ends joined by arcs that stay clear of the local uphill direction)
// and accepts the traversal order whose winding number is +-1 around every
// finite pole, matching the class of a loop around the unit circle.
std::optional<Assembly> assemble_contour(std::vector<ContourEdge> edges) {
    if (edges.empty()) return std::nullopt;
    for (auto& e : edges)
        for (int s = 0; s < 2; ++s) {
            const auto pts = edge_points(e, s);
            for (int p = 0; p < 3; ++p) e.sweep[s][p] = arg_increase(pts, kPole[p]);
        }

    std::array<int, 4> degree{};
    for (const auto& e : edges) {
        ++degree[e.node[0]];
        ++degree[e.node[1]];
    }
    for (int d : degree)
        if (d % 2) return std::nullopt;

    Assembly out;
    std::vector<std::pair<int, int>>& seq = out.circuit;
    const auto winding_ok = [&]() {
        std::array<double, 3> total{};
        for (std::size_t i = 0; i < seq.size(); ++i) {
            const auto& [ei, s] = seq[i];
            for (int p = 0; p < 3; ++p) total[p] += edges[ei].sweep[s][p];
            const auto& [ej, sj] = seq[(i + 1) % seq.size()];
            const cplx from = edges[ei].branch[1 - s].points.back();
            const cplx to = edges[ej].branch[sj].points.back();
            const auto arc = connector_arc(from, to, edges[ei].node[1 - s]);
            for (int p = 0; p < 3; ++p) total[p] += arg_increase(arc, kPole[p]);
        }
        int w0 = int(std::lround(total[0] / (2.0 * kPi)));
        for (int p = 0; p < 3; ++p) {
            const double wp = total[p] / (2.0 * kPi);
            if (std::abs(wp - std::lround(wp)) > 0.05) return false;
            if (std::lround(wp) != w0) return false;
        }
        if (w0 != 1 && w0 != -1) return false;
        out.orientation = w0;
        return true;
    };

    for (int s0 = 0; s0 < 2; ++s0) {
        seq.clear();
        seq.emplace_back(0, s0);
        if (circuit_search(edges, edges[0].node[s0], edges[0].node[1 - s0], 1u, seq,
                           winding_ok)) {
            out.edges = std::move(edges);
            return out;
        }
    }
    return std::nullopt;
}

struct SaddleFlags {
    SpineSaddles ss;
    std::vector<bool> relevant;
    std::vector<cplx> traversal;  // unit tangent of the contour at each relevant saddle
};

void check_arguments(double u, double v) {
    if (!(u >= 0.0) || !(v >= 0.0) || !std::isfinite(u) || !std::isfinite(v))
        throw DomainError("velocities must be finite and nonnegative");
}

SaddleFlags classify_saddles(double u, double v) {
    SaddleFlags out;
    out.ss = spine_saddles(u, v);
    const auto& roots = out.ss.roots;
    const int n = int(roots.size());
    for (const auto& r : roots)
        if (r.multiplicity != 1)
            throw ClassificationAmbiguous("stationary points coalesce at these velocities");
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (std::abs(roots[a].w - roots[b].w) < 1e-4)
                throw ClassificationAmbiguous("stationary points nearly coalesce");

    out.relevant.assign(n, false);
    out.traversal.assign(n, cplx(0.0, 0.0));
    struct AscentBranch {
        Valley term = Valley::center;
        double min_other = std::numeric_limits<double>::infinity();
        int hit = -1;
    };
    std::vector<std::array<AscentBranch, 2>> up(n);
    for (int k = 0; k < n; ++k) {
        std::vector<cplx> others;
        std::vector<int> other_of;
        for (int m = 0; m < n; ++m)
            if (m != k) {
                others.push_back(roots[m].w);
                other_of.push_back(m);
            }
        const auto dirs = branch_directions(roots[k].W_second, +1);
        const std::array<cplx, 2> dir{dirs.first, dirs.second};
        for (int b = 0; b < 2; ++b) {
            FlowTrace t;
            try {
                t = trace_flow(roots[k].w, u, v, dir[b], +1, others);
            } catch (const StallError& e) {
                throw ClassificationAmbiguous(std::string("uphill flow undecided: ") +
                                              e.what());
            }
            up[k][b].term = t.path.terminal;
            up[k][b].min_other = t.min_other;
            up[k][b].hit = t.near_idx == std::size_t(-1) ? -1 : other_of[t.near_idx];
        }
    }
    // A branch that brushed another stationary point ran along a saddle
    // connection; which exit it took is numerical accident. Its far basin is
    // still determined whenever both uphill branches of the hit point agree,
    // so inherit that verdict, sweeping from the top of the landscape down.
    // When the hit point's branches separate, membership genuinely changes
    // across these velocities and the classification must refuse.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return roots[a].re_W > roots[b].re_W; });
    std::vector<std::array<int, 2>> far(n, {-1, -1});
    for (int oi : order) {
        for (int b = 0; b < 2; ++b) {
            const auto& br = up[oi][b];
            if (br.min_other >= kHitRadius) {
                far[oi][b] = br.term == Valley::infinity ? 1 : 0;
                continue;
            }
            const int hit = br.hit;
            if (hit < 0 || roots[hit].re_W <= roots[oi].re_W || far[hit][0] < 0 ||
                far[hit][1] < 0)
                throw ClassificationAmbiguous(
                    "uphill flow meets a stationary point it cannot climb past");
            if (far[hit][0] != far[hit][1])
                throw ClassificationAmbiguous(
                    "uphill flow runs along a connection to a stationary point "
                    "whose branches reach different far basins");
            far[oi][b] = far[hit][0];
        }
    }
    for (int k = 0; k < n; ++k) out.relevant[k] = far[k][0] != far[k][1];

    // Ambiguity tube around a membership boundary: a boundary is a phase
    // coincidence Im W(w_a) = Im W(w_b) whose uphill member sheds the other,
    // which requires the uphill member to sit on the contour itself. Pairs
    // whose exponents agree entirely are symmetric partners, and a phase
    // coincidence with an uphill member off the contour changes no membership;
    // neither is a hazard. For the rest, fire when the linearized velocity
    // distance to the coincidence locus is below the tube width.
    for (int a = 0; a < n; ++a) {
        const cplx Wa = potential_w(roots[a].w, u, v);
        const cplx za = z_of_w(roots[a].w);
        for (int b = a + 1; b < n; ++b) {
            const int hi = roots[a].re_W >= roots[b].re_W ? a : b;
            if (!out.relevant[hi]) continue;
            const cplx Wb = potential_w(roots[b].w, u, v);
            if (std::abs(Wa.real() - Wb.real()) < 1e-8 * (1.0 + std::abs(Wa) + std::abs(Wb)))
                continue;
            const cplx zb = z_of_w(roots[b].w);
            const double gu = -std::arg(za) + std::arg(zb);
            const double gv = -std::arg(roots[a].w) + std::arg(roots[b].w);
            const double grad = std::hypot(gu, gv);
            if (grad < 1e-9) continue;
            if (std::abs(Wa.imag() - Wb.imag()) / grad < 1e-3)
                throw ClassificationAmbiguous(
                    "velocities lie inside the ambiguity tube of a membership boundary");
        }
    }

    std::vector<ContourEdge> edges;
    double closest_down = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        if (!out.relevant[k]) continue;
        ContourEdge e;
        e.root = k;
        const auto dirs = branch_directions(roots[k].W_second, -1);
        std::vector<cplx> others;
        for (int m = 0; m < n; ++m)
            if (m != k) others.push_back(roots[m].w);
        try {
            FlowTrace d0 = trace_flow(roots[k].w, u, v, dirs.first, -1, others);
            FlowTrace d1 = trace_flow(roots[k].w, u, v, dirs.second, -1, others);
            closest_down = std::min({closest_down, d0.min_other, d1.min_other});
            e.branch = {std::move(d0.path), std::move(d1.path)};
            e.launch = {dirs.first, dirs.second};
        } catch (const StallError& err) {
            throw ClassificationAmbiguous(std::string("downhill flow undecided: ") +
                                          err.what());
        }
        e.node = {node_of_valley(e.branch[0].terminal), node_of_valley(e.branch[1].terminal)};
        edges.push_back(std::move(e));
    }
    if (closest_down < kHitRadius)
        throw ClassificationAmbiguous(
            "downhill flow runs along a connection to another stationary point");

    auto asm_opt = assemble_contour(std::move(edges));
    if (!asm_opt)
        throw ClassificationAmbiguous("assembled contour fails the winding check");
    for (const auto& [ei, s] : asm_opt->circuit) {
        const auto& e = asm_opt->edges[ei];
        out.traversal[e.root] = double(asm_opt->orientation) * e.launch[1 - s];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Label continuation.

using LabelTriple = std::array<cplx, 3>;

std::optional<LabelTriple> match_labels(const LabelTriple& prev, const SpineSaddles& ss) {
    LabelTriple next;
    std::array<int, 3> pick{-1, -1, -1};
    for (int i = 0; i < 3; ++i) {
        double best = std::numeric_limits<double>::infinity();
        double second = best;
        for (std::size_t r = 0; r < ss.roots.size(); ++r) {
            const double d = std::abs(ss.roots[r].w - prev[i]);
            if (d < best) {
                second = best;
                best = d;
                pick[i] = int(r);
            } else {
                second = std::min(second, d);
            }
        }
        if (!(best < 0.5 * second)) return std::nullopt;
        next[i] = ss.roots[pick[i]].w;
    }
    if (pick[0] == pick[1] || pick[0] == pick[2] || pick[1] == pick[2]) return std::nullopt;
    return next;
}

struct LabelState {
    double u = 0.0, v = 0.0;
    LabelTriple w;
};

void continue_labels(LabelState& state, double u2, double v2, int depth = 0) {
    if (depth > 48)
        throw ClassificationAmbiguous("label continuation blocked near a coalescence");
    const auto ss = spine_saddles(u2, v2);
    if (auto next = match_labels(state.w, ss)) {
        state = {u2, v2, *next};
        return;
    }
    const double um = 0.5 * (state.u + u2);
    const double vm = 0.5 * (state.v + v2);
    continue_labels(state, um, vm, depth + 1);
    continue_labels(state, u2, v2, depth + 1);
}

// Labels at a point close to the origin: the -1 and -i roots by proximity,
// the decaying branch of the split triple at +1 by smallest Re. On the v = 0
// axis all candidates near +1 share Re = 0 and the branch outside the unit
// circle is the one the deformed contour passes, so ties fall back to |w|.
LabelState anchor_labels(double u, double v) {
    const double s0 = std::min(1.0, 1e-3 / std::max(u, v));
    const double ua = s0 * u, va = s0 * v;
    const auto ss = spine_saddles(ua, va);
    for (const auto& r : ss.roots)
        if (r.multiplicity != 1)
            throw ClassificationAmbiguous("anchor configuration is degenerate");
    LabelState state;
    state.u = ua;
    state.v = va;
    for (int i = 0; i < 2; ++i) {
        const cplx target = i == 0 ? cplx(-1.0, 0.0) : cplx(0.0, -1.0);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& r : ss.roots) {
            const double d = std::abs(r.w - target);
            if (d < best) {
                best = d;
                state.w[i] = r.w;
            }
        }
        if (!(best < 0.3))
            throw RootFindingFailure("anchor root drifted away from its start");
    }
    double best_re = std::numeric_limits<double>::infinity();
    double best_abs = -1.0;
    bool found = false;
    for (const auto& r : ss.roots) {
        if (std::abs(r.w - 1.0) > 0.5) continue;
        const double re = r.re_W;
        if (!found || re < best_re - 1e-9 ||
            (std::abs(re - best_re) <= 1e-9 && std::abs(r.w) > best_abs)) {
            found = true;
            best_re = std::min(best_re, re);
            best_abs = std::abs(r.w);
            state.w[2] = r.w;
        }
    }
    if (!found) throw RootFindingFailure("no candidate branch near +1 at the anchor");
    return state;
}

LabelState labels_at(double u, double v) {
    check_arguments(u, v);
    if (u + v <= 0.0)
        throw ClassificationAmbiguous("labels are undefined at zero velocity");
    if (v == 0.0 && u >= 1.9)
        throw ClassificationAmbiguous("axis continuation meets the tooth-front coalescence");
    if (u == 0.0 && v >= 1.25)
        throw ClassificationAmbiguous("axis continuation meets the spine-front coalescence");
    LabelState state = anchor_labels(u, v);
    double s = std::min(1.0, 1e-3 / std::max(u, v));
    while (s < 1.0) {
        s = std::min(1.0, s * 1.6);
        continue_labels(state, s * u, s * v);
    }
    if (state.u != u || state.v != v) continue_labels(state, u, v);
    return state;
}

TrackedSaddles annotate_tracked(const LabelState& state, const SaddleFlags& flags) {
    TrackedSaddles out;
    for (int i = 0; i < 3; ++i) {
        int pick = -1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < flags.ss.roots.size(); ++r) {
            const double d = std::abs(flags.ss.roots[r].w - state.w[i]);
            if (d < best) {
                best = d;
                pick = int(r);
            }
        }
        if (!(best < 1e-6))
            throw ClassificationAmbiguous("tracked label does not match a stationary point");
        out.w[i] = flags.ss.roots[pick];
        out.relevant[i] = flags.relevant[pick];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Region codes.

struct OrderTable {
    char major;
    std::vector<std::array<int, 3>> orders;
};

const std::array<OrderTable, 4> kOrderTables = {{
    {'A', {{1, 0, 2}, {1, 2, 0}}},
    {'B', {{0, 1, 2}, {1, 0, 2}, {1, 2, 0}}},
    {'C', {{1, 2, 0}, {2, 1, 0}}},
    {'D', {{0, 1, 2}, {1, 0, 2}, {1, 2, 0}, {2, 1, 0}, {2, 0, 1}, {0, 2, 1}}},
}};

}  // namespace

std::pair<DescentPath, DescentPath> trace_descent(const cplx& w_s, double u, double v) {
    check_arguments(u, v);
    const cplx g = w_derivative(w_s, u, v);
    const cplx W2 = w_second_derivative(w_s, u, v);
    if (!(std::abs(g) < 1e-6) || !(std::abs(W2) > 1e-8))
        throw DomainError("trace_descent requires a simple stationary point");
    const auto dirs = branch_directions(W2, -1);
    FlowTrace a = trace_flow(w_s, u, v, dirs.first, -1, {});
    FlowTrace b = trace_flow(w_s, u, v, dirs.second, -1, {});
    return {std::move(a.path), std::move(b.path)};
}

ContourSaddles relevant_saddles(double u, double v) {
    check_arguments(u, v);
    auto flags = classify_saddles(u, v);
    return {std::move(flags.ss), std::move(flags.relevant)};
}

TrackedSaddles tracked_saddles(double u, double v) {
    const LabelState state = labels_at(u, v);
    const SaddleFlags flags = classify_saddles(u, v);
    return annotate_tracked(state, flags);
}

RegionLabel classify_region(double u, double v) {
    check_arguments(u, v);
    if (!(u > 0.0) || !(v > 0.0))
        throw DomainError("region codes are defined on the open quadrant");
    RegionLabel out;
    out.saddles = tracked_saddles(u, v);
    const auto& ts = out.saddles;
    const bool r1 = ts.relevant[0], r2 = ts.relevant[1], r3 = ts.relevant[2];
    if (r2 && r1 && r3) out.major = 'A';
    else if (r2 && !r1 && r3) out.major = 'B';
    else if (r2 && r1 && !r3) out.major = 'C';
    else if (r2 && !r1 && !r3) out.major = 'D';
    else throw ClassificationAmbiguous("unrecognized contour membership pattern");

    out.dominance = {0, 1, 2};
    std::sort(out.dominance.begin(), out.dominance.end(),
              [&](int a, int b) { return ts.w[a].re_W > ts.w[b].re_W; });
    for (int i = 0; i < 2; ++i) {
        const double da = ts.w[out.dominance[i]].re_W;
        const double db = ts.w[out.dominance[i + 1]].re_W;
        if (std::abs(da - db) < 1e-10 * (1.0 + std::abs(da)))
            throw ClassificationAmbiguous("magnitude ordering is tied at these velocities");
    }
    for (const auto& table : kOrderTables) {
        if (table.major != out.major) continue;
        for (std::size_t i = 0; i < table.orders.size(); ++i)
            if (table.orders[i] == out.dominance) {
                out.sub = int(i) + 1;
                return out;
            }
        throw ClassificationAmbiguous("magnitude ordering not seen in this region");
    }
    return out;
}

double stokes_point_on_u_axis() {
    const auto flag = [](double u) -> bool {
        const auto ss = spine_saddles(u, 0.0);
        int k = -1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < ss.roots.size(); ++r) {
            const double d = std::abs(ss.roots[r].w + 1.0);
            if (d < best) {
                best = d;
                k = int(r);
            }
        }
        if (!(best < 1e-6))
            throw RootFindingFailure("the -1 stationary point moved off the axis");
        std::vector<cplx> others;
        for (std::size_t r = 0; r < ss.roots.size(); ++r)
            if (int(r) != k) others.push_back(ss.roots[r].w);
        const auto dirs = branch_directions(ss.roots[k].W_second, +1);
        const auto up0 = trace_flow(ss.roots[k].w, u, 0.0, dirs.first, +1, others);
        const auto up1 = trace_flow(ss.roots[k].w, u, 0.0, dirs.second, +1, others);
        return (up0.path.terminal == Valley::infinity) !=
               (up1.path.terminal == Valley::infinity);
    };
    const auto robust = [&](double u) -> bool {
        for (double off : {0.0, 1e-7, -1e-7, 1e-6, -1e-6}) {
            try {
                return flag(u + off);
            } catch (const StallError&) {
            }
        }
        throw ClassificationAmbiguous("membership undecidable near the bisection point");
    };
    double lo = 2.02, hi = 2.9;
    if (!robust(lo) || robust(hi))
        throw ClassificationAmbiguous("membership flags do not bracket a switch");
    for (int it = 0; it < 24; ++it) {
        const double mid = 0.5 * (lo + hi);
        (robust(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// Shared marching-squares tracer for the coincidence loci. The label grid is
// marched from the anchor corner so each node costs one solve; nodes that
// land on a degenerate configuration are skipped together with their cells.
std::vector<std::pair<double, double>> trace_locus(
    int a, int b, const VelocityRect& box, int grid,
    const std::function<double(const SpineSaddleRoot&, const SpineSaddleRoot&, double, double)>&
        diff) {
    if (a == b || a < 0 || b < 0 || a > 2 || b > 2)
        throw DomainError("locus indices must name two distinct tracked saddles");
    if (grid < 4) throw DomainError("locus grid is too coarse");
    if (!(box.u_min > 0.0) || !(box.v_min > 0.0) || !(box.u_max > box.u_min) ||
        !(box.v_max > box.v_min))
        throw DomainError("locus rectangle must lie in the open quadrant");

    const int nn = grid + 1;
    const auto uat = [&](int i) { return box.u_min + (box.u_max - box.u_min) * i / grid; };
    const auto vat = [&](int j) { return box.v_min + (box.v_max - box.v_min) * j / grid; };

    std::vector<std::optional<LabelState>> nodes(nn * nn);
    const auto idx = [&](int i, int j) { return j * nn + i; };
    for (int j = 0; j < nn; ++j) {
        for (int i = 0; i < nn; ++i) {
            std::optional<LabelState> from;
            if (i > 0 && nodes[idx(i - 1, j)]) from = nodes[idx(i - 1, j)];
            else if (j > 0 && nodes[idx(i, j - 1)]) from = nodes[idx(i, j - 1)];
            try {
                if (!from) {
                    nodes[idx(i, j)] = labels_at(uat(i), vat(j));
                } else {
                    LabelState st = *from;
                    continue_labels(st, uat(i), vat(j));
                    nodes[idx(i, j)] = st;
                }
            } catch (const ClassificationAmbiguous&) {
            } catch (const StallError&) {
            } catch (const RootFindingFailure&) {
            }
        }
    }

    const auto value = [&](const LabelState& st) -> double {
        const auto ss = spine_saddles(st.u, st.v);
        auto m = match_labels(st.w, ss);
        if (!m) throw ClassificationAmbiguous("labels lost while evaluating the locus");
        std::array<const SpineSaddleRoot*, 3> rr{};
        for (int i = 0; i < 3; ++i)
            for (const auto& r : ss.roots)
                if (std::abs(r.w - (*m)[i]) == 0.0) rr[i] = &r;
        for (int i = 0; i < 3; ++i)
            if (!rr[i]) throw ClassificationAmbiguous("labels lost while evaluating the locus");
        return diff(*rr[a], *rr[b], st.u, st.v);
    };

    std::vector<double> f(nn * nn, std::numeric_limits<double>::quiet_NaN());
    for (int j = 0; j < nn; ++j)
        for (int i = 0; i < nn; ++i)
            if (nodes[idx(i, j)]) {
                try {
                    f[idx(i, j)] = value(*nodes[idx(i, j)]);
                } catch (const ClassificationAmbiguous&) {
                    nodes[idx(i, j)].reset();
                }
            }

    // Crossing points live on grid edges; key = (node index, 0 horizontal /
    // 1 vertical edge leaving it).
    std::map<std::pair<int, int>, int> crossing_of_edge;
    std::vector<std::pair<double, double>> crossings;
    const auto polish_edge = [&](int i0, int j0, int i1, int j1) -> std::pair<double, double> {
        LabelState lo = *nodes[idx(i0, j0)];
        double flo = f[idx(i0, j0)];
        double tlo = 0.0, thi = 1.0;
        const double u0 = uat(i0), v0 = vat(j0), u1 = uat(i1), v1 = vat(j1);
        for (int it = 0; it < 64; ++it) {
            const double tm = 0.5 * (tlo + thi);
            LabelState st = lo;
            continue_labels(st, u0 + (u1 - u0) * tm, v0 + (v1 - v0) * tm);
            const double fm = value(st);
            if (std::abs(fm) < 1e-8) return {st.u, st.v};
            if ((fm < 0.0) == (flo < 0.0)) {
                tlo = tm;
                lo = st;
                flo = fm;
            } else {
                thi = tm;
            }
        }
        throw ClassificationAmbiguous("locus polish failed to converge");
    };

    struct CellLink {
        std::vector<int> pts;
    };
    std::map<std::pair<int, int>, CellLink> cells;
    for (int j = 0; j < nn; ++j) {
        for (int i = 0; i < nn; ++i) {
            for (int dir = 0; dir < 2; ++dir) {
                const int i1 = i + (dir == 0 ? 1 : 0);
                const int j1 = j + (dir == 1 ? 1 : 0);
                if (i1 >= nn || j1 >= nn) continue;
                if (!nodes[idx(i, j)] || !nodes[idx(i1, j1)]) continue;
                const double fa = f[idx(i, j)], fb = f[idx(i1, j1)];
                if (!((fa < 0.0) != (fb < 0.0))) continue;
                int id;
                try {
                    crossings.push_back(polish_edge(i, j, i1, j1));
                    id = int(crossings.size()) - 1;
                } catch (const ClassificationAmbiguous&) {
                    continue;
                } catch (const StallError&) {
                    continue;
                }
                crossing_of_edge[{idx(i, j), dir}] = id;
                // Register with the one or two touching cells.
                if (dir == 0) {
                    if (j < grid) cells[{i, j}].pts.push_back(id);
                    if (j > 0) cells[{i, j - 1}].pts.push_back(id);
                } else {
                    if (i < grid) cells[{i, j}].pts.push_back(id);
                    if (i > 0) cells[{i - 1, j}].pts.push_back(id);
                }
            }
        }
    }

    // Link crossings through cells, then walk the longest chain.
    std::vector<std::vector<int>> adj(crossings.size());
    const auto link = [&](int p, int q) {
        adj[p].push_back(q);
        adj[q].push_back(p);
    };
    for (const auto& [cell, cl] : cells) {
        if (cl.pts.size() == 2) link(cl.pts[0], cl.pts[1]);
        else if (cl.pts.size() == 4) {
            const auto d = [&](int p, int q) {
                return std::hypot(crossings[p].first - crossings[q].first,
                                  crossings[p].second - crossings[q].second);
            };
            const auto& p = cl.pts;
            if (d(p[0], p[1]) + d(p[2], p[3]) <= d(p[0], p[2]) + d(p[1], p[3])) {
                link(p[0], p[1]);
                link(p[2], p[3]);
            } else {
                link(p[0], p[2]);
                link(p[1], p[3]);
            }
        }
    }
    std::vector<std::pair<double, double>> best;
    std::vector<char> used(crossings.size(), 0);
    for (std::size_t s = 0; s < crossings.size(); ++s) {
        if (used[s] || adj[s].size() > 1) continue;
        std::vector<std::pair<double, double>> chain;
        int prev = -1, cur = int(s);
        while (cur >= 0 && !used[cur]) {
            used[cur] = 1;
            chain.push_back(crossings[cur]);
            int next = -1;
            for (int q : adj[cur])
                if (q != prev && !used[q]) next = q;
            prev = cur;
            cur = next;
        }
        if (chain.size() > best.size()) best = std::move(chain);
    }
    if (best.empty()) {
        // Closed loops have no degree-1 start; fall back to any unused point.
        for (std::size_t s = 0; s < crossings.size(); ++s) {
            if (used[s]) continue;
            std::vector<std::pair<double, double>> chain;
            int prev = -1, cur = int(s);
            while (cur >= 0 && !used[cur]) {
                used[cur] = 1;
                chain.push_back(crossings[cur]);
                int next = -1;
                for (int q : adj[cur])
                    if (q != prev && !used[q]) next = q;
                prev = cur;
                cur = next;
            }
            if (chain.size() > best.size()) best = std::move(chain);
        }
    }
    return best;
}

}  // namespace

std::vector<std::pair<double, double>> anti_stokes_line(int a, int b, const VelocityRect& box,
                                                        int grid) {
    return trace_locus(a, b, box, grid,
                       [](const SpineSaddleRoot& ra, const SpineSaddleRoot& rb, double, double) {
                           return ra.re_W - rb.re_W;
                       });
}

std::vector<std::pair<double, double>> stokes_line(int a, int b, const VelocityRect& box,
                                                   int grid) {
    return trace_locus(a, b, box, grid,
                       [](const SpineSaddleRoot& ra, const SpineSaddleRoot& rb, double u,
                          double v) {
                           return potential_w(ra.w, u, v).imag() -
                                  potential_w(rb.w, u, v).imag();
                       });
}

std::pair<double, double> equal_magnitude_point() {
    // Coarse scan for a seed. All three exponents vanish together at the
    // origin, so the raw spread is normalized by their total size to keep the
    // scan from drifting toward that trivial coincidence.
    const int G = 36;
    const VelocityRect box{0.1, 2.3, 0.1, 2.4};
    double su = 0.0, sv = 0.0;
    double best = std::numeric_limits<double>::infinity();
    LabelState seed;
    for (int j = 0; j <= G; ++j) {
        for (int i = 0; i <= G; ++i) {
            const double u = box.u_min + (box.u_max - box.u_min) * i / G;
            const double v = box.v_min + (box.v_max - box.v_min) * j / G;
            try {
                LabelState st = labels_at(u, v);
                const auto ss = spine_saddles(u, v);
                auto m = match_labels(st.w, ss);
                if (!m) continue;
                std::array<double, 3> re{};
                for (int k = 0; k < 3; ++k)
                    for (const auto& r : ss.roots)
                        if (r.w == (*m)[k]) re[k] = r.re_W;
                const double spread = std::max({std::abs(re[0] - re[1]),
                                                std::abs(re[1] - re[2]),
                                                std::abs(re[0] - re[2])});
                const double size = std::abs(re[0]) + std::abs(re[1]) + std::abs(re[2]);
                const double score = spread / std::max(0.05, size);
                if (score < best) {
                    best = score;
                    su = u;
                    sv = v;
                    seed = st;
                }
            } catch (const ClassificationAmbiguous&) {
            } catch (const StallError&) {
            } catch (const RootFindingFailure&) {
            }
        }
    }
    if (!(best < std::numeric_limits<double>::infinity()))
        throw RootFindingFailure("coarse scan found no usable seed");

    // Damped Newton on the two Re differences; the velocity gradient of Re at
    // a stationary point is (-log|z|, -log|w|).
    LabelState st = seed;
    double u = su, v = sv;
    for (int it = 0; it < 80; ++it) {
        const auto ss = spine_saddles(u, v);
        auto m = match_labels(st.w, ss);
        if (!m) throw RootFindingFailure("labels lost during the Newton polish");
        std::array<cplx, 3> w{};
        std::array<double, 3> re{};
        for (int k = 0; k < 3; ++k) {
            w[k] = (*m)[k];
            for (const auto& r : ss.roots)
                if (r.w == w[k]) re[k] = r.re_W;
        }
        const double f1 = re[0] - re[1];
        const double f2 = re[1] - re[2];
        if (std::max(std::abs(f1), std::abs(f2)) < 1e-12) return {u, v};
        const auto gu = [&](int k) { return -std::log(std::abs(z_of_w(w[k]))); };
        const auto gv = [&](int k) { return -std::log(std::abs(w[k])); };
        const double a11 = gu(0) - gu(1), a12 = gv(0) - gv(1);
        const double a21 = gu(1) - gu(2), a22 = gv(1) - gv(2);
        const double det = a11 * a22 - a12 * a21;
        if (std::abs(det) < 1e-14)
            throw RootFindingFailure("degenerate Jacobian in the Newton polish");
        double du = -(a22 * f1 - a12 * f2) / det;
        double dv = -(-a21 * f1 + a11 * f2) / det;
        double lambda = 1.0;
        while (lambda > 1e-6) {
            const double tu = std::clamp(u + lambda * du, box.u_min, box.u_max);
            const double tv = std::clamp(v + lambda * dv, box.v_min, box.v_max);
            if (tu == u && tv == v) break;
            try {
                LabelState trial = st;
                continue_labels(trial, tu, tv);
                st = trial;
                u = tu;
                v = tv;
                break;
            } catch (const ClassificationAmbiguous&) {
                lambda *= 0.5;
            }
        }
        if (lambda <= 1e-6)
            throw RootFindingFailure("Newton step blocked near a coalescence");
    }
    throw RootFindingFailure("equal-magnitude point did not converge");
}

cplx bulk_amplitude_asymptotic(int n, int j, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("time must be positive");
    if (n < 0 || j < 0 || n + j < 1)
        throw DomainError("bulk asymptotics need a target away from the origin");
    const double u = double(j) / t;
    const double v = double(n) / t;
    const auto flags = classify_saddles(u, v);
    cplx sum = 0.0;
    for (std::size_t k = 0; k < flags.ss.roots.size(); ++k) {
        if (!flags.relevant[k]) continue;
        const auto& r = flags.ss.roots[k];
        const cplx z = z_of_w(r.w);
        const cplx pref = (1.0 - 1.0 / (z * z)) / r.w;
        const cplx expo = kImag * t * (z + 1.0 / z - 2.0) - double(j) * std::log(z) -
                          double(n) * std::log(r.w);
        const cplx gauss = std::sqrt(2.0 * kPi / (t * std::abs(r.W_second)));
        sum += pref * std::exp(expo) * flags.traversal[k] * gauss;
    }
    return sum / (2.0 * kPi * kImag);
}

}  // namespace comb
