#pragma once

#include <utility>
#include <vector>

namespace comb {

// Gauss-Legendre rule on [-1, 1]; nodes ascending, weights positive.
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

// Nodes computed by Newton iteration on the Legendre recurrence; cached per n.
const GaussRule& gauss_legendre(int n);

// Same rule mapped to [a, b].
GaussRule gauss_legendre_on(int n, double a, double b);

}  // namespace comb
