#pragma once

#include <stdexcept>
#include <string>

namespace comb {

// Argument outside the mathematical domain of an operation.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Iterative scheme exhausted its budget before reaching the requested tolerance.
struct ToleranceNotReached : std::runtime_error {
    explicit ToleranceNotReached(const std::string& msg) : std::runtime_error(msg) {}
};

// Square-root kernel evaluated on its branch cut, where it is two-valued.
struct OnCutError : std::runtime_error {
    explicit OnCutError(const std::string& msg) : std::runtime_error(msg) {}
};

// Contour quadrature failed to converge under node doubling.
struct QuadratureDivergence : std::runtime_error {
    explicit QuadratureDivergence(const std::string& msg) : std::runtime_error(msg) {}
};

// Polynomial or nonlinear root solve did not converge to the requested residual.
struct RootFindingFailure : std::runtime_error {
    explicit RootFindingFailure(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation point outside the supported range of a special-function routine.
struct RangeError : std::runtime_error {
    explicit RangeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Descent-path tracer stalled before reaching a valley.
struct StallError : std::runtime_error {
    explicit StallError(const std::string& msg) : std::runtime_error(msg) {}
};

// Saddle relevance could not be decided within the configured margin.
struct ClassificationAmbiguous : std::runtime_error {
    explicit ClassificationAmbiguous(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace comb
