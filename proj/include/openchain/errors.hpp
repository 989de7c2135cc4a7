#ifndef OPENCHAIN_ERRORS_HPP
#define OPENCHAIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace openchain {

// Base class for all numerical failures raised by this library.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Gamma argument hit {0, -1, -2, ...}.
struct PoleError : NumericalError {
    explicit PoleError(const std::string& msg) : NumericalError(msg) {}
};

// 2F1 argument on the cut [1, inf).
struct BranchCutError : NumericalError {
    explicit BranchCutError(const std::string& msg) : NumericalError(msg) {}
};

// Connection-formula denominator degenerate and the limit fallback failed.
struct DegenerateError : NumericalError {
    explicit DegenerateError(const std::string& msg) : NumericalError(msg) {}
};

// Barnes contour passes too close to a pole of the integrand.
struct ContourError : NumericalError {
    explicit ContourError(const std::string& msg) : NumericalError(msg) {}
};

// Truncated contour tail above the requested tolerance.
struct TailError : NumericalError {
    explicit TailError(const std::string& msg) : NumericalError(msg) {}
};

// Exponent bookkeeping says the integral does not converge.
struct DivergenceError : NumericalError {
    explicit DivergenceError(const std::string& msg) : NumericalError(msg) {}
};

// Refinement stalled above the requested tolerance.
struct ConvergenceError : NumericalError {
    explicit ConvergenceError(const std::string& msg) : NumericalError(msg) {}
};

// lambda-integral truncation too aggressive for the requested tolerance.
struct TruncationError : NumericalError {
    explicit TruncationError(const std::string& msg) : NumericalError(msg) {}
};

// Polynomial degree exceeded the configured cap.
struct DegreeCapError : NumericalError {
    explicit DegreeCapError(const std::string& msg) : NumericalError(msg) {}
};

// Beta-kernel endpoint exponent <= -1.
struct EndpointSingularityError : NumericalError {
    explicit EndpointSingularityError(const std::string& msg) : NumericalError(msg) {}
};

// Analytic derivative requested but no handle supplied.
struct MissingDerivativeError : NumericalError {
    explicit MissingDerivativeError(const std::string& msg) : NumericalError(msg) {}
};

// Evaluation point hits the pole of a Moebius map.
struct SingularMapError : NumericalError {
    explicit SingularMapError(const std::string& msg) : NumericalError(msg) {}
};

// Diagram rewrite rule does not apply at the requested vertex.
struct NotApplicableError : NumericalError {
    explicit NotApplicableError(const std::string& msg) : NumericalError(msg) {}
};

// Malformed exponent expression.
struct ParseError : NumericalError {
    ParseError(const std::string& msg, std::size_t pos)
        : NumericalError(msg + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

// Invalid CLI / JSON configuration.
struct ConfigError : NumericalError {
    explicit ConfigError(const std::string& msg) : NumericalError(msg) {}
};

} // namespace openchain

#endif
