#ifndef OPENCHAIN_PARAMS_HPP
#define OPENCHAIN_PARAMS_HPP

#include <complex>

#include "openchain/errors.hpp"

namespace openchain {

using Complex = std::complex<double>;

inline constexpr Complex I{0.0, 1.0};

/// Model parameters (s, beta, alpha) with the derived boundary parameter
/// g = 1/2 + alpha/beta.  Valid only for s > 1/2, beta > 0, g > 0.
struct SpinParams {
    double s;
    double beta;
    double alpha;
    double g;

    static SpinParams from_alpha(double s, double beta, double alpha) {
        SpinParams p{s, beta, alpha, 0.5 + alpha / beta};
        p.validate();
        return p;
    }

    static SpinParams from_g(double s, double g, double beta) {
        SpinParams p{s, beta, beta * (g - 0.5), g};
        p.validate();
        return p;
    }

    void validate() const {
        if (!(s > 0.5)) throw ConfigError("spin parameter must satisfy s > 1/2");
        if (!(beta > 0.0)) throw ConfigError("length scale must satisfy beta > 0");
        if (!(g > 0.0)) throw ConfigError("boundary parameter must satisfy g = 1/2 + alpha/beta > 0");
    }
};

/// A point of the open upper half-plane, Im z > 0.
struct HPoint {
    Complex z;

    explicit HPoint(Complex value) : z(value) {
        if (!(z.imag() > 0.0)) throw ConfigError("HPoint requires Im z > 0");
    }
};

} // namespace openchain

#endif
