#ifndef OPENCHAIN_SPECFUN_HPP
#define OPENCHAIN_SPECFUN_HPP

#include <complex>

#include "openchain/params.hpp"

namespace openchain::specfun {

/// Principal-branch log-gamma.  exp(log_gamma(z)) == Gamma(z) to ~1e-14
/// relative away from poles.  Throws PoleError on {0, -1, -2, ...}
/// (within 1e-12).
Complex log_gamma(Complex z);

/// Gamma(z) = exp(log_gamma(z)).
Complex gamma(Complex z);

/// log(sin(pi z)), overflow-safe for large |Im z|.
Complex log_sin_pi(Complex z);

/// Gamma(a)/Gamma(b) computed in log space.
Complex gamma_ratio(Complex a, Complex b);

/// True when z is within tol of a non-positive integer.
bool near_nonpositive_integer(Complex z, double tol = 1e-12);

struct Hyp2F1Args {
    Complex a, b, c, w;
};

/// Gauss hypergeometric 2F1(a,b,c;w) on the principal branch.
/// Strategy by region: power series for |w| <= 0.75, Pfaff map for
/// Re w < 1/2, large-|w| connection formula for |w| >= 5, Euler-integral
/// quadrature otherwise.  Throws BranchCutError on w in [1, inf) and
/// PoleError when c is a non-positive integer.
Complex hyp2f1(const Hyp2F1Args& args);
Complex hyp2f1(Complex a, Complex b, Complex c, Complex w);

/// d/dw 2F1 = (ab/c) 2F1(a+1, b+1, c+1; w).
Complex hyp2f1_deriv(Complex a, Complex b, Complex c, Complex w);

/// d^2/dw^2 2F1.
Complex hyp2f1_deriv2(Complex a, Complex b, Complex c, Complex w);

/// Vertical Mellin-Barnes contour R + i*offset, truncated at |Re rho| <=
/// truncation, with `nodes` Gauss-Legendre points per unit-2 panel.
struct ContourSpec {
    double offset = 0.5;
    double truncation = 40.0;
    int nodes = 16;
};

/// 2F1 through the Barnes integral representation.  The contour must
/// separate the pole series; throws ContourError when a pole lies within
/// 1e-6 of it and TailError when the truncation tail exceeds tolerance.
Complex hyp2f1_barnes(const Hyp2F1Args& args, const ContourSpec& contour,
                      double tol = 1e-8);

/// Coefficient c(lambda) of the large-|z| eigenfunction asymptotics:
/// c = Gamma(2 i lam) Gamma(s+g) / (Gamma(s + i lam) Gamma(g + i lam))
///     * (2 beta)^(s - i lam) * exp(i pi s / 2 + pi lam / 2).
Complex asym_coeff_c(const SpinParams& params, double lambda);

/// Two-term large-|z| asymptotics c(lam) z^(-s+i lam) + c(-lam) z^(-s-i lam).
Complex psi_asymptotic(const SpinParams& params, double lambda, Complex z);

} // namespace openchain::specfun

#endif
