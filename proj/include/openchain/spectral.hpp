#ifndef OPENCHAIN_SPECTRAL_HPP
#define OPENCHAIN_SPECTRAL_HPP

#include <functional>

#include "openchain/halfplane.hpp"
#include "openchain/params.hpp"

namespace openchain::spectral {

/// Eigenfunction Psi_lambda(z) = 2F1(s + i lambda, s - i lambda, s + g;
/// 1/2 + i z / (2 beta)) of the one-particle Hamiltonian, with analytic
/// derivatives from the contiguous hypergeometric relations.
struct Eigenfunction {
    SpinParams params;
    double lambda = 0.0;

    Complex eval(Complex z) const;
    Complex deriv1(Complex z) const;
    Complex deriv2(Complex z) const;

    /// Handle bundle with decay_exponent = s (the large-|z| power law).
    halfplane::AnalyticFn fn() const;
};

/// Psi_lambda(z); invariant under lambda -> -lambda.
Complex psi(const SpinParams& params, double lambda, HPoint z);

/// Half-line eigenfunction Phi_lambda(y) = 2F1(s +- i lambda, s + g; -y),
/// real for real y >= 0.
Complex phi(const SpinParams& params, double lambda, double y);

/// (z^2 + beta^2) f'' + ((2s+1) z + 2 i alpha) f' + s^2 f at z, using the
/// supplied derivative handles or the Cauchy-circle fallback.
Complex apply_hamiltonian(const SpinParams& params,
                          const halfplane::AnalyticFn& f, HPoint z);

struct CutoffOptions {
    int angular_nodes = 48;
    int radial_gl = 16;
};

/// Scalar product with radial cutoff r <= R:
///   (2s-1)/pi int_0^R dr int_0^pi dphi (2 r sin phi)^(2s-2) r
///     conj(f(r e^{i phi})) h(r e^{i phi}).
Complex scalar_product_cutoff(const halfplane::AnalyticFn& f,
                              const halfplane::AnalyticFn& h,
                              const SpinParams& params, double R,
                              const CutoffOptions& opts = {});

/// Closed two-term asymptotic form of <Psi_rho | Psi_lambda>_R for large
/// R (boundary-term calculation), including the lambda -> -lambda image.
/// Requires lambda != +-rho where the displayed form has a removable
/// singularity.
Complex cutoff_asymptotic(const SpinParams& params, double rho, double lambda,
                          double R);

/// Spectral density mu(lambda) =
///   |Gamma^2(s+i lam) Gamma(g+i lam) / (Gamma(s+g) Gamma(2 i lam))|^2
///   / (4 pi (2 beta)^{2s} Gamma(2s)).
double mu(const SpinParams& params, double lambda);

/// Half-line density mu_hat = |Gamma(s+i lam) Gamma(g+i lam) /
/// (Gamma(s+g) Gamma(2 i lam))|^2 / (4 pi).
double mu_hat(const SpinParams& params, double lambda);

/// Half-line weight m(y) = y^{s+g-1} (1+y)^{s-g}.
double m_weight(const SpinParams& params, double y);

/// Coefficient mu^{-1}(lambda) of the symmetrized delta pair in the
/// eigenfunction scalar product.  Throws PoleError at lambda = 0.
double orthogonality_coefficient(const SpinParams& params, double lambda);

/// Truncated spectral synthesis
///   int_{-Lambda}^{Lambda} d lambda mu(lambda) Psi_lambda(z)
///   conj(Psi_lambda(w)),
/// expected to converge to the identity kernel e^{i pi s} (z-conj w)^{-2s}.
/// `nodes` is the Gauss-Legendre order per unit lambda-panel.  Throws
/// TruncationError when the integrand at the cut exceeds 1e-3 of the
/// accumulated value.
Complex completeness_kernel(const SpinParams& params, HPoint z, HPoint w,
                            double lambda_cut, int nodes = 16);

/// Closed form of int_R d lam Gamma(a + i lam) Gamma(b - i lam) z^{i lam}
///   = 2 pi Gamma(a+b) z^b / (1+z)^{a+b};  Re a, Re b > 0.
Complex gamma_integral_I1(Complex a, Complex b, Complex zarg);

/// Degenerate de Branges-Wilson integral
///   int_R d lam prod_j Gamma(a_j +- i lam) / Gamma(+- 2 i lam)
///   = 4 pi Gamma(a1+a2) Gamma(a1+a3) Gamma(a2+a3);  Re a_j > 0.
Complex dbw_integral(Complex a1, Complex a2, Complex a3);

/// Function on the half-line y > 0 with claimed power-law bound
/// |f(y)| = O(y^{growth_exponent}) as y -> infinity.
struct HalfLineFn {
    std::function<Complex(double)> eval;
    double growth_exponent = 0.0;
};

/// [U psi](y) = int Dz e^{i pi s} (i beta (1+2y) - conj z)^{-2s} psi(z),
/// the half-plane -> half-line bridge (reproduces analytic psi at the
/// point i beta (1+2y)).
Complex transform_U(const halfplane::AnalyticFn& psi_fn,
                    const SpinParams& params, double y,
                    const halfplane::HQuadGrid& grid,
                    const halfplane::QuadOptions& opts = {});

/// [U^dag chi](z) = int_0^infty dy m(y) e^{i pi s}
///   (z + i beta (1+2y))^{-2s} chi(y).  Throws DivergenceError when the
/// declared growth of chi defeats the kernel decay.
Complex transform_Udag(const HalfLineFn& chi, const SpinParams& params,
                       HPoint z, int subpanels = 1, int gl_nodes = 16);

/// [T psi](lambda) = int Dz conj(Psi_lambda(z)) psi(z).
Complex transform_T(const halfplane::AnalyticFn& psi_fn,
                    const SpinParams& params, double lambda,
                    const halfplane::HQuadGrid& grid,
                    const halfplane::QuadOptions& opts = {});

/// Index hypergeometric (Jacobi) transform
///   [J psi](lambda) = int_0^infty dy m(y) Phi_lambda(y) psi(y).
Complex index_transform_J(const HalfLineFn& psi_y, const SpinParams& params,
                          double lambda, int subpanels = 1, int gl_nodes = 16);

/// Residual of the Mellin-Barnes-derived relation expressing Psi_lambda(z)
/// through the half-line integral of Phi_lambda (identification
/// r = s+g, rho = 2s, p = g - i lambda, q = g + i lambda).
double mellin_barnes_identity_check(const SpinParams& params, double lambda,
                                    HPoint z);

} // namespace openchain::spectral

#endif
