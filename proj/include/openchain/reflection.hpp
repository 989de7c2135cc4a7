#ifndef OPENCHAIN_REFLECTION_HPP
#define OPENCHAIN_REFLECTION_HPP

#include "openchain/halfplane.hpp"
#include "openchain/params.hpp"

namespace openchain::reflection {

/// Parameters of the spin-intertwining integral operator K(s, x).
struct ReflectParams {
    SpinParams params;
    Complex x;

    /// Integrability of the beta-kernel endpoints: Re(s - x) > 0 and
    /// Re(g + x) > 0.  Throws EndpointSingularityError otherwise.
    void validate() const;
};

/// Direct Mobius-path beta integral:
///   (2 i beta)^{s+x} / Gamma(s-x) * int_0^1 (1-t)^{s-x-1} t^{g+x-1}
///     (z + ib - t(z - ib))^{-s-x} psi(ib (z+ib+t(z-ib)) / (z+ib-t(z-ib))) dt.
/// Within 1e-6 of x = s the operator is the identity and psi(z) is
/// returned directly.
Complex reflect_v1(const ReflectParams& rp, const halfplane::AnalyticFn& psi,
                   HPoint z, int nodes = 80);

/// Deformed-contour form
///   (2 i beta)^{s-x} / Gamma(s-x) * (z + ib)^{g-s} * int_0^1
///     (1-u)^{s-x-1} u^{g+x-1} (u(z-ib) + 2ib)^{x-g} psi(u(z-ib) + ib) du,
/// or its first/second z-derivative with differentiation under the
/// integral sign (order 1 and 2 need psi.deriv1 / psi.deriv2).
Complex reflect_v2(const ReflectParams& rp, const halfplane::AnalyticFn& psi,
                   HPoint z, int order = 0, int nodes = 80);

struct KernelEval {
    Complex value;
    double est_error = 0.0;
    enum class Rep { V1, V2, V3 } representation = Rep::V3;
};

/// Double half-plane integral representation
///   e^{2 pi i s} (2 i beta)^{s-x} G(g+x) G(3s-g) / G(2s)^2 * (z+ib)^{g-s}
///   * int Dw Dv (z - conj v)^{-g-x} (ib - conj v)^{x-s}
///               (v - conj w)^{g-3s} (w + ib)^{x-g} psi(w).
/// `grid` sets the outer (w) resolution; the error estimate comes from one
/// joint refinement of both grids.  Parallel over outer nodes; thread count
/// from REFLECT_THREADS when set.
KernelEval reflect_v3(const ReflectParams& rp, const halfplane::AnalyticFn& psi,
                      HPoint z, const halfplane::HQuadGrid& grid,
                      double tol = 1e-5);

/// Psi_lambda(z) as the normalized action on the constant function:
/// reflect_v2 at x = i lambda on psi == 1, divided by
/// C(s, i lambda) = Gamma(g + i lambda) / Gamma(g + s).
Complex eigenfunction_via_reflection(const SpinParams& params, double lambda,
                                     HPoint z);

} // namespace openchain::reflection

#endif
