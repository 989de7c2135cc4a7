#include "openchain/spectral.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "openchain/errors.hpp"
#include "openchain/quadrature.hpp"
#include "openchain/specfun.hpp"

namespace openchain::spectral {

namespace {

constexpr double pi = std::numbers::pi;

using specfun::asym_coeff_c;
using specfun::hyp2f1;
using specfun::log_gamma;

Complex hyp_arg(const SpinParams& p, Complex z) {
    return 0.5 + I * z / (2.0 * p.beta);
}

// quadrature for int_0^infty F(y) dy with algebraic endpoint behavior:
// y = t/(1-t) on a dyadically graded t-mesh (same grading as the radial
// half-plane rule)
struct YNode {
    double y, w;
};

std::vector<YNode> halfline_rule(int subpanels, int gl_nodes, int depth = 40) {
    std::vector<double> breaks;
    breaks.push_back(0.0);
    for (int k = depth; k >= 1; --k) breaks.push_back(std::ldexp(1.0, -k));
    for (int k = 2; k <= depth; ++k) breaks.push_back(1.0 - std::ldexp(1.0, -k));
    breaks.push_back(1.0);

    const auto& leg = quad::gauss_legendre(gl_nodes);
    std::vector<YNode> rule;
    rule.reserve((breaks.size() - 1) * subpanels * leg.nodes.size());
    for (std::size_t seg = 0; seg + 1 < breaks.size(); ++seg) {
        const double h = (breaks[seg + 1] - breaks[seg]) / subpanels;
        for (int p = 0; p < subpanels; ++p) {
            const double mid = breaks[seg] + (p + 0.5) * h;
            for (std::size_t j = 0; j < leg.nodes.size(); ++j) {
                const double t = mid + 0.5 * h * leg.nodes[j];
                const double om = 1.0 - t;
                rule.push_back({t / om, 0.5 * h * leg.weights[j] / (om * om)});
            }
        }
    }
    return rule;
}

// angular Gauss-Jacobi rule in phi for the weight (2 sin phi)^(2s-2),
// matching the half-plane grid construction
struct PhiRule {
    std::vector<double> phi, w;
};

PhiRule angular_rule(double s, int n) {
    const auto gj = quad::gauss_jacobi(n, 2.0 * s - 2.0, 2.0 * s - 2.0);
    PhiRule rule;
    rule.phi.resize(gj.nodes.size());
    rule.w.resize(gj.nodes.size());
    const double c = std::pow(0.5 * pi, 2.0 * s - 1.0);
    for (std::size_t i = 0; i < gj.nodes.size(); ++i) {
        rule.phi[i] = 0.5 * pi * (1.0 + gj.nodes[i]);
        const double smooth =
            pi * std::sin(rule.phi[i]) / (rule.phi[i] * (pi - rule.phi[i]));
        rule.w[i] = c * gj.weights[i] * std::pow(smooth, 2.0 * s - 2.0);
    }
    return rule;
}

} // namespace

Complex Eigenfunction::eval(Complex z) const {
    const Complex a(params.s, lambda), b(params.s, -lambda),
        c(params.s + params.g);
    return hyp2f1(a, b, c, hyp_arg(params, z));
}

Complex Eigenfunction::deriv1(Complex z) const {
    const Complex a(params.s, lambda), b(params.s, -lambda),
        c(params.s + params.g);
    const Complex dwdz = I / (2.0 * params.beta);
    return specfun::hyp2f1_deriv(a, b, c, hyp_arg(params, z)) * dwdz;
}

Complex Eigenfunction::deriv2(Complex z) const {
    const Complex a(params.s, lambda), b(params.s, -lambda),
        c(params.s + params.g);
    const Complex dwdz = I / (2.0 * params.beta);
    return specfun::hyp2f1_deriv2(a, b, c, hyp_arg(params, z)) * dwdz * dwdz;
}

halfplane::AnalyticFn Eigenfunction::fn() const {
    halfplane::AnalyticFn f;
    const Eigenfunction self = *this;
    f.eval = [self](Complex z) { return self.eval(z); };
    f.deriv1 = [self](Complex z) { return self.deriv1(z); };
    f.deriv2 = [self](Complex z) { return self.deriv2(z); };
    f.decay_exponent = params.s;
    return f;
}

Complex psi(const SpinParams& params, double lambda, HPoint z) {
    return Eigenfunction{params, lambda}.eval(z.z);
}

Complex phi(const SpinParams& params, double lambda, double y) {
    if (y < 0.0) throw ConfigError("phi: requires y >= 0");
    const Complex a(params.s, lambda), b(params.s, -lambda),
        c(params.s + params.g);
    return hyp2f1(a, b, c, Complex(-y));
}

Complex apply_hamiltonian(const SpinParams& params,
                          const halfplane::AnalyticFn& f, HPoint z) {
    const Complex z2 = z.z * z.z;
    return (z2 + params.beta * params.beta) * halfplane::deriv2(f, z) +
           ((2.0 * params.s + 1.0) * z.z + 2.0 * I * params.alpha) *
               halfplane::deriv1(f, z) +
           params.s * params.s * f.eval(z.z);
}

Complex scalar_product_cutoff(const halfplane::AnalyticFn& f,
                              const halfplane::AnalyticFn& h,
                              const SpinParams& params, double R,
                              const CutoffOptions& opts) {
    params.validate();
    if (!(R > 0.0)) throw ConfigError("scalar_product_cutoff: R must be > 0");
    const double s = params.s;
    const auto ang = angular_rule(s, opts.angular_nodes);

    // radius: dyadic grading toward 0 for the r^{2s-1} weight, then
    // half-octave geometric panels up to R (eigenfunction products
    // oscillate in log r, so a fixed node count per log unit converges
    // uniformly in R at O(log R) cost)
    std::vector<double> breaks;
    breaks.push_back(0.0);
    const double r0 = std::min(1.0, R);
    for (int k = 40; k >= 0; --k) breaks.push_back(r0 * std::ldexp(1.0, -k));
    const double ratio = std::sqrt(2.0);
    for (double r = r0 * ratio; r < R; r *= ratio) breaks.push_back(r);
    if (breaks.back() < R) breaks.push_back(R);

    const auto& leg = quad::gauss_legendre(opts.radial_gl);
    const double norm = (2.0 * s - 1.0) / pi;
    Complex sum = 0.0;
    for (std::size_t seg = 0; seg + 1 < breaks.size(); ++seg) {
        const double hh = breaks[seg + 1] - breaks[seg];
        const double mid = breaks[seg] + 0.5 * hh;
        for (std::size_t j = 0; j < leg.nodes.size(); ++j) {
            const double r = mid + 0.5 * hh * leg.nodes[j];
            const double wr =
                norm * std::pow(r, 2.0 * s - 1.0) * 0.5 * hh * leg.weights[j];
            for (std::size_t i = 0; i < ang.phi.size(); ++i) {
                const Complex zz =
                    r * Complex(std::cos(ang.phi[i]), std::sin(ang.phi[i]));
                sum += wr * ang.w[i] * std::conj(f.eval(zz)) * h.eval(zz);
            }
        }
    }
    return sum;
}

Complex cutoff_asymptotic(const SpinParams& params, double rho, double lambda,
                          double R) {
    if (std::abs(lambda - rho) < 1e-9 || std::abs(lambda + rho) < 1e-9)
        throw ConfigError(
            "cutoff_asymptotic: the displayed form needs lambda != +-rho");
    const double s = params.s;
    auto half = [&](double lam) {
        const Complex pref =
            I * std::exp(log_gamma(Complex(2.0 * s)) -
                         log_gamma(Complex(s, 0.5 * (lam + rho))) -
                         log_gamma(Complex(s, -0.5 * (lam + rho))));
        const Complex osc = std::exp(I * (lam - rho) * std::log(R));
        const Complex t1 = std::exp(-0.5 * pi * (lam + rho)) *
                           std::conj(asym_coeff_c(params, rho)) *
                           asym_coeff_c(params, lam) * osc;
        const Complex t2 = std::exp(0.5 * pi * (lam + rho)) *
                           std::conj(asym_coeff_c(params, -rho)) *
                           asym_coeff_c(params, -lam) / osc;
        return pref * (t1 - t2) / (rho - lam);
    };
    return half(lambda) + half(-lambda);
}

double mu(const SpinParams& params, double lambda) {
    const double s = params.s, g = params.g;
    const Complex lg = 2.0 * log_gamma(Complex(s, lambda)) +
                       log_gamma(Complex(g, lambda)) -
                       log_gamma(Complex(s + g)) -
                       log_gamma(Complex(0.0, 2.0 * lambda));
    const double mod2 = std::exp(2.0 * lg.real());
    return mod2 / (4.0 * pi * std::pow(2.0 * params.beta, 2.0 * s) *
                   std::exp(log_gamma(Complex(2.0 * s)).real()));
}

double mu_hat(const SpinParams& params, double lambda) {
    const double s = params.s, g = params.g;
    const Complex lg =
        log_gamma(Complex(s, lambda)) + log_gamma(Complex(g, lambda)) -
        log_gamma(Complex(s + g)) - log_gamma(Complex(0.0, 2.0 * lambda));
    return std::exp(2.0 * lg.real()) / (4.0 * pi);
}

double m_weight(const SpinParams& params, double y) {
    if (y < 0.0) throw ConfigError("m_weight: requires y >= 0");
    return std::pow(y, params.s + params.g - 1.0) *
           std::pow(1.0 + y, params.s - params.g);
}

double orthogonality_coefficient(const SpinParams& params, double lambda) {
    if (lambda == 0.0)
        throw PoleError("orthogonality_coefficient: lambda = 0");
    return 1.0 / mu(params, lambda);
}

Complex completeness_kernel(const SpinParams& params, HPoint z, HPoint w,
                            double lambda_cut, int nodes) {
    if (!(lambda_cut > 0.0))
        throw ConfigError("completeness_kernel: lambda_cut must be > 0");
    auto integrand = [&](double lam) {
        return mu(params, lam) * psi(params, lam, z) *
               std::conj(psi(params, lam, w));
    };
    const int panels = std::max(1, int(std::ceil(lambda_cut)));
    // even in lambda: integrate the half-line and double
    const Complex total =
        2.0 * quad::composite_gl(integrand, 0.0, lambda_cut, panels, nodes);
    if (std::abs(integrand(lambda_cut)) > 1e-3 * std::abs(total))
        throw TruncationError(
            "completeness_kernel: integrand at the cut above 1e-3 of the total");
    return total;
}

Complex gamma_integral_I1(Complex a, Complex b, Complex zarg) {
    if (!(a.real() > 0.0) || !(b.real() > 0.0))
        throw PoleError("gamma_integral_I1: requires Re a, Re b > 0");
    return 2.0 * pi * std::exp(log_gamma(a + b) + b * std::log(zarg) -
                               (a + b) * std::log(1.0 + zarg));
}

Complex dbw_integral(Complex a1, Complex a2, Complex a3) {
    if (!(a1.real() > 0.0) || !(a2.real() > 0.0) || !(a3.real() > 0.0))
        throw PoleError("dbw_integral: requires Re a_j > 0");
    return 4.0 * pi * std::exp(log_gamma(a1 + a2) + log_gamma(a1 + a3) +
                               log_gamma(a2 + a3));
}

Complex transform_U(const halfplane::AnalyticFn& psi_fn,
                    const SpinParams& params, double y,
                    const halfplane::HQuadGrid& grid,
                    const halfplane::QuadOptions& opts) {
    if (y < 0.0) throw ConfigError("transform_U: requires y >= 0");
    const HPoint target(I * params.beta * (1.0 + 2.0 * y));
    return halfplane::reproduce(psi_fn, params, target, grid, opts);
}

Complex transform_Udag(const HalfLineFn& chi, const SpinParams& params,
                       HPoint z, int subpanels, int gl_nodes) {
    params.validate();
    if (!chi.eval) throw ConfigError("transform_Udag: missing eval handle");
    if (!(chi.growth_exponent < 0.0))
        throw DivergenceError(
            "transform_Udag: integrand decays like y^(growth-1); need growth < 0");
    const double s = params.s;
    const Complex phase = std::exp(I * pi * s);
    Complex sum = 0.0;
    for (const auto& node : halfline_rule(subpanels, gl_nodes)) {
        const Complex ker =
            std::pow(z.z + I * params.beta * (1.0 + 2.0 * node.y), -2.0 * s);
        sum += node.w * m_weight(params, node.y) * ker * chi.eval(node.y);
    }
    return phase * sum;
}

Complex transform_T(const halfplane::AnalyticFn& psi_fn,
                    const SpinParams& params, double lambda,
                    const halfplane::HQuadGrid& grid,
                    const halfplane::QuadOptions& opts) {
    const Eigenfunction ef{params, lambda};
    halfplane::AnalyticFn integrand;
    integrand.eval = [ef, &psi_fn](Complex z) {
        return std::conj(ef.eval(z)) * psi_fn.eval(z);
    };
    integrand.decay_exponent = params.s + psi_fn.decay_exponent;
    return halfplane::quad_halfplane(integrand, params, grid, opts);
}

Complex index_transform_J(const HalfLineFn& psi_y, const SpinParams& params,
                          double lambda, int subpanels, int gl_nodes) {
    params.validate();
    if (!psi_y.eval) throw ConfigError("index_transform_J: missing eval handle");
    if (!(psi_y.growth_exponent < -params.s))
        throw DivergenceError(
            "index_transform_J: need input growth below -s against the "
            "m(y) Phi_lambda tail");
    // Phi_lambda oscillates with frequency |lambda| in log y, so the node
    // budget per dyadic panel must grow with the spectral parameter
    const int osc = subpanels * std::max(1, int(std::ceil(std::abs(lambda) / 8.0)));
    Complex sum = 0.0;
    for (const auto& node : halfline_rule(osc, gl_nodes))
        sum += node.w * m_weight(params, node.y) *
               phi(params, lambda, node.y) * psi_y.eval(node.y);
    return sum;
}

double mellin_barnes_identity_check(const SpinParams& params, double lambda,
                                    HPoint z) {
    const Complex lhs = psi(params, lambda, z);
    HalfLineFn chi;
    chi.eval = [&params, lambda](double y) { return phi(params, lambda, y); };
    chi.growth_exponent = -params.s;
    const Complex norm =
        std::exp(Complex(2.0 * params.s) * std::log(2.0 * params.beta) +
                 log_gamma(Complex(2.0 * params.s)) -
                 log_gamma(Complex(params.s, lambda)) -
                 log_gamma(Complex(params.s, -lambda)));
    const Complex rhs = norm * transform_Udag(chi, params, z, 2, 16);
    return std::abs(lhs - rhs);
}

} // namespace openchain::spectral
