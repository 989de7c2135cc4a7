#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "openchain/errors.hpp"
#include "openchain/quadrature.hpp"
#include "openchain/reflection.hpp"
#include "openchain/specfun.hpp"
#include "openchain/spectral.hpp"
#include "oracles.hpp"

using namespace openchain;
using namespace openchain::spectral;
using oracles::rel_err;

namespace {

constexpr double pi = std::numbers::pi;

const SpinParams kP = SpinParams::from_alpha(1.0, 1.0, 0.5);  // g = 1

halfplane::AnalyticFn constant_one() {
    halfplane::AnalyticFn f;
    f.eval = [](Complex) { return Complex(1.0); };
    f.deriv1 = [](Complex) { return Complex(0.0); };
    f.deriv2 = [](Complex) { return Complex(0.0); };
    return f;
}

// independent spectral density from the oracle log-gamma
double mu_oracle(const SpinParams& p, double lam) {
    const Complex il(0.0, lam);
    const Complex num = 2.0 * oracles::lgamma_oracle(Complex(p.s) + il) +
                        oracles::lgamma_oracle(Complex(p.g) + il);
    const Complex den = oracles::lgamma_oracle(Complex(p.s + p.g)) +
                        oracles::lgamma_oracle(2.0 * il);
    return std::exp(2.0 * (num.real() - den.real())) /
           (4.0 * pi * std::pow(2.0 * p.beta, 2.0 * p.s) *
            std::exp(oracles::lgamma_oracle(Complex(2.0 * p.s)).real()));
}

} // namespace

TEST_CASE("eigenfunctions: reflection symmetry and the reflection-operator route") {
    const double lam = 0.8;
    for (const Complex z : {Complex(0.0, 2.0), Complex(0.7, 1.3), Complex(-1.1, 0.9)}) {
        const Complex plus = psi(kP, lam, HPoint(z));
        const Complex minus = psi(kP, -lam, HPoint(z));
        CHECK(std::abs(plus - minus) <= 1e-12);

        // generated independently by the intertwining operator acting on 1
        const Complex via_reflection =
            reflection::eigenfunction_via_reflection(kP, lam, HPoint(z));
        CHECK(std::abs(plus - via_reflection) <= 1e-9);
    }

    // derivative handles against central finite differences
    Eigenfunction ef{kP, lam};
    const Complex z(0.4, 1.5);
    const double h = 1e-5;
    CHECK(std::abs(ef.deriv1(z) - (ef.eval(z + h) - ef.eval(z - h)) / (2.0 * h)) <=
          1e-6);
    CHECK(std::abs(ef.deriv2(z) - (ef.deriv1(z + h) - ef.deriv1(z - h)) / (2.0 * h)) <=
          1e-6);
}

TEST_CASE("Hamiltonian action: constants, eigen-residual, hypergeometric variable") {
    // constant input picks up only the s^2 term
    CHECK(std::abs(apply_hamiltonian(kP, constant_one(), HPoint(Complex(0.3, 1.1))) -
                   Complex(kP.s * kP.s)) <= 1e-13);

    // eigenvalue relation H psi = -lambda^2 psi at random points
    for (const double lam : {0.3, 0.8, 1.5, 3.0}) {
        Eigenfunction ef{kP, lam};
        const auto fn = ef.fn();
        for (int k = 0; k < 10; ++k) {
            const Complex z = oracles::random_complex(-2.0, 2.0, 0.4, 3.0);
            const Complex hv = apply_hamiltonian(kP, fn, HPoint(z));
            CHECK(rel_err(hv, -lam * lam * ef.eval(z)) <= 1e-8);
        }
    }

    // after w = 1/2 + iz/(2 beta) the operator becomes
    //   -w(1-w) d^2/dw^2 - [(s+g) - (2s+1) w] d/dw + s^2
    const double b = kP.beta, s = kP.s, g = kP.g;
    auto wof = [b](Complex z) { return 0.5 + I * z / (2.0 * b); };
    halfplane::AnalyticFn f;
    f.eval = [=](Complex z) { return std::exp(wof(z)); };
    f.deriv1 = [=](Complex z) { return std::exp(wof(z)) * I / (2.0 * b); };
    f.deriv2 = [=](Complex z) {
        return std::exp(wof(z)) * I / (2.0 * b) * I / (2.0 * b);
    };
    const Complex zt(0.7, 1.4);
    const Complex w = wof(zt), ew = std::exp(w);
    const Complex hw = -w * (1.0 - w) * ew -
                       (Complex(s + g) - (2.0 * s + 1.0) * w) * ew + s * s * ew;
    CHECK(std::abs(apply_hamiltonian(kP, f, HPoint(zt)) - hw) <= 1e-9);
}

TEST_CASE("identity kernel intertwines the Hamiltonian between its arguments") {
    // H^s applied in z to (z - conj w)^{-2s} equals the conjugate of H^s
    // applied in w to (w - conj z)^{-2s}
    const double s = kP.s;
    auto kernel_fn = [s](Complex pole) {
        halfplane::AnalyticFn f;
        f.eval = [=](Complex z) { return std::pow(z - pole, -2.0 * s); };
        f.deriv1 = [=](Complex z) {
            return -2.0 * s * std::pow(z - pole, -2.0 * s - 1.0);
        };
        f.deriv2 = [=](Complex z) {
            return 2.0 * s * (2.0 * s + 1.0) * std::pow(z - pole, -2.0 * s - 2.0);
        };
        return f;
    };
    for (int k = 0; k < 10; ++k) {
        const Complex z = oracles::random_complex(-2.0, 2.0, 0.5, 3.0);
        const Complex w = oracles::random_complex(-2.0, 2.0, 0.5, 3.0);
        const Complex lhs =
            apply_hamiltonian(kP, kernel_fn(std::conj(w)), HPoint(z));
        const Complex rhs =
            std::conj(apply_hamiltonian(kP, kernel_fn(std::conj(z)), HPoint(w)));
        CHECK(rel_err(lhs, rhs) <= 1e-9);
    }
}

TEST_CASE("cutoff scalar product: elementary value and Hermiticity") {
    // measure (1/pi) dx dy at s = 1 over the half-disc of radius R
    const double R = 7.0;
    const Complex v = scalar_product_cutoff(constant_one(), constant_one(), kP, R);
    CHECK(std::abs(v - Complex(R * R / 2.0)) <= 1e-10 * R * R);

    Eigenfunction el{kP, 0.8}, er{kP, 1.3};
    const Complex a = scalar_product_cutoff(er.fn(), el.fn(), kP, 30.0);
    const Complex b = scalar_product_cutoff(el.fn(), er.fn(), kP, 30.0);
    CHECK(std::abs(a - std::conj(b)) <= 1e-10);
}

TEST_CASE("cutoff scalar product approaches the boundary-term asymptotics") {
    const double lam = 0.8, rho = 1.3;
    Eigenfunction el{kP, lam}, er{kP, rho};

    // pointwise agreement at the pinned radii
    for (const double R : {20.0, 40.0, 80.0}) {
        const Complex sc = scalar_product_cutoff(er.fn(), el.fn(), kP, R);
        const Complex wa = cutoff_asymptotic(kP, rho, lam, R);
        CHECK(rel_err(sc, wa) <= 5e-3);
    }

    // the residual is a multi-frequency oscillation in log R; average it out
    // with filter weights that annihilate e^{+- i omega log R} for the four
    // frequencies present, then the remainder must decay in R
    const double h = 0.35;
    const double freqs[4] = {rho - lam, 2.0 * lam, lam + rho, 2.0 * rho};
    std::vector<Complex> poly{1.0};
    for (double wfr : freqs)
        for (double sgn : {1.0, -1.0}) {
            const Complex root = std::exp(I * sgn * wfr * h);
            std::vector<Complex> next(poly.size() + 1, 0.0);
            for (std::size_t k = 0; k < poly.size(); ++k) {
                next[k + 1] += poly[k];
                next[k] -= root * poly[k];
            }
            poly = next;
        }
    Complex norm = 0.0;
    for (const auto& c : poly) norm += c;

    std::vector<double> bases{20.0, 40.0, 80.0, 160.0}, amp;
    for (const double R : bases) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < poly.size(); ++k) {
            const double Rk = R * std::exp(double(k) * h);
            acc += poly[k] * (scalar_product_cutoff(er.fn(), el.fn(), kP, Rk) -
                              cutoff_asymptotic(kP, rho, lam, Rk));
        }
        amp.push_back(std::abs(acc / norm));
    }
    CHECK(amp[1] < amp[0]);
    CHECK(amp[2] < amp[1]);
    CHECK(amp[3] < amp[2]);

    // log-log fit of the averaged amplitude: clear power-law decay
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < bases.size(); ++i) {
        const double x = std::log(bases[i]), y = std::log(amp[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double n = double(bases.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope < -0.5);

    // the displayed form is singular at lambda = +-rho
    CHECK_THROWS_AS(cutoff_asymptotic(kP, 0.8, 0.8, 20.0), ConfigError);
}

TEST_CASE("spectral density and the orthogonality coefficient") {
    // evenness and positivity
    for (const double lam : {0.05, 0.4, 1.0, 2.7}) {
        CHECK(mu(kP, lam) == mu(kP, -lam));
        CHECK(mu(kP, lam) > 0.0);
    }

    // independent Gamma-function oracle for the density and its inverse
    for (const double lam : {0.3, 1.0, 2.2}) {
        CHECK(rel_err(Complex(mu(kP, lam)), Complex(mu_oracle(kP, lam))) <= 1e-12);
        CHECK(std::abs(mu(kP, lam) * orthogonality_coefficient(kP, lam) - 1.0) <=
              1e-13);
    }

    // diagrammatic-route coefficient 4 pi (2 beta)^{2s} Gamma(2s)
    //   |Gamma(s+g) Gamma(2 i lam) / (Gamma^2(s+i lam) Gamma(g+i lam))|^2
    const double lam = 1.0;
    const Complex il(0.0, lam);
    const double lg2 =
        2.0 * (oracles::lgamma_oracle(Complex(kP.s + kP.g)).real() +
               oracles::lgamma_oracle(2.0 * il).real() -
               2.0 * oracles::lgamma_oracle(Complex(kP.s) + il).real() -
               oracles::lgamma_oracle(Complex(kP.g) + il).real());
    const double coeff = 4.0 * pi * std::pow(2.0 * kP.beta, 2.0 * kP.s) *
                         std::tgamma(2.0 * kP.s) * std::exp(lg2);
    CHECK(rel_err(Complex(orthogonality_coefficient(kP, lam)), Complex(coeff)) <=
          1e-12);

    CHECK_THROWS_AS(orthogonality_coefficient(kP, 0.0), PoleError);

    // half-line bridge: mu / mu_hat = |Gamma(s+i lam)|^2 / ((2 beta)^{2s} Gamma(2s))
    for (const double l : {0.3, 1.1, 2.5}) {
        const double bridge =
            std::exp(2.0 * oracles::lgamma_oracle(Complex(kP.s, l)).real()) /
            (std::pow(2.0 * kP.beta, 2.0 * kP.s) * std::tgamma(2.0 * kP.s));
        CHECK(rel_err(Complex(mu(kP, l) / mu_hat(kP, l)), Complex(bridge)) <= 1e-12);
    }
}

TEST_CASE("completeness: spectral synthesis of the identity kernel") {
    auto target = [](Complex z, Complex w) {
        return std::exp(I * pi * kP.s) * std::pow(z - std::conj(w), -2.0 * kP.s);
    };

    // diagonal point with elementary value 1/16
    const Complex d = completeness_kernel(kP, HPoint(2.0 * I), HPoint(2.0 * I), 40.0);
    CHECK(std::abs(d - Complex(1.0 / 16.0)) <= 1e-4);

    const Complex z1(1.0, 2.0);
    CHECK(std::abs(completeness_kernel(kP, HPoint(2.0 * I), HPoint(z1), 40.0) -
                   target(2.0 * I, z1)) <= 1e-4);

    // 3x3 grid with Im z > beta
    double worst = 0.0;
    for (const double xr : {-0.7, 0.0, 0.9})
        for (const double yi : {1.3, 1.9, 2.6}) {
            const Complex z(xr, yi), w(0.4, 1.6);
            worst = std::max(
                worst, rel_err(completeness_kernel(kP, HPoint(z), HPoint(w), 40.0),
                               target(z, w)));
        }
    CHECK(worst <= 1e-4);

    // continuation below Im z = beta
    const Complex shallow(0.3, 0.6);
    CHECK(rel_err(completeness_kernel(kP, HPoint(shallow), HPoint(shallow), 40.0),
                  target(shallow, shallow)) <= 1e-3);

    // integrand is even in lambda
    for (const double l : {0.7, 2.1}) {
        const Complex f1 = psi(kP, l, HPoint(2.0 * I)) *
                           std::conj(psi(kP, l, HPoint(z1))) * mu(kP, l);
        const Complex f2 = psi(kP, -l, HPoint(2.0 * I)) *
                           std::conj(psi(kP, -l, HPoint(z1))) * mu(kP, -l);
        CHECK(std::abs(f1 - f2) <= 1e-12);
    }

    // a cut at Lambda = 2 leaves an integrand above the truncation gate
    CHECK_THROWS_AS(completeness_kernel(kP, HPoint(2.0 * I), HPoint(2.0 * I), 2.0),
                    TruncationError);
}

TEST_CASE("decay certificate for the completeness integrand") {
    // |mu Psi Psi*| ~ C lambda^{2s-1} e^{-delta lambda} over lambda in [10, 40]
    const Complex z(0.0, 2.0), w(0.5, 1.5);
    std::vector<double> ls, ys;
    for (double l = 10.0; l <= 40.01; l += 2.0) {
        const double v = mu(kP, l) * std::abs(psi(kP, l, HPoint(z)) *
                                              std::conj(psi(kP, l, HPoint(w))));
        ls.push_back(l);
        ys.push_back(std::log(v) - (2.0 * kP.s - 1.0) * std::log(l));
    }
    double sl = 0, sy = 0, sll = 0, sly = 0;
    const double n = double(ls.size());
    for (std::size_t i = 0; i < ls.size(); ++i) {
        sl += ls[i]; sy += ys[i]; sll += ls[i] * ls[i]; sly += ls[i] * ys[i];
    }
    const double slope = (n * sly - sl * sy) / (n * sll - sl * sl);
    const double icept = (sy - slope * sl) / n;
    CHECK(-slope > 0.0);  // delta > 0
    for (std::size_t i = 0; i < ls.size(); ++i)
        CHECK(std::abs(ys[i] - (icept + slope * ls[i])) <=
              0.05 * std::abs(ys[i]));
}

TEST_CASE("closed Gamma integrals against quadrature oracles") {
    // int dl Gamma(a+il) Gamma(b-il) z^{il} = 2 pi Gamma(a+b) z^b / (1+z)^{a+b}
    CHECK(std::abs(gamma_integral_I1(Complex(0.5), Complex(0.5), Complex(1.0)) -
                   Complex(pi)) <= 1e-12);

    const Complex a(1.0), b(0.7), zarg(0.5, 0.2);
    auto i1_integrand = [&](double l) {
        const Complex il(0.0, l);
        return std::exp(oracles::lgamma_oracle(a + il) +
                        oracles::lgamma_oracle(b - il) + il * std::log(zarg));
    };
    const Complex numeric = quad::composite_gl(i1_integrand, -60.0, 60.0, 120, 16);
    CHECK(std::abs(gamma_integral_I1(a, b, zarg) - numeric) <= 1e-8);

    // substitution lambda -> -lambda swaps (a, b) and inverts z
    CHECK(std::abs(gamma_integral_I1(a, b, zarg) -
                   gamma_integral_I1(b, a, 1.0 / zarg)) <= 1e-10);

    CHECK_THROWS_AS(gamma_integral_I1(Complex(-0.2), b, zarg), PoleError);

    // de Branges-Wilson limit: int dl prod Gamma(aj +- il) / Gamma(+- 2il)
    CHECK(std::abs(dbw_integral(Complex(0.5), Complex(0.5), Complex(0.5)) -
                   Complex(4.0 * pi)) <= 1e-12);
    const Complex a1(1.0), a2(0.5), a3(0.7);
    CHECK(dbw_integral(a1, a2, a3) == dbw_integral(a3, a1, a2));

    auto dbw_integrand = [&](double l) {
        const Complex il(0.0, l);
        Complex lg = -oracles::lgamma_oracle(2.0 * il) -
                     oracles::lgamma_oracle(-2.0 * il);
        for (const Complex aj : {a1, a2, a3})
            lg += oracles::lgamma_oracle(aj + il) + oracles::lgamma_oracle(aj - il);
        return std::exp(lg);
    };
    const Complex dbw_numeric = quad::composite_gl(dbw_integrand, -60.0, 60.0, 120, 16);
    CHECK(std::abs(dbw_integral(a1, a2, a3) - dbw_numeric) <= 1e-7);
    CHECK_THROWS_AS(dbw_integral(Complex(-0.1), a2, a3), PoleError);
}

TEST_CASE("half-plane to half-line bridge U") {
    const double lam = 0.8;
    Eigenfunction ef{kP, lam};
    const auto grid = halfplane::HQuadGrid::build(kP, 16, 1, 0.0, 8);

    // U Psi_lambda = Phi_lambda
    const double y = 0.5;
    CHECK(std::abs(transform_U(ef.fn(), kP, y, grid) - phi(kP, lam, y)) <= 1e-6);

    // constants reproduce
    CHECK(std::abs(transform_U(constant_one(), kP, 1.3, grid) - 1.0) <= 1e-6);

    // y = 0 is the hypergeometric normalization point
    CHECK(std::abs(transform_U(ef.fn(), kP, 0.0, grid) - 1.0) <= 1e-6);
}

TEST_CASE("adjoint bridge and the U-dagger-U eigenrelation") {
    const double lam = 0.8;
    const double s = kP.s, b = kP.beta;

    // Psi_lambda = (2 beta)^{2s} Gamma(2s) / (Gamma(s+il) Gamma(s-il)) U+ Phi_lambda
    CHECK(mellin_barnes_identity_check(kP, lam, HPoint(2.0 * I)) <= 1e-6);
    CHECK(std::abs(mellin_barnes_identity_check(kP, lam, HPoint(2.0 * I)) -
                   mellin_barnes_identity_check(kP, -lam, HPoint(2.0 * I))) <= 1e-10);

    // U+ U Psi_lambda = Gamma(s+il) Gamma(s-il) / ((2 beta)^{2s} Gamma(2s)) Psi_lambda
    Eigenfunction ef{kP, lam};
    const auto grid = halfplane::HQuadGrid::build(kP, 12, 1, 0.0, 6);
    HalfLineFn upsi;
    upsi.eval = [&](double yy) { return transform_U(ef.fn(), kP, yy, grid); };
    upsi.growth_exponent = -s - 1e-9;
    const Complex z0(0.0, 2.0);
    const Complex lhs = transform_Udag(upsi, kP, HPoint(z0), 1, 6);
    const Complex eig =
        std::exp(specfun::log_gamma(Complex(s, lam)) +
                 specfun::log_gamma(Complex(s, -lam)) -
                 specfun::log_gamma(Complex(2.0 * s)) -
                 2.0 * s * std::log(2.0 * b));
    CHECK(rel_err(lhs, eig * psi(kP, lam, HPoint(z0))) <= 1e-5);

    // zero input, zero output
    HalfLineFn zero;
    zero.eval = [](double) { return Complex(0.0); };
    zero.growth_exponent = -10.0;
    CHECK(transform_Udag(zero, kP, HPoint(z0)) == Complex(0.0));

    // growth bookkeeping: the kernel decay cannot absorb growing input
    HalfLineFn growing;
    growing.eval = [](double) { return Complex(1.0); };
    growing.growth_exponent = 0.5;
    CHECK_THROWS_AS(transform_Udag(growing, kP, HPoint(z0)), DivergenceError);
}

TEST_CASE("index transform: factorization, evenness, Parseval") {
    HalfLineFn chi;
    chi.eval = [](double y) { return Complex(std::exp(-y)); };
    chi.growth_exponent = -50.0;

    // J = T after U+
    const double lam = 0.9;
    const Complex jv = index_transform_J(chi, kP, lam);
    halfplane::AnalyticFn mid;
    mid.eval = [&](Complex z) { return transform_Udag(chi, kP, HPoint(z)); };
    mid.decay_exponent = 2.0 * kP.s;
    const auto grid = halfplane::HQuadGrid::build(kP, 24, 1, 0.0, 12);
    const Complex tv = transform_T(mid, kP, lam, grid);
    CHECK(std::abs(jv - tv) <= 1e-5);

    // evenness in lambda
    CHECK(std::abs(index_transform_J(chi, kP, 2.3) -
                   index_transform_J(chi, kP, -2.3)) <= 1e-10);

    // Parseval: ||chi||^2 in the half-line measure equals the mu_hat-weighted
    // spectral integral over [0, 40] doubled
    const auto& leg = quad::gauss_legendre(32);
    double lhs = 0.0;
    for (int seg = 0; seg < 60; ++seg)
        for (int j = 0; j < 32; ++j) {
            const double y = seg * 0.5 + 0.25 * (leg.nodes[j] + 1.0);
            lhs += 0.25 * leg.weights[j] * m_weight(kP, y) * std::exp(-2.0 * y);
        }
    double rhs = 0.0;
    auto add_panel = [&](double a, double b, int n) {
        const auto& gl = quad::gauss_legendre(n);
        for (int j = 0; j < n; ++j) {
            const double ll = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[j];
            const Complex jl = index_transform_J(chi, kP, ll);
            rhs += 0.5 * (b - a) * gl.weights[j] * mu_hat(kP, ll) * std::norm(jl);
        }
    };
    for (int seg = 0; seg < 12; ++seg) add_panel(seg, seg + 1.0, 6);
    for (int seg = 0; seg < 7; ++seg)
        add_panel(12.0 + 4.0 * seg, 16.0 + 4.0 * seg, 4);
    rhs *= 2.0;
    CHECK(std::abs(lhs - rhs) / lhs <= 1e-3);

    // growth precondition
    HalfLineFn slow;
    slow.eval = [](double) { return Complex(1.0); };
    slow.growth_exponent = -kP.s;
    CHECK_THROWS_AS(index_transform_J(slow, kP, 1.0), DivergenceError);
}
