#include "openchain/specfun.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "openchain/errors.hpp"
#include "openchain/quadrature.hpp"

namespace openchain::specfun {

namespace {

constexpr double pi = std::numbers::pi;

// Lanczos coefficients, g = 607/128, 15 terms (Godfrey / Pugh).
constexpr double lanczos_g = 607.0 / 128.0;
constexpr double lanczos_c[15] = {
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};

Complex log_gamma_lanczos(Complex z) {
    // valid for Re z >= 0.5
    Complex acc = lanczos_c[0];
    for (int k = 1; k < 15; ++k) acc += lanczos_c[k] / (z - 1.0 + double(k));
    const Complex t = z + lanczos_g - 0.5;
    return 0.5 * std::log(2.0 * pi) + (z - 0.5) * std::log(t) - t + std::log(acc);
}

} // namespace

bool near_nonpositive_integer(Complex z, double tol) {
    if (std::abs(z.imag()) > tol) return false;
    const double r = std::round(z.real());
    return r <= 0.0 && std::abs(z.real() - r) <= tol;
}

Complex log_sin_pi(Complex z) {
    if (z.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
    if (z.imag() < 20.0) return std::log(std::sin(pi * z));
    // sin(pi z) = e^{-i pi z} (e^{2 i pi z} - 1) / (2i), |e^{2 i pi z}| << 1
    return -I * pi * z - std::log(2.0 * I) + std::log(std::exp(2.0 * I * pi * z) - 1.0);
}

Complex log_gamma(Complex z) {
    if (near_nonpositive_integer(z))
        throw PoleError("log_gamma: argument at a non-positive integer");
    if (z.real() >= 0.5) return log_gamma_lanczos(z);
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(pi) - log_sin_pi(z) - log_gamma_lanczos(1.0 - z);
}

Complex gamma(Complex z) { return std::exp(log_gamma(z)); }

Complex gamma_ratio(Complex a, Complex b) {
    return std::exp(log_gamma(a) - log_gamma(b));
}

namespace {

// Power series, |w| < 1 (practical for |w| <= ~0.8).  `cancellation`
// reports the worst partial-term magnitude relative to the sum, which
// bounds the rounding-error amplification of the summation.
Complex hyp2f1_series_tracked(Complex a, Complex b, Complex c, Complex w,
                              double& cancellation) {
    Complex sum = 1.0, term = 1.0;
    double peak = 1.0;
    int stall = 0;
    for (int n = 0; n < 4000; ++n) {
        term *= (a + double(n)) * (b + double(n)) / ((c + double(n)) * double(n + 1)) * w;
        sum += term;
        peak = std::max(peak, std::abs(term));
        if (std::abs(term) < 1e-17 * (std::abs(sum) + 1.0)) {
            if (++stall >= 2) {
                cancellation = peak / std::max(std::abs(sum), 1e-300);
                return sum;
            }
        } else {
            stall = 0;
        }
    }
    throw ConvergenceError("hyp2f1: series did not converge");
}

Complex hyp2f1_series(Complex a, Complex b, Complex c, Complex w) {
    double ignored;
    return hyp2f1_series_tracked(a, b, c, w, ignored);
}

Complex hyp2f1_euler_quad(Complex a, Complex b, Complex c, Complex w) {
    // Gamma(c)/(Gamma(b) Gamma(c-b)) * int_0^1 t^{b-1} (1-t)^{c-b-1} (1-tw)^{-a} dt
    if (!(c.real() - b.real() > 0.0 && b.real() > 0.0))
        throw DegenerateError("hyp2f1: Euler path requires Re(c-b) > 0 and Re b > 0");
    const auto rule = quad::gauss_jacobi_complex01(160, c - b - 1.0, b - 1.0);
    Complex sum = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j)
        sum += rule.weights[j] * std::pow(1.0 - rule.nodes[j] * w, -a);
    return gamma_ratio(c, b) * sum / gamma(c - b);
}

Complex hyp2f1_connection(Complex a, Complex b, Complex c, Complex w);

Complex hyp2f1_dispatch(Complex a, Complex b, Complex c, Complex w) {
    // large imaginary parameters: series summation loses ~ (max term / sum)
    // * eps to cancellation, which can reach e^{2 |Im a| sqrt|w|} for w near
    // the negative axis, while it stays O(1) where the function itself is
    // exponentially large.  Try the cheap series first and accept it only
    // while the measured amplification is mild; route the ill-conditioned
    // remainder to the Barnes contour, whose own conditioning is best
    // exactly there (small |arg(-w)|) and worst where the series is safe.
    const double imag_scale = std::min(std::abs(a.imag()), std::abs(b.imag()));
    if (imag_scale >= 8.0 && std::abs(w) <= 0.75) {
        double amp = 0.0;
        const Complex v = hyp2f1_series_tracked(a, b, c, w, amp);
        if (amp <= 1e2) return v;
    }
    if (imag_scale >= 8.0 && w.real() < 0.5) {
        const Complex wp = w / (w - 1.0);
        if (std::abs(wp) <= 0.85) {
            double amp = 0.0;
            const Complex v = hyp2f1_series_tracked(a, c - b, c, wp, amp);
            if (amp <= 1e2) return std::pow(1.0 - w, -a) * v;
        }
    }
    if (imag_scale >= 8.0 && a.real() > 0.05 && b.real() > 0.05 &&
        std::abs(std::arg(-w)) < pi - 0.05) {
        ContourSpec cs;
        cs.offset = 0.5 * std::min({a.real(), b.real(), 1.0});
        // the tail beyond |t| = max|Im| + m decays like e^{-(pi - |arg(-w)|) m}
        const double margin = 12.0 * pi / (pi - std::abs(std::arg(-w)));
        cs.truncation = std::max(std::abs(a.imag()), std::abs(b.imag())) +
                        std::min(margin, 250.0);
        // node count resolves the e^{u log w} oscillation; bucket it so
        // sweeps in w share cached contour tables
        const double logw = std::abs(std::log(std::abs(w)));
        cs.nodes = 16 + 8 * int(std::ceil(3.0 * logw / 8.0));
        return hyp2f1_barnes({a, b, c, w}, cs, 1e-8);
    }
    if (std::abs(w) <= 0.75) return hyp2f1_series(a, b, c, w);
    if (w.real() < 0.5) {
        const Complex wp = w / (w - 1.0);
        // covers the whole ray w < 0, where wp = |w|/(1+|w|) < 1
        if (std::abs(wp) <= 0.85)
            return std::pow(1.0 - w, -a) * hyp2f1_series(a, c - b, c, wp);
    }
    // prefer the inversion series over the Euler quadrature as soon as it
    // converges: the complex Gauss-Jacobi rule loses digits exponentially
    // in |Im b| while the 1/w series does not
    if (std::abs(w) >= 2.0) return hyp2f1_connection(a, b, c, w);
    if (c.real() - b.real() > 0.0 && b.real() > 0.0)
        return hyp2f1_euler_quad(a, b, c, w);
    if (c.real() - a.real() > 0.0 && a.real() > 0.0)
        return hyp2f1_euler_quad(b, a, c, w);
    if (std::abs(w) < 0.97) return hyp2f1_series(a, b, c, w);
    throw DegenerateError("hyp2f1: no evaluation path for these parameters");
}

Complex hyp2f1_connection_generic(Complex a, Complex b, Complex c, Complex w) {
    // DLMF 15.8.2, |arg(-w)| < pi, a - b not an integer
    const Complex iw = 1.0 / w;
    const Complex t1 = gamma_ratio(b - a, b) / gamma(c - a) *
                       std::pow(-w, -a) * hyp2f1_series(a, a - c + 1.0, a - b + 1.0, iw);
    const Complex t2 = gamma_ratio(a - b, a) / gamma(c - b) *
                       std::pow(-w, -b) * hyp2f1_series(b, b - c + 1.0, b - a + 1.0, iw);
    return gamma(c) * (t1 + t2);
}

Complex hyp2f1_connection(Complex a, Complex b, Complex c, Complex w) {
    const Complex d = b - a;
    const double dist = std::hypot(d.real() - std::round(d.real()), d.imag());
    if (dist > 1e-5) return hyp2f1_connection_generic(a, b, c, w);
    // near-degenerate: symmetric perturbation of a kills odd orders, and a
    // Richardson step removes the h^2 term; h balances that against the
    // Gamma-pole cancellation loss ~eps/h in the generic formula.
    const double h = 1e-3;
    auto avg = [&](double hh) {
        return 0.5 * (hyp2f1_connection_generic(a + hh, b, c, w) +
                      hyp2f1_connection_generic(a - hh, b, c, w));
    };
    return (4.0 * avg(h) - avg(2.0 * h)) / 3.0;
}

} // namespace

Complex hyp2f1(Complex a, Complex b, Complex c, Complex w) {
    if (near_nonpositive_integer(c))
        throw PoleError("hyp2f1: c is a non-positive integer");
    if (w.imag() == 0.0 && w.real() >= 1.0)
        throw BranchCutError("hyp2f1: argument on the branch cut [1, inf)");
    if (w == Complex(0.0)) return 1.0;
    return hyp2f1_dispatch(a, b, c, w);
}

Complex hyp2f1(const Hyp2F1Args& args) {
    return hyp2f1(args.a, args.b, args.c, args.w);
}

Complex hyp2f1_deriv(Complex a, Complex b, Complex c, Complex w) {
    return a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, w);
}

Complex hyp2f1_deriv2(Complex a, Complex b, Complex c, Complex w) {
    return a * b / c * (a + 1.0) * (b + 1.0) / (c + 1.0) *
           hyp2f1(a + 2.0, b + 2.0, c + 2.0, w);
}

Complex hyp2f1_barnes(const Hyp2F1Args& args, const ContourSpec& contour, double tol) {
    const Complex a = args.a, b = args.b, c = args.c, w = args.w;
    const double off = contour.offset;
    // contour in the u = i rho plane: Re u = -off.  Pole columns:
    //   Gamma(-u):   u = 0, 1, 2, ...
    //   Gamma(a+u):  u = -a - n;   Gamma(b+u): u = -b - n
    if (std::abs(off) < 1e-6)
        throw ContourError("hyp2f1_barnes: contour hits the pole u = 0");
    for (int n = 0;; ++n) {
        const double da = std::abs(off - a.real() - n);
        const double db = std::abs(off - b.real() - n);
        if (da < 1e-6 || db < 1e-6)
            throw ContourError("hyp2f1_barnes: contour within 1e-6 of a pole");
        if (a.real() + n > off + 1.0 && b.real() + n > off + 1.0) break;
    }
    const Complex log_mw = std::log(-w);
    const double argmw = std::abs(std::arg(-w));
    if (argmw >= pi - 1e-12)
        throw BranchCutError("hyp2f1_barnes: requires |arg(-w)| < pi");

    auto integrand = [&](double r) -> Complex {
        const Complex rho(r, off);
        const Complex u = I * rho;
        return std::exp(log_gamma(a + u) + log_gamma(b + u) + log_gamma(-u) -
                        log_gamma(c + u) + u * log_mw);
    };

    const double T = contour.truncation;
    const int panels = std::max(1, int(2.0 * T));  // width-1 panels over [-T, T]

    // the Gamma part of the integrand depends on (a, b, c) and the contour
    // only; cache it per parameter set so sweeps in w reuse the log-Gamma
    // table and pay one complex exp per node
    struct ContourTable {
        std::vector<Complex> u;        // contour points
        std::vector<Complex> lg;       // log-Gamma combination at u
        std::vector<double> gw;        // Gauss-Legendre weight
    };
    using Key = std::array<double, 9>;
    static std::map<Key, ContourTable> cache;
    static std::mutex cache_mtx;
    const Key key{a.real(), a.imag(), b.real(), b.imag(), c.real(), c.imag(),
                  off, T, double(contour.nodes)};
    Complex integral = 0.0;
    {
        std::lock_guard<std::mutex> lock(cache_mtx);
        auto it = cache.find(key);
        if (it == cache.end()) {
            if (cache.size() > 128) cache.clear();
            ContourTable tab;
            const auto& leg = quad::gauss_legendre(contour.nodes);
            const double h = 2.0 * T / panels;
            for (int seg = 0; seg < panels; ++seg) {
                const double mid = -T + (seg + 0.5) * h;
                for (std::size_t j = 0; j < leg.nodes.size(); ++j) {
                    const double r = mid + 0.5 * h * leg.nodes[j];
                    const Complex u = I * Complex(r, off);
                    tab.u.push_back(u);
                    tab.lg.push_back(log_gamma(a + u) + log_gamma(b + u) +
                                     log_gamma(-u) - log_gamma(c + u));
                    tab.gw.push_back(0.5 * h * leg.weights[j]);
                }
            }
            it = cache.emplace(key, std::move(tab)).first;
        }
        const ContourTable& table = it->second;
        for (std::size_t j = 0; j < table.u.size(); ++j)
            integral +=
                table.gw[j] * std::exp(table.lg[j] + table.u[j] * log_mw);
    }
    integral /= 2.0 * pi;
    const Complex value = gamma_ratio(c, a) / gamma(b) * integral;

    const double decay = pi - argmw;
    const double tail =
        (std::abs(integrand(T)) + std::abs(integrand(-T))) / decay / (2.0 * pi) *
        std::abs(gamma_ratio(c, a) / gamma(b));
    if (tail > tol * std::max(1.0, std::abs(value)))
        throw TailError("hyp2f1_barnes: truncation tail above tolerance");
    return value;
}

Complex asym_coeff_c(const SpinParams& params, double lambda) {
    if (std::abs(lambda) < 1e-300)
        throw PoleError("asym_coeff_c: Gamma(2 i lambda) pole at lambda = 0");
    const double s = params.s, g = params.g, beta = params.beta;
    const Complex il(0.0, lambda);
    const Complex lg = log_gamma(2.0 * il) + log_gamma(Complex(s + g)) -
                       log_gamma(s + il) - log_gamma(g + il);
    return std::exp(lg + (s - il) * std::log(2.0 * beta) +
                    Complex(pi * lambda / 2.0, pi * s / 2.0));
}

Complex psi_asymptotic(const SpinParams& params, double lambda, Complex z) {
    const Complex il(0.0, lambda);
    const Complex logz = std::log(z);
    return asym_coeff_c(params, lambda) * std::exp((-params.s + il) * logz) +
           asym_coeff_c(params, -lambda) * std::exp((-params.s - il) * logz);
}

} // namespace openchain::specfun
