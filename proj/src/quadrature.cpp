#include "openchain/quadrature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "openchain/errors.hpp"
#include "openchain/specfun.hpp"

namespace openchain::quad {

namespace {

// Three-term recurrence coefficients for Jacobi weight (1-x)^a (1+x)^b on
// [-1, 1]:  p_{k+1} = (x - alpha_k) p_k - beta_k p_{k-1}.
template <class Scalar>
void jacobi_recurrence(int n, Scalar a, Scalar b,
                       std::vector<Scalar>& alpha, std::vector<Scalar>& beta) {
    alpha.resize(n);
    beta.resize(n);
    const Scalar ab = a + b;
    alpha[0] = (b - a) / (ab + 2.0);
    for (int k = 1; k < n; ++k) {
        const Scalar den = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
        alpha[k] = (b * b - a * a) / den;
    }
    beta[0] = Scalar(0.0);  // unused
    if (n > 1)
        beta[1] = 4.0 * (a + 1.0) * (b + 1.0) /
                  ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
    for (int k = 2; k < n; ++k) {
        const Scalar t = 2.0 * k + ab;
        beta[k] = 4.0 * double(k) * (double(k) + a) * (double(k) + b) * (double(k) + ab) /
                  (t * t * (t + 1.0) * (t - 1.0));
    }
}

Rule1D golub_welsch_real(int n, double a, double b, double mu0) {
    std::vector<double> alpha, beta;
    jacobi_recurrence(n, a, b, alpha, beta);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        J(k, k) = alpha[k];
        if (k > 0) {
            const double off = std::sqrt(beta[k]);
            J(k, k - 1) = off;
            J(k - 1, k) = off;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Rule1D rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        rule.nodes[k] = es.eigenvalues()(k);
        const double v0 = es.eigenvectors()(0, k);
        rule.weights[k] = mu0 * v0 * v0;
    }
    return rule;
}

} // namespace

const Rule1D& gauss_legendre(int n) {
    static std::map<int, Rule1D> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, golub_welsch_real(n, 0.0, 0.0, 2.0)).first;
    return it->second;
}

Rule1D gauss_jacobi(int n, double alpha, double beta) {
    if (!(alpha > -1.0 && beta > -1.0))
        throw ConfigError("gauss_jacobi: weight exponents must exceed -1");
    // mu0 = 2^(a+b+1) B(a+1, b+1)
    const double mu0 = std::exp((alpha + beta + 1.0) * std::log(2.0) +
                                std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                                std::lgamma(alpha + beta + 2.0));
    return golub_welsch_real(n, alpha, beta, mu0);
}

ComplexRule1D gauss_jacobi_complex01(int n, Complex alpha, Complex beta) {
    if (!(alpha.real() > -1.0 && beta.real() > -1.0))
        throw EndpointSingularityError(
            "gauss_jacobi_complex01: Re of weight exponents must exceed -1");
    // the dense complex eigensolve is ~0.4 s at n = 160; hypergeometric
    // evaluators call this with a handful of fixed parameter sets, so cache
    // on the exact bits of (n, alpha, beta)
    using Key = std::tuple<int, double, double, double, double>;
    static std::map<Key, ComplexRule1D> cache;
    static std::mutex mtx;
    const Key key{n, alpha.real(), alpha.imag(), beta.real(), beta.imag()};
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    std::vector<Complex> a, b;
    jacobi_recurrence(n, alpha, beta, a, b);
    Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        J(k, k) = a[k];
        if (k > 0) {
            const Complex off = std::sqrt(b[k]);
            J(k, k - 1) = off;
            J(k - 1, k) = off;
        }
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(J);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("gauss_jacobi_complex01: eigensolver failed");
    // mu0 on [0,1] for weight (1-t)^alpha t^beta
    const Complex mu0 = std::exp(specfun::log_gamma(alpha + 1.0) +
                                 specfun::log_gamma(beta + 1.0) -
                                 specfun::log_gamma(alpha + beta + 2.0));
    ComplexRule1D rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    std::vector<int> order(n);
    for (int k = 0; k < n; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return es.eigenvalues()(i).real() < es.eigenvalues()(j).real();
    });
    for (int k = 0; k < n; ++k) {
        const int j = order[k];
        rule.nodes[k] = 0.5 * (es.eigenvalues()(j) + 1.0);
        // weight formula needs v^T v normalization, not the Euclidean one
        Complex vtv = 0.0;
        for (int r = 0; r < n; ++r) {
            const Complex vr = es.eigenvectors()(r, j);
            vtv += vr * vr;
        }
        const Complex v0 = es.eigenvectors()(0, j);
        rule.weights[k] = mu0 * v0 * v0 / vtv;
    }
    {
        std::lock_guard<std::mutex> lock(mtx);
        if (cache.size() > 256) cache.clear();
        cache.emplace(key, rule);
    }
    return rule;
}

} // namespace openchain::quad
