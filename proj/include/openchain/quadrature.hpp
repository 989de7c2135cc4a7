#ifndef OPENCHAIN_QUADRATURE_HPP
#define OPENCHAIN_QUADRATURE_HPP

#include <complex>
#include <vector>

#include "openchain/params.hpp"

namespace openchain::quad {

struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1]; cached per n.
const Rule1D& gauss_legendre(int n);

/// Gauss-Jacobi rule on [-1, 1] for weight (1-x)^alpha (1+x)^beta,
/// alpha, beta > -1.  Golub-Welsch via Eigen.
Rule1D gauss_jacobi(int n, double alpha, double beta);

struct ComplexRule1D {
    std::vector<Complex> nodes;
    std::vector<Complex> weights;
};

/// Gauss-Jacobi rule on [0, 1] for the complex-parameter weight
/// (1-t)^alpha t^beta with Re alpha, Re beta > -1.  Nodes may leave the
/// real axis; sum w_j f(t_j) integrates weight * f for analytic f.
ComplexRule1D gauss_jacobi_complex01(int n, Complex alpha, Complex beta);

/// Composite Gauss-Legendre over [a, b] with `panels` uniform panels of
/// `nodes` points each, applied to f.
template <class F>
Complex composite_gl(F&& f, double a, double b, int panels, int nodes) {
    const Rule1D& rule = gauss_legendre(nodes);
    Complex sum = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j)
            sum += 0.5 * h * rule.weights[j] * f(mid + 0.5 * h * rule.nodes[j]);
    }
    return sum;
}

} // namespace openchain::quad

#endif
