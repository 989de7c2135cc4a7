#ifndef OPENCHAIN_ALGEBRA_HPP
#define OPENCHAIN_ALGEBRA_HPP

#include <array>
#include <initializer_list>
#include <vector>

#include "openchain/halfplane.hpp"
#include "openchain/params.hpp"

namespace openchain::algebra {

/// Exact test space: polynomials up to this degree.  Keeps composed
/// fourth-order operator expressions well-conditioned in doubles.
inline constexpr int kDegreeCap = 12;

struct Poly {
    std::vector<Complex> coeffs;  // ascending degree, trailing zeros trimmed

    Poly() = default;
    Poly(std::initializer_list<Complex> c) : coeffs(c) { trim(); }

    static Poly monomial(int k, Complex c = 1.0);

    void trim();
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    Complex coeff(int k) const {
        return k < static_cast<int>(coeffs.size()) ? coeffs[k] : Complex(0.0);
    }
    Complex eval(Complex z) const;
    Poly deriv() const;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(Complex c, const Poly& p);

/// Largest absolute coefficient difference.
double max_coeff_diff(const Poly& a, const Poly& b);

/// Linear differential operator sum_k c_k(z) d^k/dz^k with polynomial
/// coefficients; closed under sum, scalar multiple and composition.
struct DiffOp {
    struct Term {
        Poly coeff;
        int order = 0;
    };
    std::vector<Term> terms;

    static DiffOp zero() { return {}; }
    static DiffOp scalar(Complex c);
    static DiffOp mul_by(const Poly& p);
    static DiffOp deriv(int order = 1);

    void simplify();  // merge equal orders, drop zero coefficients
};

DiffOp operator+(const DiffOp& a, const DiffOp& b);
DiffOp operator-(const DiffOp& a, const DiffOp& b);
DiffOp operator*(const DiffOp& a, const DiffOp& b);  // composition: (a*b)p = a(b p)
DiffOp operator*(Complex c, const DiffOp& op);
DiffOp commutator(const DiffOp& a, const DiffOp& b);

/// Exact polynomial image; throws DegreeCapError when the result degree
/// exceeds kDegreeCap.
Poly apply_diffop(const DiffOp& op, const Poly& p);

/// Max coefficient residual of (a - b) z^k over k = 0..max_degree.
double op_residual(const DiffOp& a, const DiffOp& b, int max_degree);

/// Value of (op f)(z) given the derivatives of f at z (dfn(k) = f^(k)(z)).
template <class DerivFn>
Complex apply_diffop_fn(const DiffOp& op, DerivFn&& dfn, Complex z) {
    Complex sum = 0.0;
    for (const auto& term : op.terms) sum += term.coeff.eval(z) * dfn(term.order);
    return sum;
}

// --- generators -----------------------------------------------------------

/// Spin-s generators S = z d + s, S_- = -d, S_+ = z^2 d + 2 s z.
DiffOp gen_S(Complex s);
DiffOp gen_Sminus();
DiffOp gen_Splus(Complex s);

/// Generators of spin (s+x)/2: J = z d + (s+x)/2, J_- = -d,
/// J_+ = z^2 d + (s+x) z.  `sx` is the sum s + x.
DiffOp gen_J(Complex sx);
DiffOp gen_Jminus();
DiffOp gen_Jplus(Complex sx);

/// N = [(z^2 + beta^2) d + (s+x) z] / (2 i beta), symmetric in s, x.
DiffOp gen_N(const SpinParams& params, Complex x);

/// N_pm = -J pm (J_+ + beta^2 J_-) / (2 i beta).
DiffOp gen_Npm(const SpinParams& params, Complex x, int sign);

/// One-particle Hamiltonian with spin parameter `spin`:
/// (z^2 + beta^2) d^2 + (2 spin + 1) z d + 2 i alpha d + spin^2.
DiffOp hamiltonian(Complex spin, double beta, double alpha);

/// I^{a,b} = J J_+ - beta^2 J_- J + (a-b)/2 (J_+ + beta^2 J_-) + 2 i alpha J,
/// with J of spin (a+b)/2.
DiffOp op_I(Complex a, Complex b, double beta, double alpha);

// --- operator matrices ----------------------------------------------------

struct OpMatrix {
    int rows = 0, cols = 0;
    std::vector<DiffOp> entries;  // row-major

    OpMatrix() = default;
    OpMatrix(int r, int c) : rows(r), cols(c), entries(r * c) {}
    static OpMatrix identity(int n);

    DiffOp& at(int i, int j) { return entries[i * cols + j]; }
    const DiffOp& at(int i, int j) const { return entries[i * cols + j]; }
};

OpMatrix operator*(const OpMatrix& a, const OpMatrix& b);
OpMatrix operator-(const OpMatrix& a, const OpMatrix& b);
OpMatrix kron(const OpMatrix& a, const OpMatrix& b);

/// Lax matrix L(u1, u2) = [[u1 + 1 + z d, -d], [z^2 d + (u1-u2+1) z, u2 - z d]].
OpMatrix lax(Complex u1, Complex u2);
/// The same matrix as the triangular three-factor product.
OpMatrix lax_factored(Complex u1, Complex u2);
/// Yang R-matrix (4x4, scalar entries).
OpMatrix yang_r(Complex u);
/// Boundary K-matrix [[i alpha, u - 1/2], [-beta^2 (u - 1/2), i alpha]].
OpMatrix kmatrix(Complex u, const SpinParams& params);

/// Max coefficient residual of LHS - RHS of the RLL relation applied to
/// z^k, k = 0..basis_degree.
double check_yang_baxter(Complex u, Complex v, const SpinParams& params,
                         int basis_degree);

/// Max absolute entry of LHS - RHS of the scalar boundary reflection
/// equation R(u-v)(K(u) x 1)R(u+v-1)(1 x K(v)) = (1 x K(v))R(u+v-1)(K(u) x 1)R(u-v).
double check_reflection_kmatrix(Complex u, Complex v, const SpinParams& params);

/// (s + x)(s + x - 2) / 2, value of 2J^2 + J_+ J_- + J_- J_+.
Complex casimir_value(Complex s, Complex x);

// --- Mobius-weight actions ------------------------------------------------

/// Weighted composition (W f)(z) = prod_i (p_i z + q_i)^{e_i} f((a z + b)/(c z + d)).
struct MobiusWeight {
    Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};
    struct Factor {
        Complex p, q, e;
    };
    std::vector<Factor> weights;
};

/// apply(compose(A, B), f) == apply(A, apply(B, f)).
MobiusWeight compose(const MobiusWeight& A, const MobiusWeight& B);

/// The composed function with chain-rule deriv1 when f has one.  Throws
/// SingularMapError at evaluation points hitting the Mobius pole.
halfplane::AnalyticFn mobius_apply(const MobiusWeight& W,
                                   const halfplane::AnalyticFn& f);

enum class GenKind { Jplus, Jminus };

/// Closed form of exp(lambda J_pm) for spin sum `sx`:
/// Jminus: f(z) -> f(z - lambda); Jplus: f(z) -> (1 - lambda z)^{-sx} f(z/(1-lambda z)).
MobiusWeight exp_generator(GenKind kind, Complex lambda, Complex sx);

/// Residual of the conjugation identity
/// N = e^{-J_+/(i b)} e^{(i b/2) J_-} J e^{-(i b/2) J_-} e^{J_+/(i b)}
/// on f at z (f needs deriv1).
double check_n2_identity(const SpinParams& params, Complex x,
                         const halfplane::AnalyticFn& f, HPoint z);

/// Residuals of the three intertwining relations K N = N K,
/// K H^x = H^s K, K I^{x,s} = I^{s,x} K on the polynomial p over zgrid,
/// with K evaluated through the deformed beta-integral representation.
std::array<double, 3> check_intertwining(const SpinParams& params, Complex x,
                                         const Poly& p,
                                         const std::vector<HPoint>& zgrid);

} // namespace openchain::algebra

#endif
