#include "openchain/algebra.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

#include "openchain/errors.hpp"
#include "openchain/reflection.hpp"

namespace openchain::algebra {

// --- Poly -----------------------------------------------------------------

Poly Poly::monomial(int k, Complex c) {
    Poly p;
    p.coeffs.assign(k + 1, Complex(0.0));
    p.coeffs[k] = c;
    p.trim();
    return p;
}

void Poly::trim() {
    while (!coeffs.empty() && coeffs.back() == Complex(0.0)) coeffs.pop_back();
}

Complex Poly::eval(Complex z) const {
    Complex acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Poly Poly::deriv() const {
    Poly out;
    if (coeffs.size() <= 1) return out;
    out.coeffs.resize(coeffs.size() - 1);
    for (std::size_t k = 1; k < coeffs.size(); ++k)
        out.coeffs[k - 1] = double(k) * coeffs[k];
    out.trim();
    return out;
}

Poly operator+(const Poly& a, const Poly& b) {
    Poly out;
    out.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), Complex(0.0));
    for (std::size_t k = 0; k < out.coeffs.size(); ++k)
        out.coeffs[k] = a.coeff(int(k)) + b.coeff(int(k));
    out.trim();
    return out;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (Complex(-1.0) * b); }

Poly operator*(const Poly& a, const Poly& b) {
    Poly out;
    if (a.coeffs.empty() || b.coeffs.empty()) return out;
    out.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, Complex(0.0));
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs.size(); ++j)
            out.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
    out.trim();
    return out;
}

Poly operator*(Complex c, const Poly& p) {
    Poly out = p;
    for (auto& ck : out.coeffs) ck *= c;
    out.trim();
    return out;
}

double max_coeff_diff(const Poly& a, const Poly& b) {
    double m = 0.0;
    const int n = std::max(a.degree(), b.degree());
    for (int k = 0; k <= n; ++k)
        m = std::max(m, std::abs(a.coeff(k) - b.coeff(k)));
    return m;
}

// --- DiffOp ---------------------------------------------------------------

DiffOp DiffOp::scalar(Complex c) {
    DiffOp op;
    if (c != Complex(0.0)) op.terms.push_back({Poly{c}, 0});
    return op;
}

DiffOp DiffOp::mul_by(const Poly& p) {
    DiffOp op;
    if (!p.coeffs.empty()) op.terms.push_back({p, 0});
    return op;
}

DiffOp DiffOp::deriv(int order) {
    DiffOp op;
    op.terms.push_back({Poly{Complex(1.0)}, order});
    return op;
}

void DiffOp::simplify() {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.order < b.order; });
    std::vector<Term> merged;
    for (auto& term : terms) {
        if (!merged.empty() && merged.back().order == term.order)
            merged.back().coeff = merged.back().coeff + term.coeff;
        else
            merged.push_back(term);
    }
    std::erase_if(merged, [](const Term& t) { return t.coeff.coeffs.empty(); });
    terms = std::move(merged);
}

DiffOp operator+(const DiffOp& a, const DiffOp& b) {
    DiffOp out = a;
    out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
    out.simplify();
    return out;
}

DiffOp operator-(const DiffOp& a, const DiffOp& b) {
    return a + (Complex(-1.0) * b);
}

DiffOp operator*(Complex c, const DiffOp& op) {
    DiffOp out = op;
    for (auto& term : out.terms) term.coeff = c * term.coeff;
    out.simplify();
    return out;
}

DiffOp operator*(const DiffOp& a, const DiffOp& b) {
    // composition via Leibniz: d^m (q g) = sum_k C(m,k) q^{(k)} g^{(m-k)}
    DiffOp out;
    for (const auto& ta : a.terms) {
        for (const auto& tb : b.terms) {
            Poly qderiv = tb.coeff;
            double binom = 1.0;
            for (int k = 0; k <= ta.order; ++k) {
                if (k > 0) {
                    binom *= double(ta.order - k + 1) / double(k);
                    qderiv = qderiv.deriv();
                }
                if (qderiv.coeffs.empty()) break;
                out.terms.push_back(
                    {Complex(binom) * (ta.coeff * qderiv), ta.order - k + tb.order});
            }
        }
    }
    out.simplify();
    return out;
}

DiffOp commutator(const DiffOp& a, const DiffOp& b) { return a * b - b * a; }

Poly apply_diffop(const DiffOp& op, const Poly& p) {
    Poly out;
    for (const auto& term : op.terms) {
        Poly d = p;
        for (int k = 0; k < term.order && !d.coeffs.empty(); ++k) d = d.deriv();
        out = out + term.coeff * d;
    }
    if (out.degree() > kDegreeCap)
        throw DegreeCapError("apply_diffop: result degree exceeds the cap");
    return out;
}

double op_residual(const DiffOp& a, const DiffOp& b, int max_degree) {
    double m = 0.0;
    for (int k = 0; k <= max_degree; ++k) {
        const Poly zk = Poly::monomial(k);
        m = std::max(m, max_coeff_diff(apply_diffop(a, zk), apply_diffop(b, zk)));
    }
    return m;
}

// --- generators -----------------------------------------------------------

namespace {
const Poly kOne{Complex(1.0)};
const Poly kZ = Poly::monomial(1);
const Poly kZ2 = Poly::monomial(2);
} // namespace

DiffOp gen_S(Complex s) { return DiffOp::mul_by(kZ) * DiffOp::deriv() + DiffOp::scalar(s); }
DiffOp gen_Sminus() { return Complex(-1.0) * DiffOp::deriv(); }
DiffOp gen_Splus(Complex s) {
    return DiffOp::mul_by(kZ2) * DiffOp::deriv() + DiffOp::mul_by(2.0 * s * kZ);
}

DiffOp gen_J(Complex sx) { return gen_S(0.5 * sx); }
DiffOp gen_Jminus() { return gen_Sminus(); }
DiffOp gen_Jplus(Complex sx) { return gen_Splus(0.5 * sx); }

DiffOp gen_N(const SpinParams& params, Complex x) {
    const double beta = params.beta;
    const Poly zb = Poly{Complex(beta * beta), Complex(0.0), Complex(1.0)};
    const DiffOp inner =
        DiffOp::mul_by(zb) * DiffOp::deriv() +
        DiffOp::mul_by((Complex(params.s) + x) * kZ);
    return (1.0 / (2.0 * I * beta)) * inner;
}

DiffOp gen_Npm(const SpinParams& params, Complex x, int sign) {
    const Complex sx = Complex(params.s) + x;
    const double beta = params.beta;
    const DiffOp mix = gen_Jplus(sx) + Complex(beta * beta) * gen_Jminus();
    return Complex(-1.0) * gen_J(sx) +
           (double(sign) / (2.0 * I * beta)) * mix;
}

DiffOp hamiltonian(Complex spin, double beta, double alpha) {
    const Poly zb = Poly{Complex(beta * beta), Complex(0.0), Complex(1.0)};
    return DiffOp::mul_by(zb) * DiffOp::deriv(2) +
           DiffOp::mul_by((2.0 * spin + 1.0) * kZ) * DiffOp::deriv() +
           (2.0 * I * alpha) * DiffOp::deriv() + DiffOp::scalar(spin * spin);
}

DiffOp op_I(Complex a, Complex b, double beta, double alpha) {
    const Complex sx = a + b;
    const DiffOp J = gen_J(sx), Jp = gen_Jplus(sx), Jm = gen_Jminus();
    return J * Jp - Complex(beta * beta) * (Jm * J) +
           (0.5 * (a - b)) * (Jp + Complex(beta * beta) * Jm) +
           (2.0 * I * alpha) * J;
}

// --- operator matrices ----------------------------------------------------

OpMatrix OpMatrix::identity(int n) {
    OpMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = DiffOp::scalar(1.0);
    return m;
}

OpMatrix operator*(const OpMatrix& a, const OpMatrix& b) {
    if (a.cols != b.rows) throw ConfigError("OpMatrix: shape mismatch");
    OpMatrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < b.cols; ++j) {
            DiffOp acc;
            for (int k = 0; k < a.cols; ++k) acc = acc + a.at(i, k) * b.at(k, j);
            out.at(i, j) = acc;
        }
    return out;
}

OpMatrix operator-(const OpMatrix& a, const OpMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw ConfigError("OpMatrix: shape mismatch");
    OpMatrix out(a.rows, a.cols);
    for (std::size_t k = 0; k < out.entries.size(); ++k)
        out.entries[k] = a.entries[k] - b.entries[k];
    return out;
}

OpMatrix kron(const OpMatrix& a, const OpMatrix& b) {
    OpMatrix out(a.rows * b.rows, a.cols * b.cols);
    for (int i1 = 0; i1 < a.rows; ++i1)
        for (int j1 = 0; j1 < a.cols; ++j1)
            for (int i2 = 0; i2 < b.rows; ++i2)
                for (int j2 = 0; j2 < b.cols; ++j2)
                    out.at(i1 * b.rows + i2, j1 * b.cols + j2) =
                        a.at(i1, j1) * b.at(i2, j2);
    return out;
}

OpMatrix lax(Complex u1, Complex u2) {
    OpMatrix L(2, 2);
    L.at(0, 0) = DiffOp::scalar(u1 + 1.0) + DiffOp::mul_by(kZ) * DiffOp::deriv();
    L.at(0, 1) = Complex(-1.0) * DiffOp::deriv();
    L.at(1, 0) = DiffOp::mul_by(kZ2) * DiffOp::deriv() +
                 DiffOp::mul_by((u1 - u2 + 1.0) * kZ);
    L.at(1, 1) = DiffOp::scalar(u2) - DiffOp::mul_by(kZ) * DiffOp::deriv();
    return L;
}

OpMatrix lax_factored(Complex u1, Complex u2) {
    OpMatrix lower(2, 2), core(2, 2), upper(2, 2);
    lower.at(0, 0) = DiffOp::scalar(1.0);
    lower.at(1, 0) = DiffOp::mul_by(kZ);
    lower.at(1, 1) = DiffOp::scalar(1.0);
    core.at(0, 0) = DiffOp::scalar(u1);
    core.at(0, 1) = Complex(-1.0) * DiffOp::deriv();
    core.at(1, 1) = DiffOp::scalar(u2);
    upper.at(0, 0) = DiffOp::scalar(1.0);
    upper.at(1, 0) = Complex(-1.0) * DiffOp::mul_by(kZ);
    upper.at(1, 1) = DiffOp::scalar(1.0);
    return lower * core * upper;
}

OpMatrix yang_r(Complex u) {
    OpMatrix R(4, 4);
    R.at(0, 0) = DiffOp::scalar(u + 1.0);
    R.at(1, 1) = DiffOp::scalar(u);
    R.at(1, 2) = DiffOp::scalar(1.0);
    R.at(2, 1) = DiffOp::scalar(1.0);
    R.at(2, 2) = DiffOp::scalar(u);
    R.at(3, 3) = DiffOp::scalar(u + 1.0);
    return R;
}

OpMatrix kmatrix(Complex u, const SpinParams& params) {
    OpMatrix K(2, 2);
    K.at(0, 0) = DiffOp::scalar(I * params.alpha);
    K.at(0, 1) = DiffOp::scalar(u - 0.5);
    K.at(1, 0) = DiffOp::scalar(-params.beta * params.beta * (u - 0.5));
    K.at(1, 1) = DiffOp::scalar(I * params.alpha);
    return K;
}

double check_yang_baxter(Complex u, Complex v, const SpinParams& params,
                         int basis_degree) {
    if (basis_degree > kDegreeCap - 2)
        throw DegreeCapError("check_yang_baxter: basis degree too close to the cap");
    const Complex s(params.s);
    const OpMatrix Lu = lax(u + s - 1.0, u - s);
    const OpMatrix Lv = lax(v + s - 1.0, v - s);
    const OpMatrix id = OpMatrix::identity(2);
    const OpMatrix R = yang_r(u - v);
    const OpMatrix lhs = R * kron(Lu, id) * kron(id, Lv);
    const OpMatrix rhs = kron(id, Lv) * kron(Lu, id) * R;
    double m = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m = std::max(m, op_residual(lhs.at(i, j), rhs.at(i, j), basis_degree));
    return m;
}

double check_reflection_kmatrix(Complex u, Complex v, const SpinParams& params) {
    using Mat = Eigen::Matrix4cd;
    auto r4 = [](Complex u_) {
        Mat R = Mat::Zero();
        R(0, 0) = u_ + 1.0;
        R(1, 1) = u_;
        R(1, 2) = 1.0;
        R(2, 1) = 1.0;
        R(2, 2) = u_;
        R(3, 3) = u_ + 1.0;
        return R;
    };
    auto k2 = [&](Complex u_) {
        Eigen::Matrix2cd K;
        K << I * params.alpha, u_ - 0.5, -params.beta * params.beta * (u_ - 0.5),
            I * params.alpha;
        return K;
    };
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    const Mat Ku1 = Eigen::kroneckerProduct(k2(u), id).eval();
    const Mat Kv2 = Eigen::kroneckerProduct(id, k2(v)).eval();
    const Mat lhs = r4(u - v) * Ku1 * r4(u + v - 1.0) * Kv2;
    const Mat rhs = Kv2 * r4(u + v - 1.0) * Ku1 * r4(u - v);
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

Complex casimir_value(Complex s, Complex x) {
    return (s + x) * (s + x - 2.0) / 2.0;
}

// --- Mobius-weight actions ------------------------------------------------

MobiusWeight compose(const MobiusWeight& A, const MobiusWeight& B) {
    MobiusWeight out;
    // maps compose as m_out = m_B after m_A, i.e. matrix(B) * matrix(A)
    out.a = B.a * A.a + B.b * A.c;
    out.b = B.a * A.b + B.b * A.d;
    out.c = B.c * A.a + B.d * A.c;
    out.d = B.c * A.b + B.d * A.d;
    out.weights = A.weights;
    for (const auto& f : B.weights) {
        // (p m_A(z) + q) = ((p a + q c) z + (p b + q d)) / (c z + d)
        out.weights.push_back({f.p * A.a + f.q * A.c, f.p * A.b + f.q * A.d, f.e});
        out.weights.push_back({A.c, A.d, -f.e});
    }
    return out;
}

halfplane::AnalyticFn mobius_apply(const MobiusWeight& W,
                                   const halfplane::AnalyticFn& f) {
    auto map = [W](Complex z) {
        const Complex den = W.c * z + W.d;
        if (std::abs(den) < 1e-12)
            throw SingularMapError("mobius_apply: evaluation at the map pole");
        return (W.a * z + W.b) / den;
    };
    auto weight = [W](Complex z) {
        Complex acc = 1.0;
        for (const auto& fac : W.weights) {
            const Complex base = fac.p * z + fac.q;
            if (std::abs(base) < 1e-12)
                throw SingularMapError("mobius_apply: weight base vanishes");
            acc *= std::pow(base, fac.e);
        }
        return acc;
    };
    halfplane::AnalyticFn out;
    out.eval = [W, map, weight, f](Complex z) {
        return weight(z) * f.eval(map(z));
    };
    if (f.deriv1) {
        out.deriv1 = [W, map, weight, f](Complex z) {
            const Complex den = W.c * z + W.d;
            const Complex mprime = (W.a * W.d - W.b * W.c) / (den * den);
            Complex dlogw = 0.0;
            for (const auto& fac : W.weights)
                dlogw += fac.e * fac.p / (fac.p * z + fac.q);
            const Complex wz = weight(z);
            return wz * (dlogw * f.eval(map(z)) + f.deriv1(map(z)) * mprime);
        };
    }
    out.decay_exponent = 0.0;
    return out;
}

MobiusWeight exp_generator(GenKind kind, Complex lambda, Complex sx) {
    MobiusWeight W;
    if (kind == GenKind::Jminus) {
        W.b = -lambda;
        return W;
    }
    W.c = -lambda;
    if (lambda != Complex(0.0)) W.weights.push_back({-lambda, Complex(1.0), -sx});
    return W;
}

double check_n2_identity(const SpinParams& params, Complex x,
                         const halfplane::AnalyticFn& f, HPoint z) {
    if (!f.deriv1)
        throw MissingDerivativeError("check_n2_identity: f needs deriv1");
    const Complex sx = Complex(params.s) + x;
    const double beta = params.beta;

    const Complex lam_p = -1.0 / (I * beta);  // outermost e^{-J_+/(i beta)}
    const Complex lam_m = I * beta / 2.0;

    const auto W1 = exp_generator(GenKind::Jplus, lam_p, sx);
    const auto W2 = exp_generator(GenKind::Jminus, lam_m, sx);
    const auto W3 = exp_generator(GenKind::Jminus, -lam_m, sx);
    const auto W4 = exp_generator(GenKind::Jplus, -lam_p, sx);

    const auto inner = mobius_apply(W3, mobius_apply(W4, f));
    halfplane::AnalyticFn jed;
    jed.eval = [inner, sx](Complex w) {
        return w * inner.deriv1(w) + 0.5 * sx * inner.eval(w);
    };
    const auto rhs_fn = mobius_apply(W1, mobius_apply(W2, jed));
    const Complex rhs = rhs_fn.eval(z.z);

    const Complex lhs = apply_diffop_fn(
        gen_N(params, x),
        [&](int order) { return order == 0 ? f.eval(z.z) : f.deriv1(z.z); }, z.z);
    return std::abs(lhs - rhs);
}

std::array<double, 3> check_intertwining(const SpinParams& params, Complex x,
                                         const Poly& p,
                                         const std::vector<HPoint>& zgrid) {
    const Complex s(params.s);
    reflection::ReflectParams rp{params, x};
    rp.validate();

    // K applied to a polynomial, with derivatives, through the deformed
    // beta-integral representation
    auto refl = [&](const Poly& q, HPoint z, int order) {
        halfplane::AnalyticFn fn;
        const Poly d1 = q.deriv(), d2 = d1.deriv();
        fn.eval = [q](Complex w) { return q.eval(w); };
        fn.deriv1 = [d1](Complex w) { return d1.eval(w); };
        fn.deriv2 = [d2](Complex w) { return d2.eval(w); };
        return reflection::reflect_v2(rp, fn, z, order);
    };

    const DiffOp N = gen_N(params, x);
    const DiffOp Hs = hamiltonian(s, params.beta, params.alpha);
    const DiffOp Hx = hamiltonian(x, params.beta, params.alpha);
    const DiffOp Isx = op_I(s, x, params.beta, params.alpha);
    const DiffOp Ixs = op_I(x, s, params.beta, params.alpha);

    const std::array<std::pair<const DiffOp*, const DiffOp*>, 3> rels = {
        std::make_pair(&N, &N), {&Hx, &Hs}, {&Ixs, &Isx}};

    std::array<double, 3> res{0.0, 0.0, 0.0};
    for (std::size_t r = 0; r < rels.size(); ++r) {
        const Poly image = apply_diffop(*rels[r].first, p);
        for (const auto& z : zgrid) {
            const Complex lhs = refl(image, z, 0);
            const Complex rhs = apply_diffop_fn(
                *rels[r].second, [&](int order) { return refl(p, z, order); },
                z.z);
            res[r] = std::max(res[r], std::abs(lhs - rhs));
        }
    }
    return res;
}

} // namespace openchain::algebra
