#ifndef OPENCHAIN_DIAGRAMS_HPP
#define OPENCHAIN_DIAGRAMS_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "openchain/halfplane.hpp"
#include "openchain/params.hpp"

namespace openchain::diagrams {

/// Exact rational p/q in lowest terms, q > 0.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d = 1);

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator-() const;
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool is_zero() const { return num == 0; }
    double value() const { return double(num) / double(den); }
};

/// Complex rational coefficient re + im * i.
struct Coeff {
    Rational re, im;

    Coeff operator+(const Coeff& o) const { return {re + o.re, im + o.im}; }
    Coeff operator-(const Coeff& o) const { return {re - o.re, im - o.im}; }
    Coeff operator*(const Coeff& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    Coeff operator-() const { return {-re, -im}; }
    bool operator==(const Coeff& o) const { return re == o.re && im == o.im; }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    Complex value() const { return {re.value(), im.value()}; }
};

/// Values for the symbols of an ExponentExpr plus the numeric model
/// parameters ("beta" is required by prefactor evaluation).
using Assignment = std::map<std::string, Complex>;

/// Linear combination over the symbols {s, g, x, lam, rho, eps} plus a
/// constant term, with complex rational coefficients.  Canonical form is
/// the fixed symbol order; equality is coefficient-wise.
struct ExponentExpr {
    // order: s, g, x, lam, rho, eps, constant
    static constexpr int kSymbols = 7;
    std::array<Coeff, kSymbols> c{};

    ExponentExpr operator+(const ExponentExpr& o) const;
    ExponentExpr operator-(const ExponentExpr& o) const;
    ExponentExpr operator-() const;
    bool operator==(const ExponentExpr& o) const { return c == o.c; }
    bool is_zero() const;

    Complex eval(const Assignment& a) const;
};

/// Parses the edge-label mini-grammar: sum of terms, each a product of an
/// optional rational/decimal coefficient, an optional factor `i`, and an
/// optional symbol from {s, g, x, lam, rho, eps}; mixed complex
/// coefficients are parenthesized, e.g. "(1/2+3*i)*lam".  Throws
/// ParseError with position.  parse(print(e)) == e.
ExponentExpr parse_exponent(const std::string& text);
std::string print_exponent(const ExponentExpr& e);

enum class VertexKind { External, FixedPlus, FixedMinus, Internal };

struct Vertex {
    std::string id;
    VertexKind kind = VertexKind::External;
};

/// Directed line from -> to depicting (value(from) - conj value(to))^{-exp};
/// the fixed vertices contribute their literal values +-i beta (no
/// conjugation), matching the half-plane integral formulas.
struct Edge {
    std::string from, to;
    ExponentExpr exp;
};

/// Coefficient in front of the integral:
///   scalar * e^{i pi s * phase} * (2 i beta)^{pow} *
///   prod Gamma(num_k) / prod Gamma(den_k).
struct Prefactor {
    std::vector<ExponentExpr> gamma_num, gamma_den;
    ExponentExpr pow_2ibeta;
    ExponentExpr phase_pi_s;
    Complex scalar{1.0, 0.0};
};

struct Diagram {
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    Prefactor prefactor;

    const Vertex* find_vertex(const std::string& id) const;
};

struct RewriteStep {
    enum class Rule { Chain, Euler, FeynmanJoin, WAbc };
    Rule rule = Rule::Chain;
    std::string vertex;
    Prefactor coefficient_delta;  // multiplied onto the pre-diagram prefactor
};

/// JSON round-trip for the documented schema.
Diagram diagram_from_json(const std::string& text);
std::string diagram_to_json(const Diagram& d);

/// Merges parallel edges, drops zero-exponent edges not incident to an
/// internal vertex, and cancels identical Gamma factors between the
/// numerator and denominator multisets (no functional-equation rewriting).
Diagram canonicalize(const Diagram& d);

/// Integrates out an internal vertex with exactly one in-edge (exponent
/// lam) and one out-edge (exponent rho): the pair becomes a single edge of
/// exponent lam + rho - 2s and the prefactor gains
/// e^{-i pi s} Gamma(lam+rho-2s) Gamma(2s) / (Gamma(lam) Gamma(rho)).
Diagram apply_chain_rule(const Diagram& d, const std::string& vertex,
                         RewriteStep* step = nullptr);

/// Transforms the three-edge star at an internal vertex (in-edges from a
/// free point with exponent lam and from +i beta with exponent nu, out-edge
/// to -i beta with exponent rho) into the star (nu, lam, 4s-lam-nu-rho),
/// multiplying the prefactor by
///   (2 i beta)^{2s-nu-rho} Gamma(4s-lam-nu-rho) Gamma(lam+nu+rho-2s)
///     / (Gamma(rho) Gamma(2s-rho))
/// and attaching the external factor (z + i beta)^{2s-lam-rho} as an edge
/// from the free point to -i beta with exponent lam+rho-2s.
Diagram apply_euler_transform(const Diagram& d, const std::string& vertex,
                              RewriteStep* step = nullptr);

Complex evaluate_prefactor(const Prefactor& p, const Assignment& a);

/// Numeric value of a diagram with at most two internal vertices,
/// including the fully evaluated prefactor.  `points` supplies the
/// positions of the external vertices.  Convergence bookkeeping: at every
/// internal vertex the incident exponents must sum above 2s.
Complex evaluate_diagram(const Diagram& d, const Assignment& a,
                         const std::map<std::string, Complex>& points,
                         const halfplane::HQuadGrid& grid);

/// Replays the reflection-kernel-on-1 derivation: one chain step and one
/// Euler step turn the two-loop kernel diagram into the single-loop
/// hypergeometric diagram with exponent triple (s-x, g+x, 2s+x-g).
struct Fig3Replay {
    Diagram initial;
    Diagram final_diagram;
    std::vector<RewriteStep> trace;
};
Fig3Replay replay_fig3();

/// The epsilon-regularized eigenfunction scalar product assembled from the
/// diagrammatic rewrite chain; for eps -> 0 it is a delta sequence
/// concentrating at lambda = +-rho with mass mu^{-1}(lambda).  Throws
/// PoleError at eps = 0 with lambda = +-rho and ConfigError for eps
/// outside [0, 0.1].
Complex orthogonality_pipeline(const SpinParams& params, double lambda,
                               double rho, double eps);

/// Residual |half-plane integral - beta-integral form| of the two-sided
/// representation with exponents (b, c-b, 2s+a-c) against the kernel point
/// v; the 1D side is Gauss-Jacobi in the Euler variable.
double w_abc_identity(const SpinParams& params, Complex a, Complex b,
                      Complex c, HPoint z, HPoint v,
                      const halfplane::HQuadGrid& grid);

} // namespace openchain::diagrams

#endif
