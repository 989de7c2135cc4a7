#include "openchain/diagrams.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <future>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "openchain/errors.hpp"
#include "openchain/quadrature.hpp"
#include "openchain/specfun.hpp"

namespace openchain::diagrams {

namespace {

constexpr double pi = std::numbers::pi;

const char* const kSymbolNames[ExponentExpr::kSymbols - 1] = {"s",   "g",   "x",
                                                              "lam", "rho", "eps"};
constexpr int kConst = ExponentExpr::kSymbols - 1;

} // namespace

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw ParseError("rational with zero denominator", 0);
    if (den < 0) { num = -num; den = -den; }
    const long long g = std::gcd(std::llabs(num), den);
    if (g > 1) { num /= g; den /= g; }
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
}
Rational Rational::operator-(const Rational& o) const {
    return Rational(num * o.den - o.num * den, den * o.den);
}
Rational Rational::operator*(const Rational& o) const {
    return Rational(num * o.num, den * o.den);
}
Rational Rational::operator-() const { return Rational(-num, den); }

ExponentExpr ExponentExpr::operator+(const ExponentExpr& o) const {
    ExponentExpr r;
    for (int k = 0; k < kSymbols; ++k) r.c[k] = c[k] + o.c[k];
    return r;
}
ExponentExpr ExponentExpr::operator-(const ExponentExpr& o) const {
    ExponentExpr r;
    for (int k = 0; k < kSymbols; ++k) r.c[k] = c[k] - o.c[k];
    return r;
}
ExponentExpr ExponentExpr::operator-() const {
    ExponentExpr r;
    for (int k = 0; k < kSymbols; ++k) r.c[k] = -c[k];
    return r;
}
bool ExponentExpr::is_zero() const {
    for (const auto& q : c)
        if (!q.is_zero()) return false;
    return true;
}

Complex ExponentExpr::eval(const Assignment& a) const {
    Complex sum = c[kConst].value();
    for (int k = 0; k < kConst; ++k) {
        if (c[k].is_zero()) continue;
        const auto it = a.find(kSymbolNames[k]);
        // unassigned symbols evaluate to zero
        if (it != a.end()) sum += c[k].value() * it->second;
    }
    return sum;
}

// ---------------------------------------------------------------- parser

namespace {

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(unsigned(text[pos]))) ++pos;
    }
    bool done() { skip_ws(); return pos >= text.size(); }
    char peek() { skip_ws(); return pos < text.size() ? text[pos] : '\0'; }
};

bool starts_number(char ch) { return std::isdigit(unsigned(ch)); }

Rational parse_number(Cursor& cur) {
    cur.skip_ws();
    const std::size_t start = cur.pos;
    long long intpart = 0;
    while (cur.pos < cur.text.size() && std::isdigit(unsigned(cur.text[cur.pos])))
        intpart = intpart * 10 + (cur.text[cur.pos++] - '0');
    if (cur.pos == start) throw ParseError("expected a number", cur.pos);
    if (cur.pos < cur.text.size() && cur.text[cur.pos] == '/') {
        ++cur.pos;
        long long den = 0;
        const std::size_t dstart = cur.pos;
        while (cur.pos < cur.text.size() && std::isdigit(unsigned(cur.text[cur.pos])))
            den = den * 10 + (cur.pos++, cur.text[cur.pos - 1] - '0');
        if (cur.pos == dstart) throw ParseError("expected a denominator", cur.pos);
        return Rational(intpart, den);
    }
    if (cur.pos < cur.text.size() && cur.text[cur.pos] == '.') {
        ++cur.pos;
        long long frac = 0, scale = 1;
        const std::size_t fstart = cur.pos;
        while (cur.pos < cur.text.size() && std::isdigit(unsigned(cur.text[cur.pos]))) {
            frac = frac * 10 + (cur.text[cur.pos++] - '0');
            scale *= 10;
        }
        if (cur.pos == fstart) throw ParseError("expected decimal digits", cur.pos);
        return Rational(intpart * scale + frac, scale);
    }
    return Rational(intpart);
}

int match_symbol(Cursor& cur) {
    cur.skip_ws();
    for (int k = 0; k < kConst; ++k) {
        const std::string name = kSymbolNames[k];
        if (cur.text.compare(cur.pos, name.size(), name) == 0) {
            // reject prefixes of a longer identifier
            const std::size_t after = cur.pos + name.size();
            if (after < cur.text.size() && std::isalpha(unsigned(cur.text[after])))
                continue;
            cur.pos = after;
            return k;
        }
    }
    return -1;
}

// signed sum "a", "a + b*i", "-i", ... inside parentheses
Coeff parse_complex_literal(Cursor& cur) {
    Coeff total{};
    bool first = true;
    for (;;) {
        char ch = cur.peek();
        Rational sign(1);
        if (ch == '+' || ch == '-') {
            if (ch == '-') sign = Rational(-1);
            ++cur.pos;
            ch = cur.peek();
        } else if (!first) {
            break;
        }
        Rational mag(1);
        bool has_mag = false, imag = false;
        if (starts_number(ch)) { mag = parse_number(cur); has_mag = true; }
        if (cur.peek() == '*') { ++cur.pos; }
        if (cur.peek() == 'i') { ++cur.pos; imag = true; }
        if (!has_mag && !imag)
            throw ParseError("expected a complex literal term", cur.pos);
        const Rational v = sign * mag;
        if (imag) total.im = total.im + v;
        else total.re = total.re + v;
        first = false;
    }
    return total;
}

} // namespace

ExponentExpr parse_exponent(const std::string& text) {
    Cursor cur{text};
    if (cur.done()) throw ParseError("empty exponent expression", 0);
    ExponentExpr out;
    bool any_term = false;
    for (;;) {
        char ch = cur.peek();
        Coeff sign{Rational(1), Rational(0)};
        if (ch == '+' || ch == '-') {
            if (!any_term && cur.pos == 0 && ch == '+')
                throw ParseError("unexpected leading '+'", cur.pos);
            if (ch == '-') sign = Coeff{Rational(-1), Rational(0)};
            ++cur.pos;
        } else if (any_term) {
            throw ParseError("expected '+' or '-' between terms", cur.pos);
        }
        // one term: product of factors
        Coeff coeff = sign;
        int sym = -1;
        bool any_factor = false;
        for (;;) {
            ch = cur.peek();
            if (ch == '*') { ++cur.pos; continue; }
            if (starts_number(ch)) {
                coeff = coeff * Coeff{parse_number(cur), Rational(0)};
                any_factor = true;
                continue;
            }
            if (ch == '(') {
                ++cur.pos;
                coeff = coeff * parse_complex_literal(cur);
                if (cur.peek() != ')')
                    throw ParseError("expected ')'", cur.pos);
                ++cur.pos;
                any_factor = true;
                continue;
            }
            if (ch == 'i') {
                const std::size_t after = cur.pos + 1;
                if (after >= cur.text.size() ||
                    !std::isalpha(unsigned(cur.text[after]))) {
                    ++cur.pos;
                    coeff = coeff * Coeff{Rational(0), Rational(1)};
                    any_factor = true;
                    continue;
                }
            }
            const int k = match_symbol(cur);
            if (k >= 0) {
                if (sym >= 0)
                    throw ParseError("two symbols in one term", cur.pos);
                sym = k;
                any_factor = true;
                continue;
            }
            break;
        }
        if (!any_factor) throw ParseError("expected a term", cur.pos);
        const int slot = sym >= 0 ? sym : kConst;
        out.c[slot] = out.c[slot] + coeff;
        any_term = true;
        if (cur.done()) break;
    }
    return out;
}

namespace {

std::string rational_str(const Rational& q) {
    std::string s = std::to_string(q.num);
    if (q.den != 1) s += "/" + std::to_string(q.den);
    return s;
}

// body of one printed term (sign handled by the caller); sym < 0 is the
// constant slot
std::string term_body(const Coeff& mag, int sym) {
    const bool has_sym = sym >= 0;
    const std::string name = has_sym ? kSymbolNames[sym] : "";
    if (mag.im.is_zero()) {
        if (!has_sym) return rational_str(mag.re);
        if (mag.re == Rational(1)) return name;
        if (mag.re.den == 1) return rational_str(mag.re) + name;
        return rational_str(mag.re) + "*" + name;
    }
    if (mag.re.is_zero()) {
        std::string head;
        if (mag.im == Rational(1)) head = "i";
        else if (mag.im.den == 1) head = rational_str(mag.im) + "i";
        else head = rational_str(mag.im) + "*i";
        return has_sym ? head + "*" + name : head;
    }
    std::string head = "(" + rational_str(mag.re);
    const Rational aim = mag.im.num < 0 ? -mag.im : mag.im;
    head += mag.im.num < 0 ? "-" : "+";
    head += rational_str(aim) + "*i)";
    return has_sym ? head + "*" + name : head;
}

} // namespace

std::string print_exponent(const ExponentExpr& e) {
    std::string out;
    for (int k = 0; k < ExponentExpr::kSymbols; ++k) {
        const Coeff& q = e.c[k];
        if (q.is_zero()) continue;
        // pull the sign out for pure-real / pure-imaginary coefficients
        bool negative = false;
        Coeff mag = q;
        if (q.im.is_zero()) { negative = q.re.num < 0; }
        else if (q.re.is_zero()) { negative = q.im.num < 0; }
        if (negative) mag = -q;
        if (out.empty()) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        out += term_body(mag, k == kConst ? -1 : k);
    }
    return out.empty() ? "0" : out;
}

// ------------------------------------------------------------------ JSON

const Vertex* Diagram::find_vertex(const std::string& id) const {
    for (const auto& v : vertices)
        if (v.id == id) return &v;
    return nullptr;
}

namespace {

const char* kind_name(VertexKind k) {
    switch (k) {
        case VertexKind::External: return "external";
        case VertexKind::FixedPlus: return "fixed_plus";
        case VertexKind::FixedMinus: return "fixed_minus";
        case VertexKind::Internal: return "internal";
    }
    return "external";
}

VertexKind kind_from(const std::string& s) {
    if (s == "external") return VertexKind::External;
    if (s == "fixed_plus") return VertexKind::FixedPlus;
    if (s == "fixed_minus") return VertexKind::FixedMinus;
    if (s == "internal") return VertexKind::Internal;
    throw ConfigError("diagram JSON: unknown vertex kind '" + s + "'");
}

// integer-valued constant expressions serialize as plain integers
bool integer_constant(const ExponentExpr& e, long long& out) {
    for (int k = 0; k < kConst; ++k)
        if (!e.c[k].is_zero()) return false;
    const Coeff& q = e.c[kConst];
    if (!q.im.is_zero() || q.re.den != 1) return false;
    out = q.re.num;
    return true;
}

} // namespace

Diagram diagram_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("diagram JSON: ") + e.what());
    }
    Diagram d;
    for (const auto& jv : j.at("vertices"))
        d.vertices.push_back({jv.at("id").get<std::string>(),
                              kind_from(jv.at("kind").get<std::string>())});
    for (const auto& je : j.at("edges"))
        d.edges.push_back({je.at("from").get<std::string>(),
                           je.at("to").get<std::string>(),
                           parse_exponent(je.at("exp").get<std::string>())});
    if (j.contains("prefactor")) {
        const auto& jp = j.at("prefactor");
        for (const auto& t : jp.value("gamma_num", std::vector<std::string>{}))
            d.prefactor.gamma_num.push_back(parse_exponent(t));
        for (const auto& t : jp.value("gamma_den", std::vector<std::string>{}))
            d.prefactor.gamma_den.push_back(parse_exponent(t));
        if (jp.contains("pow_2ibeta"))
            d.prefactor.pow_2ibeta =
                parse_exponent(jp.at("pow_2ibeta").get<std::string>());
        if (jp.contains("phase_pi_s")) {
            const auto& ph = jp.at("phase_pi_s");
            d.prefactor.phase_pi_s =
                ph.is_number_integer()
                    ? parse_exponent(std::to_string(ph.get<long long>()))
                    : parse_exponent(ph.get<std::string>());
        }
        if (jp.contains("scalar")) {
            const auto& sc = jp.at("scalar");
            d.prefactor.scalar = Complex(sc.at(0).get<double>(), sc.at(1).get<double>());
        }
    }
    return d;
}

std::string diagram_to_json(const Diagram& d) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const auto& v : d.vertices)
        j["vertices"].push_back({{"id", v.id}, {"kind", kind_name(v.kind)}});
    j["edges"] = nlohmann::json::array();
    for (const auto& e : d.edges)
        j["edges"].push_back(
            {{"from", e.from}, {"to", e.to}, {"exp", print_exponent(e.exp)}});
    auto& jp = j["prefactor"];
    jp["gamma_num"] = nlohmann::json::array();
    for (const auto& t : d.prefactor.gamma_num)
        jp["gamma_num"].push_back(print_exponent(t));
    jp["gamma_den"] = nlohmann::json::array();
    for (const auto& t : d.prefactor.gamma_den)
        jp["gamma_den"].push_back(print_exponent(t));
    jp["pow_2ibeta"] = print_exponent(d.prefactor.pow_2ibeta);
    long long n = 0;
    if (integer_constant(d.prefactor.phase_pi_s, n)) jp["phase_pi_s"] = n;
    else jp["phase_pi_s"] = print_exponent(d.prefactor.phase_pi_s);
    jp["scalar"] = {d.prefactor.scalar.real(), d.prefactor.scalar.imag()};
    return j.dump(2);
}

// --------------------------------------------------------------- rewrite

Diagram canonicalize(const Diagram& d) {
    Diagram out;
    out.vertices = d.vertices;
    out.prefactor = d.prefactor;
    // merge parallel edges
    for (const auto& e : d.edges) {
        bool merged = false;
        for (auto& oe : out.edges)
            if (oe.from == e.from && oe.to == e.to) {
                oe.exp = oe.exp + e.exp;
                merged = true;
                break;
            }
        if (!merged) out.edges.push_back(e);
    }
    // drop vanished lines away from internal vertices
    out.edges.erase(
        std::remove_if(out.edges.begin(), out.edges.end(),
                       [&](const Edge& e) {
                           if (!e.exp.is_zero()) return false;
                           const Vertex* a = out.find_vertex(e.from);
                           const Vertex* b = out.find_vertex(e.to);
                           return (!a || a->kind != VertexKind::Internal) &&
                                  (!b || b->kind != VertexKind::Internal);
                       }),
        out.edges.end());
    // cancel identical Gamma factors (multiset difference, no functional
    // equations applied)
    auto& num = out.prefactor.gamma_num;
    auto& den = out.prefactor.gamma_den;
    for (std::size_t i = 0; i < num.size();) {
        const auto hit = std::find(den.begin(), den.end(), num[i]);
        if (hit != den.end()) {
            den.erase(hit);
            num.erase(num.begin() + std::ptrdiff_t(i));
        } else {
            ++i;
        }
    }
    return out;
}

namespace {

ExponentExpr times_two_s() { return parse_exponent("2s"); }

void multiply_prefactor(Prefactor& p, const Prefactor& delta) {
    p.gamma_num.insert(p.gamma_num.end(), delta.gamma_num.begin(),
                       delta.gamma_num.end());
    p.gamma_den.insert(p.gamma_den.end(), delta.gamma_den.begin(),
                       delta.gamma_den.end());
    p.pow_2ibeta = p.pow_2ibeta + delta.pow_2ibeta;
    p.phase_pi_s = p.phase_pi_s + delta.phase_pi_s;
    p.scalar *= delta.scalar;
}

} // namespace

Diagram apply_chain_rule(const Diagram& d, const std::string& vertex,
                         RewriteStep* step) {
    const Vertex* v = d.find_vertex(vertex);
    if (!v) throw NotApplicableError("chain rule: unknown vertex '" + vertex + "'");
    if (v->kind != VertexKind::Internal)
        throw NotApplicableError("chain rule: vertex '" + vertex + "' is not internal");
    const Edge* in = nullptr;
    const Edge* out_edge = nullptr;
    for (const auto& e : d.edges) {
        if (e.to == vertex) {
            if (in) throw NotApplicableError("chain rule: vertex has two in-edges");
            in = &e;
        }
        if (e.from == vertex) {
            if (out_edge)
                throw NotApplicableError("chain rule: vertex has two out-edges");
            out_edge = &e;
        }
    }
    if (!in || !out_edge)
        throw NotApplicableError("chain rule: vertex needs one in- and one out-edge");

    const ExponentExpr lam = in->exp, rho = out_edge->exp;
    Prefactor delta;
    delta.gamma_num = {lam + rho - times_two_s(), times_two_s()};
    delta.gamma_den = {lam, rho};
    delta.phase_pi_s = -parse_exponent("1");

    Diagram next;
    for (const auto& w : d.vertices)
        if (w.id != vertex) next.vertices.push_back(w);
    for (const auto& e : d.edges)
        if (e.from != vertex && e.to != vertex) next.edges.push_back(e);
    next.edges.push_back({in->from, out_edge->to, lam + rho - times_two_s()});
    next.prefactor = d.prefactor;
    multiply_prefactor(next.prefactor, delta);

    if (step) *step = {RewriteStep::Rule::Chain, vertex, delta};
    return next;
}

Diagram apply_euler_transform(const Diagram& d, const std::string& vertex,
                              RewriteStep* step) {
    const Vertex* v = d.find_vertex(vertex);
    if (!v) throw NotApplicableError("Euler: unknown vertex '" + vertex + "'");
    if (v->kind != VertexKind::Internal)
        throw NotApplicableError("Euler: vertex '" + vertex + "' is not internal");
    const Edge* from_free = nullptr;   // lam
    const Edge* from_plus = nullptr;   // nu
    const Edge* to_minus = nullptr;    // rho
    int incident = 0;
    for (const auto& e : d.edges) {
        if (e.from != vertex && e.to != vertex) continue;
        ++incident;
        const Vertex* other = d.find_vertex(e.from == vertex ? e.to : e.from);
        if (!other) throw NotApplicableError("Euler: dangling edge at the vertex");
        if (e.to == vertex && other->kind == VertexKind::FixedPlus)
            from_plus = &e;
        else if (e.from == vertex && other->kind == VertexKind::FixedMinus)
            to_minus = &e;
        else if (e.to == vertex && (other->kind == VertexKind::External ||
                                    other->kind == VertexKind::Internal))
            from_free = &e;
    }
    if (incident != 3 || !from_free || !from_plus || !to_minus)
        throw NotApplicableError(
            "Euler: vertex must carry exactly the star (free -> v, +ibeta -> v, "
            "v -> -ibeta)");

    const ExponentExpr lam = from_free->exp, nu = from_plus->exp,
                       rho = to_minus->exp;
    const ExponentExpr four_s = times_two_s() + times_two_s();
    Prefactor delta;
    delta.gamma_num = {four_s - lam - nu - rho, lam + nu + rho - times_two_s()};
    delta.gamma_den = {rho, times_two_s() - rho};
    delta.pow_2ibeta = times_two_s() - nu - rho;

    Diagram next;
    next.vertices = d.vertices;
    for (const auto& e : d.edges)
        if (e.from != vertex && e.to != vertex) next.edges.push_back(e);
    next.edges.push_back({from_free->from, vertex, nu});
    next.edges.push_back({from_plus->from, vertex, lam});
    next.edges.push_back({vertex, to_minus->to, four_s - lam - nu - rho});
    // the external factor (z + i beta)^{2s - lam - rho}, encoded as a line
    // from the free point to -i beta with the negated exponent
    next.edges.push_back({from_free->from, to_minus->to, lam + rho - times_two_s()});
    next.prefactor = d.prefactor;
    multiply_prefactor(next.prefactor, delta);

    if (step) *step = {RewriteStep::Rule::Euler, vertex, delta};
    return next;
}

// ------------------------------------------------------------ evaluation

Complex evaluate_prefactor(const Prefactor& p, const Assignment& a) {
    using specfun::log_gamma;
    const auto bit = a.find("beta");
    const double beta = bit != a.end() ? bit->second.real() : 1.0;
    const auto sit = a.find("s");
    const Complex s = sit != a.end() ? sit->second : Complex(0.0);
    Complex lg = std::log(p.scalar);
    for (const auto& t : p.gamma_num) lg += log_gamma(t.eval(a));
    for (const auto& t : p.gamma_den) lg -= log_gamma(t.eval(a));
    lg += p.pow_2ibeta.eval(a) * std::log(2.0 * I * beta);
    lg += p.phase_pi_s.eval(a) * I * pi * s;
    return std::exp(lg);
}

namespace {

int diagram_thread_count() {
    if (const char* env = std::getenv("REFLECT_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

struct EvalContext {
    const Diagram& d;
    const Assignment& a;
    const std::map<std::string, Complex>& points;
    double beta;

    Complex source_value(const Vertex& v, Complex node) const {
        switch (v.kind) {
            case VertexKind::Internal: return node;
            case VertexKind::FixedPlus: return Complex(0.0, beta);
            case VertexKind::FixedMinus: return Complex(0.0, -beta);
            case VertexKind::External: break;
        }
        const auto it = points.find(v.id);
        if (it == points.end())
            throw ConfigError("evaluate_diagram: no point for external vertex '" +
                              v.id + "'");
        return it->second;
    }
    // the fixed vertices enter formulas with their literal values; only
    // genuine half-plane points are conjugated on the receiving end
    Complex target_value(const Vertex& v, Complex node) const {
        if (v.kind == VertexKind::FixedPlus) return Complex(0.0, beta);
        if (v.kind == VertexKind::FixedMinus) return Complex(0.0, -beta);
        return std::conj(source_value(v, node));
    }
};

} // namespace

Complex evaluate_diagram(const Diagram& d, const Assignment& a,
                         const std::map<std::string, Complex>& points,
                         const halfplane::HQuadGrid& grid) {
    const auto sit = a.find("s");
    if (sit == a.end()) throw ConfigError("evaluate_diagram: assignment needs 's'");
    const double s = sit->second.real();
    const auto bit = a.find("beta");
    const double beta = bit != a.end() ? bit->second.real() : 1.0;
    const auto git = a.find("g");
    const double g = (git != a.end() && git->second.real() > 0.0)
                         ? git->second.real()
                         : 1.0;
    const SpinParams params = SpinParams::from_g(s, g, beta);

    std::vector<const Vertex*> internal;
    for (const auto& v : d.vertices)
        if (v.kind == VertexKind::Internal) internal.push_back(&v);
    if (internal.size() > 2)
        throw ConfigError("evaluate_diagram: more than two internal vertices");

    // evaluated exponents and endpoint handles
    struct EvalEdge {
        const Vertex* from;
        const Vertex* to;
        Complex exp;
    };
    std::vector<EvalEdge> edges;
    edges.reserve(d.edges.size());
    for (const auto& e : d.edges) {
        const Vertex* vf = d.find_vertex(e.from);
        const Vertex* vt = d.find_vertex(e.to);
        if (!vf || !vt)
            throw ConfigError("evaluate_diagram: edge references unknown vertex");
        edges.push_back({vf, vt, e.exp.eval(a)});
    }

    // convergence bookkeeping at every integration vertex
    for (const Vertex* u : internal) {
        double total = 0.0;
        for (const auto& e : edges)
            if (e.from == u || e.to == u) total += e.exp.real();
        if (!(total > 2.0 * s))
            throw DivergenceError(
                "evaluate_diagram: exponents at internal vertex '" + u->id +
                "' sum to " + std::to_string(total) + " <= 2s");
    }

    const EvalContext ctx{d, a, points, beta};
    const Complex pref = evaluate_prefactor(d.prefactor, a);

    Complex constant = 1.0;
    for (const auto& e : edges) {
        if (e.from->kind == VertexKind::Internal ||
            e.to->kind == VertexKind::Internal)
            continue;
        constant *= std::pow(ctx.source_value(*e.from, 0.0) -
                                 ctx.target_value(*e.to, 0.0),
                             -e.exp);
    }
    if (internal.empty()) return pref * constant;

    if (internal.size() == 1) {
        const Vertex* u = internal[0];
        double decay = 0.0;
        for (const auto& e : edges)
            if (e.from == u || e.to == u) decay += e.exp.real();
        halfplane::AnalyticFn f;
        f.decay_exponent = decay;
        f.eval = [&, u](Complex w) {
            Complex prod = 1.0;
            for (const auto& e : edges) {
                if (e.from != u && e.to != u) continue;
                prod *= std::pow(ctx.source_value(*e.from, w) -
                                     ctx.target_value(*e.to, w),
                                 -e.exp);
            }
            return prod;
        };
        return pref * constant * halfplane::quad_halfplane(f, params, grid);
    }

    // two integrations: direct double sum; the inner mesh is recentered at
    // the real part of the outer node so its radial grading tracks the
    // near-singular internal line.  The vertex whose incident exponents sum
    // largest decays fastest at infinity and integrates on the outside,
    // where the tail is sampled on the fixed mesh; the slower-decaying
    // vertex gets the recentered inner mesh.
    auto decay_sum = [&](const Vertex* u) {
        double total = 0.0;
        for (const auto& e : edges)
            if (e.from == u || e.to == u) total += e.exp.real();
        return total;
    };
    if (decay_sum(internal[0]) < decay_sum(internal[1]))
        std::swap(internal[0], internal[1]);
    const Vertex* u1 = internal[0];
    const Vertex* u2 = internal[1];
    auto node_value = [&](const Vertex* v, Complex w1, Complex w2) {
        return v == u1 ? w1 : w2;
    };
    const auto& nodes = grid.nodes;
    const int nthreads = diagram_thread_count();
    std::vector<std::future<Complex>> parts;
    parts.reserve(nthreads);
    for (int tix = 0; tix < nthreads; ++tix) {
        parts.push_back(std::async(std::launch::async, [&, tix]() {
            Complex acc = 0.0;
            for (std::size_t i = tix; i < nodes.size(); i += nthreads) {
                const Complex w1 = nodes[i].z;
                Complex inner = 0.0;
                for (std::size_t jn = 0; jn < nodes.size(); ++jn) {
                    const Complex w2 = nodes[jn].z + w1.real();
                    Complex prod = 1.0;
                    for (const auto& e : edges) {
                        if (e.from->kind != VertexKind::Internal &&
                            e.to->kind != VertexKind::Internal)
                            continue;
                        const Complex src = ctx.source_value(
                            *e.from, node_value(e.from, w1, w2));
                        const Complex tgt = ctx.target_value(
                            *e.to, node_value(e.to, w1, w2));
                        prod *= std::pow(src - tgt, -e.exp);
                    }
                    inner += nodes[jn].weight * prod;
                }
                acc += nodes[i].weight * inner;
            }
            return acc;
        }));
    }
    Complex sum = 0.0;
    for (auto& part : parts) sum += part.get();
    return pref * constant * sum;
}

// ----------------------------------------------------------- derivations

Fig3Replay replay_fig3() {
    Fig3Replay r;
    Diagram d;
    d.vertices = {{"z", VertexKind::External},
                  {"p", VertexKind::FixedPlus},
                  {"m", VertexKind::FixedMinus},
                  {"v1", VertexKind::Internal},
                  {"v2", VertexKind::Internal}};
    d.edges = {{"z", "v1", parse_exponent("g + x")},
               {"p", "v1", parse_exponent("s - x")},
               {"v1", "v2", parse_exponent("3s - g")},
               {"v2", "m", parse_exponent("g - x")},
               {"z", "m", parse_exponent("s - g")}};
    d.prefactor.gamma_num = {parse_exponent("g + x"), parse_exponent("3s - g")};
    d.prefactor.gamma_den = {parse_exponent("2s"), parse_exponent("2s")};
    d.prefactor.pow_2ibeta = parse_exponent("s - x");
    d.prefactor.phase_pi_s = parse_exponent("2");
    r.initial = d;

    RewriteStep step;
    Diagram mid = apply_chain_rule(d, "v2", &step);
    r.trace.push_back(step);
    Diagram fin = apply_euler_transform(mid, "v1", &step);
    r.trace.push_back(step);
    r.final_diagram = canonicalize(fin);
    return r;
}

Complex orthogonality_pipeline(const SpinParams& params, double lambda,
                               double rho, double eps) {
    if (eps < 0.0 || eps > 0.1)
        throw ConfigError("orthogonality_pipeline: eps must lie in [0, 0.1]");
    const double s = params.s, g = params.g, beta = params.beta;
    const Complex il(0.0, lambda), ir(0.0, rho);
    if (eps == 0.0) {
        if (std::abs(lambda - rho) < 1e-12 || std::abs(lambda + rho) < 1e-12)
            throw PoleError(
                "orthogonality_pipeline: Gamma pole at lambda = +-rho, eps = 0");
        return 0.0;  // 1 / Gamma(0)
    }
    using specfun::log_gamma;
    const Complex log2ib = std::log(2.0 * I * beta);
    Complex lg = -I * pi * s;  // phases e^{2 i pi s} e^{-i pi s} e^{-2 i pi s}
    lg += log2ib * (2.0 * s + il - ir - 2.0 * il + il + ir - eps);
    // representation coefficients of both eigenfunctions
    lg += 2.0 * log_gamma(Complex(s + g)) + log_gamma(2.0 * s + il - g) +
          log_gamma(2.0 * s - ir - g) - 2.0 * log_gamma(Complex(2.0 * s)) -
          log_gamma(s + il) - log_gamma(s - ir);
    // chain step A1 -> A2
    lg += log_gamma(ir - il + eps) + log_gamma(Complex(2.0 * s)) -
          log_gamma(s + ir + eps) - log_gamma(s - il);
    // Euler step A2 -> A3
    lg += log_gamma(2.0 * s - il - ir - eps) + log_gamma(il + ir + eps) -
          log_gamma(2.0 * s - g + il) - log_gamma(g - il);
    // two closing chains of A3
    lg += log_gamma(il - ir + eps) + log_gamma(Complex(2.0 * s)) -
          log_gamma(2.0 * s - g - ir + eps) - log_gamma(g + il);
    lg += log_gamma(-il - ir + eps) + log_gamma(Complex(2.0 * s)) -
          log_gamma(2.0 * s - il - ir - eps) - log_gamma(Complex(2.0 * eps));
    return std::exp(lg);
}

double w_abc_identity(const SpinParams& params, Complex a, Complex b,
                      Complex c, HPoint z, HPoint v,
                      const halfplane::HQuadGrid& grid) {
    const double s = params.s, beta = params.beta;
    const Complex ib(0.0, beta);
    if (!(a.real() > 0.0) || !(b.real() > 0.0) || !(c.real() - b.real() > 0.0) ||
        !(2.0 * s + a.real() - c.real() > 0.0))
        throw DivergenceError(
            "w_abc_identity: need Re a, Re b, Re(c-b), Re(2s+a-c) > 0");

    halfplane::AnalyticFn f;
    f.decay_exponent = 2.0 * s + a.real();
    const Complex zz = z.z, vb = std::conj(v.z);
    f.eval = [=](Complex w) {
        const Complex wb = std::conj(w);
        return std::pow(zz - wb, -b) * std::pow(ib - wb, -(c - b)) *
               std::pow(w - vb, -(2.0 * s + a - c));
    };
    const Complex lhs = halfplane::quad_halfplane(f, params, grid);

    const auto rule = quad::gauss_jacobi_complex01(64, c - b - 1.0, b - 1.0);
    Complex integral = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j)
        integral += rule.weights[j] *
                    std::pow(rule.nodes[j] * (zz - ib) + ib - vb, -a);
    using specfun::log_gamma;
    const Complex coeff =
        std::exp(Complex(0.0, -pi * s) + log_gamma(a) +
                 log_gamma(Complex(2.0 * s)) - log_gamma(b) - log_gamma(c - b) -
                 log_gamma(2.0 * s + a - c));
    return std::abs(lhs - coeff * integral);
}

} // namespace openchain::diagrams
