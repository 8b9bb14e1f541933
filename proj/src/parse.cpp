#include "qdiff/parse.hpp"

#include "qdiff/errors.hpp"

#include <cctype>
#include <map>

namespace qd {

std::string to_string(ParsedKind k) {
    switch (k) {
        case ParsedKind::Scalar: return "scalar";
        case ParsedKind::Series: return "series";
        case ParsedKind::Operator: return "operator";
        case ParsedKind::Module: return "module";
        case ParsedKind::Equation: return "equation";
    }
    return "?";
}

namespace {

enum class Tok { Num, Ident, Sym, End };

struct Token {
    Tok kind;
    std::string text;
    size_t pos;
};

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < s.size()) {
        const unsigned char ch = static_cast<unsigned char>(s[i]);
        if (std::isspace(ch)) {
            ++i;
        } else if (std::isdigit(ch)) {
            size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            out.push_back({Tok::Num, s.substr(i, j - i), i});
            i = j;
        } else if (std::isalpha(ch)) {
            size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            out.push_back({Tok::Ident, s.substr(i, j - i), i});
            i = j;
        } else if (std::string("+-*/^()[],=").find(static_cast<char>(ch)) != std::string::npos) {
            out.push_back({Tok::Sym, std::string(1, static_cast<char>(ch)), i});
            ++i;
        } else {
            throw SyntaxError(std::string("unexpected character '") + static_cast<char>(ch) + "'", i);
        }
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

// Intermediate value. Vec is a combination of basis symbols e1, e2, ...
struct Val {
    enum K { S, F, L, V } k = S;
    CoeffScalar s = CoeffScalar(0);
    PuiseuxSeries f;
    SkewOperator op;
    std::map<size_t, PuiseuxSeries> vec;
};

PuiseuxSeries series_of(const Val& v) { return v.k == Val::S ? PuiseuxSeries(v.s) : v.f; }

SkewOperator op_of(const Val& v) { return v.k == Val::L ? v.op : SkewOperator(series_of(v)); }

Val of_series(const PuiseuxSeries& f) {
    Val v;
    v.k = Val::F;
    v.f = f;
    return v;
}

Val of_op(const SkewOperator& L) {
    Val v;
    v.k = Val::L;
    v.op = L;
    return v;
}

Val of_scalar(const CoeffScalar& c) {
    Val v;
    v.s = c;
    return v;
}

// c with c = q^w exactly.
bool is_qpow(const CoeffScalar& c) { return !c.is_zero() && c.is_monomial() && c.lead().is_rational() && c.lead().rational_part() == 1; }

class Parser {
public:
    Parser(const std::string& text, const Rat& T) : toks_(lex(text)), T_(T) {}

    Parsed run() {
        Parsed out;
        if (module_form()) {
            out.kind = ParsedKind::Module;
            out.module = system();
        } else if (has_equals()) {
            out.kind = ParsedKind::Equation;
            out.eq = equation();
        } else {
            Val v = expr();
            expect_end();
            lower(v, out);
        }
        return out;
    }

private:
    std::vector<Token> toks_;
    Rat T_;
    size_t i_ = 0;
    bool basis_ok_ = false;

    const Token& peek(size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
    bool sym(const char* c) const { return peek().kind == Tok::Sym && peek().text == c; }
    Token take() { return toks_[std::min(i_++, toks_.size() - 1)]; }
    void expect(const char* c) {
        if (!sym(c)) throw SyntaxError(std::string("expected '") + c + "'", peek().pos);
        ++i_;
    }
    void expect_end() {
        if (peek().kind != Tok::End) throw SyntaxError("unexpected '" + peek().text + "'", peek().pos);
    }

    static bool basis_name(const std::string& s) {
        if (s.empty() || s[0] != 'e') return false;
        for (size_t k = 1; k < s.size(); ++k)
            if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
        return s.size() == 1 || s[1] != '0';
    }
    static size_t basis_index(const std::string& s) { return s.size() == 1 ? 0 : std::stoul(s.substr(1)) - 1; }

    bool module_form() const {
        return toks_.size() > 2 && toks_[0].kind == Tok::Ident && toks_[0].text == "PHI" && toks_[1].kind == Tok::Ident &&
               basis_name(toks_[1].text);
    }
    bool has_equals() const {
        for (const auto& t : toks_)
            if (t.kind == Tok::Sym && t.text == "=") return true;
        return false;
    }

    long long small_int(const Token& t) {
        if (t.kind != Tok::Num) throw SyntaxError("expected an integer", t.pos);
        if (t.text.size() > 15) throw SyntaxError("exponent too large", t.pos);
        return std::stoll(t.text);
    }

    Rat exponent() {
        if (sym("(")) {
            ++i_;
            long long sign = 1;
            if (sym("-")) {
                ++i_;
                sign = -1;
            }
            const long long a = small_int(take());
            long long b = 1;
            if (sym("/")) {
                ++i_;
                const Token t = peek();
                b = small_int(take());
                if (b == 0) throw SyntaxError("zero denominator in exponent", t.pos);
            }
            expect(")");
            return Rat(sign * a, b);
        }
        long long sign = 1;
        if (sym("-")) {
            ++i_;
            sign = -1;
        }
        return Rat(sign * small_int(take()));
    }

    Val expr() {
        bool neg = false;
        if (sym("+") || sym("-")) neg = take().text == "-";
        Val acc = term();
        if (neg) acc = negate(acc);
        while (sym("+") || sym("-")) {
            const Token t = take();
            Val r = term();
            acc = add(acc, t.text == "-" ? negate(r) : r, t.pos);
        }
        return acc;
    }

    Val term() {
        Val acc = factor();
        while (sym("*") || sym("/")) {
            const Token t = take();
            Val r = factor();
            acc = t.text == "*" ? mul(acc, r, t.pos) : divide(acc, r, t.pos);
        }
        return acc;
    }

    Val factor() {
        const size_t pos = peek().pos;
        Val base = primary();
        if (!sym("^")) return base;
        ++i_;
        return power(base, exponent(), pos);
    }

    Val primary() {
        const Token t = take();
        if (t.kind == Tok::Num) return of_scalar(CoeffScalar(mpq_class(mpz_class(t.text))));
        if (t.kind == Tok::Sym && t.text == "(") {
            Val v = expr();
            expect(")");
            return v;
        }
        if (t.kind == Tok::Sym && t.text == "[")
            throw SyntaxError("a matrix can only stand alone", t.pos);
        if (t.kind != Tok::Ident) throw SyntaxError(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'", t.pos);
        const std::string& s = t.text;
        if (s == "q") return of_scalar(CoeffScalar::qpow(Rat(1)));
        if (s == "z") return of_series(PuiseuxSeries::z());
        if (s == "i") return of_scalar(CoeffScalar::zeta(4, 1));
        if (s == "PHI") return of_op(SkewOperator::phi_pow(1));
        if (s.rfind("zeta_", 0) == 0) {
            const std::string m = s.substr(5);
            if (m.empty() || m.size() > 6 || m.find_first_not_of("0123456789") != std::string::npos || std::stoi(m) < 1)
                throw SyntaxError("bad root of unity '" + s + "'", t.pos);
            return of_scalar(CoeffScalar::zeta(std::stoi(m), 1));
        }
        if (s == "O") {
            const size_t pos = peek().pos;
            expect("(");
            Val v = expr();
            expect(")");
            if (v.k == Val::S && v.s == CoeffScalar(1)) return of_series(PuiseuxSeries::big_o(Rat(0)));
            if (v.k == Val::F && v.f.is_monomial() && v.f.lead() == CoeffScalar(1))
                return of_series(PuiseuxSeries::big_o(v.f.val()));
            throw SyntaxError("O(...) takes a power of z", pos);
        }
        if (basis_name(s)) {
            if (!basis_ok_) throw SyntaxError("basis symbol '" + s + "' outside a module system", t.pos);
            Val v;
            v.k = Val::V;
            v.vec[basis_index(s)] = PuiseuxSeries(1);
            return v;
        }
        throw SyntaxError("unknown symbol '" + s + "'", t.pos);
    }

    static Val negate(const Val& a) {
        Val r = a;
        r.s = -a.s;
        r.f = -a.f;
        r.op = -a.op;
        for (auto& [k, c] : r.vec) c = -c;
        return r;
    }

    static Val add(const Val& a, const Val& b, size_t pos) {
        if ((a.k == Val::V) != (b.k == Val::V)) throw SyntaxError("cannot add a basis combination to a coefficient", pos);
        if (a.k == Val::V) {
            Val r = a;
            for (const auto& [k, c] : b.vec) r.vec[k] = r.vec.count(k) ? r.vec[k] + c : c;
            return r;
        }
        const Val::K k = std::max(a.k, b.k);
        if (k == Val::S) return of_scalar(a.s + b.s);
        if (k == Val::F) return of_series(series_of(a) + series_of(b));
        return of_op(op_of(a) + op_of(b));
    }

    static Val scale_vec(const Val& vec, const Val& c, size_t pos) {
        if (c.k == Val::L || c.k == Val::V) throw SyntaxError("basis symbols take series coefficients", pos);
        Val r = vec;
        for (auto& [k, x] : r.vec) x = series_of(c) * x;
        return r;
    }

    static Val mul(const Val& a, const Val& b, size_t pos) {
        if (a.k == Val::V) return scale_vec(a, b, pos);
        if (b.k == Val::V) return scale_vec(b, a, pos);
        const Val::K k = std::max(a.k, b.k);
        if (k == Val::S) return of_scalar(a.s * b.s);
        if (k == Val::F) return of_series(series_of(a) * series_of(b));
        return of_op(op_of(a) * op_of(b));
    }

    // Inverse of a scalar or of an exact monomial series.
    static PuiseuxSeries inverse_coeff(const Val& b, size_t pos) {
        if (b.k == Val::S) {
            if (b.s.is_zero()) fail(ErrorKind::ZeroDivisor, "division by zero at position " + std::to_string(pos));
            return PuiseuxSeries(inv(b.s));
        }
        if (b.k == Val::F && b.f.is_monomial()) return PuiseuxSeries::monomial(inv(b.f.lead()), -b.f.val());
        if (b.k == Val::F && b.f.is_zero()) fail(ErrorKind::ZeroDivisor, "division by zero at position " + std::to_string(pos));
        throw SyntaxError("division is only defined by a scalar or a monomial", pos);
    }

    static Val divide(const Val& a, const Val& b, size_t pos) {
        if (a.k == Val::S && b.k == Val::S) {
            if (b.s.is_zero()) fail(ErrorKind::ZeroDivisor, "division by zero at position " + std::to_string(pos));
            return of_scalar(a.s / b.s);
        }
        const PuiseuxSeries d = inverse_coeff(b, pos);
        if (a.k == Val::V) return scale_vec(a, of_series(d), pos);
        if (a.k == Val::L) return of_op(d * a.op);
        return of_series(series_of(a) * d);
    }

    Val power(const Val& a, const Rat& e, size_t pos) {
        if (a.k == Val::V) throw SyntaxError("power of a basis symbol", pos);
        if (e.denominator() != 1) {
            if (a.k == Val::S && is_qpow(a.s)) return of_scalar(CoeffScalar::qpow(a.s.w() * e));
            if (a.k == Val::F && a.f.is_monomial() && is_qpow(a.f.lead()))
                return of_series(PuiseuxSeries::monomial(CoeffScalar::qpow(a.f.lead().w() * e), a.f.val() * e));
            throw SyntaxError("fractional powers are only defined for q^a z^b", pos);
        }
        const long long n = e.numerator();
        if (a.k == Val::S) {
            if (a.s.is_zero() && n < 0) fail(ErrorKind::ZeroDivisor, "negative power of zero");
            return of_scalar(pow(a.s, n));
        }
        if (a.k == Val::F) {
            if (n < 0 && !a.f.is_monomial()) throw SyntaxError("negative powers are only defined for monomials", pos);
            return of_series(pow(a.f, n));
        }
        if (n < 0) {
            const auto& t = a.op.terms();
            if (t.size() != 1 || !(t.begin()->second == PuiseuxSeries(1)))
                throw SyntaxError("negative powers are only defined for PHI^k", pos);
            return of_op(SkewOperator::phi_pow(t.begin()->first * n));
        }
        if (n > 4096) throw SyntaxError("operator power too large", pos);
        SkewOperator r(PuiseuxSeries(1));
        for (long long k = 0; k < n; ++k) r = r * a.op;
        return of_op(r);
    }

    // Reduces to the smallest kind that holds the value.
    static void lower(const Val& v, Parsed& out) {
        SkewOperator L = op_of(v);
        if (v.k == Val::L && !(L.terms().size() == 1 && L.terms().begin()->first == 0) && !L.is_zero()) {
            out.kind = ParsedKind::Operator;
            out.op = L;
            return;
        }
        PuiseuxSeries f = L.is_zero() ? PuiseuxSeries() : L.terms().begin()->second;
        if (v.k != Val::L) f = series_of(v);
        if (f.exact() && (f.is_zero() || (f.is_monomial() && f.val() == Rat(0)))) {
            out.kind = ParsedKind::Scalar;
            out.scalar = f.is_zero() ? CoeffScalar(0) : f.lead();
            return;
        }
        out.kind = ParsedKind::Series;
        out.series = f;
    }

    PuiseuxSeries entry() {
        const size_t pos = peek().pos;
        Val v = expr();
        if (v.k == Val::L || v.k == Val::V) throw SyntaxError("matrix entries must be series", pos);
        return series_of(v);
    }

    DiffModule matrix() {
        const size_t pos = peek().pos;
        expect("[");
        std::vector<std::vector<PuiseuxSeries>> rows;
        do {
            expect("[");
            std::vector<PuiseuxSeries> row{entry()};
            while (sym(",")) {
                ++i_;
                row.push_back(entry());
            }
            expect("]");
            rows.push_back(std::move(row));
        } while (sym(",") && (++i_, true));
        expect("]");
        for (const auto& r : rows)
            if (r.size() != rows.size()) throw SyntaxError("a Phi-matrix must be square", pos);
        SMat B(rows.size(), rows.size());
        for (size_t r = 0; r < rows.size(); ++r)
            for (size_t c = 0; c < rows.size(); ++c) B(r, c) = rows[r][c];
        return DiffModule::from_B(B, T_);
    }

    // PHI e_j = sum_i B_ij e_i, one equation per basis vector.
    DiffModule system() {
        basis_ok_ = true;
        std::map<size_t, std::map<size_t, PuiseuxSeries>> cols;
        bool bare = false, numbered = false;
        do {
            expect_ident("PHI");
            const Token b = take();
            if (b.kind != Tok::Ident || !basis_name(b.text)) throw SyntaxError("expected a basis symbol", b.pos);
            (b.text == "e" ? bare : numbered) = true;
            const size_t j = basis_index(b.text);
            if (cols.count(j)) throw SyntaxError("second equation for " + b.text, b.pos);
            expect("=");
            const size_t pos = peek().pos;
            Val v = expr();
            if (v.k == Val::S && v.s.is_zero()) v.k = Val::V;
            if (v.k != Val::V) throw SyntaxError("right-hand side must be a combination of basis symbols", pos);
            cols[j] = v.vec;
        } while (sym(",") && (++i_, true));
        expect_end();
        const size_t n = cols.size();
        if (bare && (numbered || n > 1)) throw SyntaxError("'e' is only allowed in rank one", toks_[1].pos);
        SMat B(n, n);
        for (const auto& [j, col] : cols) {
            if (j >= n) throw SyntaxError("basis vectors must be e1..e" + std::to_string(n), toks_[1].pos);
            for (const auto& [i, c] : col) {
                if (i >= n) throw SyntaxError("basis vectors must be e1..e" + std::to_string(n), toks_[1].pos);
                B(i, j) = c;
            }
        }
        return DiffModule::from_B(B, T_);
    }

    void expect_ident(const char* s) {
        if (peek().kind != Tok::Ident || peek().text != s) throw SyntaxError(std::string("expected '") + s + "'", peek().pos);
        ++i_;
    }

    EquationSpec equation() {
        EquationSpec eq;
        while (!sym("=")) {
            const size_t pos = peek().pos;
            expect("(");
            Val v = expr();
            expect(")");
            long long m = 1;
            if (sym("^")) {
                ++i_;
                const Token t = peek();
                m = small_int(take());
                if (m < 1) throw SyntaxError("factor multiplicity must be positive", t.pos);
            }
            const SkewOperator L = op_of(v);
            const auto& t = L.terms();
            if (t.size() != 2 || !t.count(0) || !t.count(1) || !(t.at(0) == PuiseuxSeries(-1)) || !t.at(1).is_monomial())
                throw SyntaxError("factor must have the form (c*z^-l*PHI-1)", pos);
            eq.factors.push_back({t.at(1).lead(), -t.at(1).val(), m});
            if (sym("*")) ++i_;
        }
        if (eq.factors.empty()) throw SyntaxError("equation needs at least one factor", peek().pos);
        expect("=");
        const size_t pos = peek().pos;
        Val r = expr();
        expect_end();
        if (r.k == Val::S && !r.s.is_zero()) {
            eq.rhs = r.s;
            eq.mu = Rat(0);
        } else if (r.k == Val::F && r.f.is_monomial()) {
            eq.rhs = r.f.lead();
            eq.mu = r.f.val();
        } else {
            throw SyntaxError("right-hand side must be a nonzero monomial c*z^mu", pos);
        }
        return eq;
    }

public:
    Parsed top() {
        if (sym("[")) {
            Parsed out;
            out.kind = ParsedKind::Module;
            out.module = matrix();
            expect_end();
            return out;
        }
        return run();
    }
};

}  // namespace

Parsed parse(const std::string& text, const Rat& T) {
    Parser p(text, T);
    return p.top();
}

std::string format(const EquationSpec& e) {
    std::string out;
    for (const auto& f : e.factors) {
        if (!out.empty()) out += "*";
        const std::string a = to_string(PuiseuxSeries::monomial(f.c, -f.lambda));
        const bool compound = a.find_first_of("+-", 1) != std::string::npos;
        out += "(" + (compound ? "(" + a + ")" : a) + "*PHI-1)";
        if (f.m != 1) out += "^" + std::to_string(f.m);
    }
    return out + " = " + to_string(PuiseuxSeries::monomial(e.rhs, e.mu));
}

std::string format(const Parsed& p) {
    switch (p.kind) {
        case ParsedKind::Scalar: return to_string(p.scalar);
        case ParsedKind::Series: return to_string(p.series);
        case ParsedKind::Operator: return to_string(p.op);
        case ParsedKind::Module: return to_string(p.module.B);
        case ParsedKind::Equation: return format(p.eq);
    }
    return "";
}

bool operator==(const Parsed& a, const Parsed& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ParsedKind::Scalar: return a.scalar == b.scalar;
        case ParsedKind::Series: return a.series == b.series;
        case ParsedKind::Operator: return a.op == b.op;
        case ParsedKind::Module: return a.module.B == b.module.B;
        case ParsedKind::Equation: {
            if (a.eq.factors.size() != b.eq.factors.size() || !(a.eq.rhs == b.eq.rhs) || a.eq.mu != b.eq.mu) return false;
            for (size_t k = 0; k < a.eq.factors.size(); ++k) {
                const BFactor &x = a.eq.factors[k], &y = b.eq.factors[k];
                if (!(x.c == y.c) || x.lambda != y.lambda || x.m != y.m) return false;
            }
            return true;
        }
    }
    return false;
}

SkewOperator as_operator(const Parsed& p) {
    switch (p.kind) {
        case ParsedKind::Scalar: return SkewOperator(PuiseuxSeries(p.scalar));
        case ParsedKind::Series: return SkewOperator(p.series);
        case ParsedKind::Operator: return p.op;
        default: fail(ErrorKind::InvalidArgument, "expected an operator, got a " + to_string(p.kind));
    }
}

DiffModule as_module(const Parsed& p, const Rat& T) {
    if (p.kind == ParsedKind::Module) return p.module;
    if (p.kind == ParsedKind::Operator) return companion(monic_normalize(p.op, T), T);
    fail(ErrorKind::InvalidArgument, "expected a module or an operator, got a " + to_string(p.kind));
}

}  // namespace qd
