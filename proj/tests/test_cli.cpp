#include "corpus.hpp"
#include "doctest.h"
#include "printers.hpp"
#include "qdiff/report.hpp"

using namespace qd;

namespace {

size_t syntax_position(const std::string& text) {
    try {
        parse(text);
    } catch (const SyntaxError& e) {
        return e.position();
    }
    FAIL("no syntax error for " << text);
    return 0;
}

Request req(const std::string& cmd, const std::string& in) {
    Request r;
    r.command = cmd;
    r.input = in;
    return r;
}

}  // namespace

TEST_CASE("parse examples") {
    Parsed a = parse("PHI^2 - (1+z)*PHI + z");
    REQUIRE(a.kind == ParsedKind::Operator);
    CHECK(a.op.deg_hi() == 2);
    CHECK(a.op.coeff(1) == -(PuiseuxSeries(1) + PuiseuxSeries::z()));

    Parsed m = parse("[[1,0],[0,z^-1]]");
    REQUIRE(m.kind == ParsedKind::Module);
    CHECK(m.module.dim() == 2);
    CHECK(m.module.B(1, 1) == PuiseuxSeries::z(Rat(-1)));

    Parsed s = parse("(q^(1/2))*z^(3/2)");
    REQUIRE(s.kind == ParsedKind::Series);
    CHECK(s.series == PuiseuxSeries::monomial(CoeffScalar::qpow(Rat(1, 2)), Rat(3, 2)));
}

TEST_CASE("scalar literals") {
    CHECK(parse("i").scalar == CoeffScalar::zeta(4, 1));
    CHECK(parse("zeta_6^3").scalar == CoeffScalar(-1));
    CHECK(parse("-3/4").scalar == CoeffScalar(mpq_class(-3, 4)));
    CHECK(parse("q^(2/4)").scalar == CoeffScalar::qpow(Rat(1, 2)));
    CHECK(parse("(q^(1/2))^2").scalar == CoeffScalar::qpow(Rat(1)));
    CHECK(parse("123456789012345678901234567890").scalar * CoeffScalar(0) == CoeffScalar(0));
    CHECK(parse("1/(1-q)").scalar * (CoeffScalar(1) - CoeffScalar::qpow(Rat(1))) == CoeffScalar(1));
    // products of operators follow PHI f = phi(f) PHI
    CHECK(parse("PHI*z").op == SkewOperator::term(PuiseuxSeries::monomial(CoeffScalar::qpow(Rat(1)), Rat(1)), 1));
}

TEST_CASE("module systems use columns of the Phi-matrix") {
    Parsed p = parse("PHI e1 = z*e2, PHI e2 = e1 + 3*e2");
    REQUIRE(p.kind == ParsedKind::Module);
    CHECK(p.module.B(1, 0) == PuiseuxSeries::z());
    CHECK(p.module.B(0, 0).is_zero());
    CHECK(p.module.B(0, 1) == PuiseuxSeries(1));
    CHECK(p.module.B(1, 1) == PuiseuxSeries(3));
    CHECK(parse("PHI e = e").module.B(0, 0) == PuiseuxSeries(1));
}

TEST_CASE("equations") {
    Parsed p = parse("(z^-1*PHI-1)^2 * (q*z^(-1/2)*PHI - 1) = 3*z^(1/2)");
    REQUIRE(p.kind == ParsedKind::Equation);
    REQUIRE(p.eq.factors.size() == 2);
    CHECK(p.eq.factors[0].lambda == Rat(1));
    CHECK(p.eq.factors[0].m == 2);
    CHECK(p.eq.factors[1].c == CoeffScalar::qpow(Rat(1)));
    CHECK(p.eq.factors[1].lambda == Rat(1, 2));
    CHECK(p.eq.rhs == CoeffScalar(3));
    CHECK(p.eq.mu == Rat(1, 2));
}

TEST_CASE("syntax errors carry the offending position") {
    CHECK(syntax_position("PHI +* z") == 5);
    CHECK(syntax_position("q^(1/0)") == 5);
    CHECK(syntax_position("z $ 1") == 2);
    CHECK(syntax_position("(1+z") == 4);
    CHECK(syntax_position("w") == 0);
    CHECK(syntax_position("[[1,2],[3]]") == 0);
    CHECK(syntax_position("1/(1+z)") == 1);
    CHECK(syntax_position("(1+z)^(1/2)") == 0);
    CHECK(syntax_position("PHI e1 = e1, PHI e1 = e1") == 17);
    CHECK(syntax_position("(PHI-z) = 1") == 0);
    CHECK(syntax_position("e1 + 1") == 0);
}

TEST_CASE("format then parse is the identity on the corpus") {
    REQUIRE(parse_corpus().size() >= 30);
    for (const auto& text : parse_corpus()) {
        const Parsed a = parse(text);
        const std::string f = format(a);
        const Parsed b = parse(f);
        CHECK_MESSAGE(a == b, (text + " -> " + f));
        CHECK_MESSAGE(format(b) == f, text);
    }
}

TEST_CASE("reports for the documented examples") {
    Outcome o = run(req("polygon", "PHI - q*(-z)^2"));
    CHECK(o.exit_code == 0);
    CHECK(o.report["result"]["slopes"] == nlohmann::json::parse(R"([["2",1]])"));

    o = run(req("cohomology", "PHI e = e"));
    CHECK(o.exit_code == 0);
    CHECK(o.report["result"]["h0"] == 1);
    CHECK(o.report["result"]["h1"] == 1);
    CHECK(o.report["result"]["window"] == 20);

    o = run(req("factor", "PHI^2-(1+z)*PHI+z"));
    CHECK(o.exit_code == 0);
    CHECK(o.report["result"]["factors"].size() == 2);
    CHECK(o.report["checks"]["product_residual"] == "0");
    CHECK(o.report["verified"] == true);
}

TEST_CASE("every command yields a verified report") {
    Options small;
    small.B = 6;
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"classify", "[[1,0],[0,z^-1]]"},
        {"galois", "PHI^2 - z"},
        {"moduli", "PHI e1 = e1, PHI e2 = z^2*e2 + (1 + 3*z)*e1"},
        {"cohomology", "PHI e1 = -z*e1, PHI e2 = e2"},
        {"solve", "(z^-1*PHI-1)^2 = z"},
        {"theta", ""},
        {"pv", "[[0,z],[1,0]]"},
    };
    for (const auto& [cmd, in] : cases) {
        Request r = req(cmd, in);
        r.options = small;
        Outcome o = run(r);
        CHECK_MESSAGE(o.exit_code == 0, (cmd + ": " + o.report.dump()));
        CHECK(o.report["schema"] == kReportSchema);
        CHECK(o.report["verified"] == true);
    }
}

TEST_CASE("errors map to exit codes") {
    CHECK(run(req("polygon", "PHI^")).exit_code == 2);
    CHECK(run(req("frobnicate", "PHI")).exit_code == 2);
    CHECK(run(req("cohomology", "[[z^(1/2)]]")).exit_code == 4);
    CHECK(run(req("solve", "(z*PHI-1) = 1")).exit_code == 5);
    CHECK(run(req("factor", "0")).exit_code == 5);
    Request r = req("cohomology", "PHI e = e");
    r.options.B = 0;
    CHECK(run(r).exit_code == 2);

    Outcome o = run(req("polygon", "PHI + $"));
    CHECK(o.report["status"] == "error");
    CHECK(o.report["error"]["kind"] == "SyntaxError");
    CHECK(o.report["error"]["position"] == 6);
}

TEST_CASE("notices for enlarged fields") {
    Outcome o = run(req("polygon", "PHI - zeta_3*q^(1/2)"));
    REQUIRE(o.report["notices"].size() == 2);
    CHECK(o.report["notices"][0] == "ramification raised to N=2");
    CHECK(o.report["notices"][1] == "cyclotomic order raised to M=3");
}

TEST_CASE("identical requests give identical reports, also in batch") {
    std::vector<Request> rs;
    for (const auto& text : parse_corpus()) rs.push_back(req("polygon", text));
    rs.push_back(req("cohomology", "PHI e = -z*e"));
    const auto a = run_batch(rs, 1), b = run_batch(rs, 6);
    REQUIRE(a.size() == rs.size());
    for (size_t k = 0; k < rs.size(); ++k) {
        CHECK(a[k].report.dump() == b[k].report.dump());
        CHECK(a[k].report.dump() == run(rs[k]).report.dump());
        CHECK(a[k].report["input"] == rs[k].input);
    }
}
