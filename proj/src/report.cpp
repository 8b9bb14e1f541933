#include "qdiff/report.hpp"

#include "qdiff/moduli.hpp"
#include "qdiff/tate.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>

namespace qd {

using nlohmann::json;

const std::vector<std::string>& commands() {
    static const std::vector<std::string> c = {"polygon", "factor",     "classify", "galois", "moduli",
                                               "cohomology", "solve", "theta",    "pv"};
    return c;
}

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::SyntaxError:
        case ErrorKind::InvalidArgument: return 2;
        case ErrorKind::PrecisionExhausted:
        case ErrorKind::WindowTooSmall: return 3;
        case ErrorKind::UnsupportedShape:
        case ErrorKind::NotRegularSingular:
        case ErrorKind::EigenvalueNotInField:
        case ErrorKind::ResonanceUnresolved:
        case ErrorKind::NonIntegralDimension:
        case ErrorKind::NonMonic: return 4;
        case ErrorKind::ZeroScalar:
        case ErrorKind::ZeroDivisor:
        case ErrorKind::ZeroOperator:
        case ErrorKind::SingularConstantTerm:
        case ErrorKind::SingularGauge:
        case ErrorKind::DomainViolation: return 5;
    }
    return 1;
}

namespace {

json rat(const Rat& r) { return rat_str(r); }

json slopes_json(const std::vector<Rat>& s) {
    json a = json::array();
    for (const auto& x : s) a.push_back(rat(x));
    return a;
}

json type_json(const TypeMult& t) {
    return {{"slope", rat(t.type.slope)},
            {"class", to_string(t.type.cls)},
            {"m", t.type.m},
            {"mult", t.mult},
            {"text", to_string(t.type)}};
}

json types_json(const std::vector<TypeMult>& ts) {
    json a = json::array();
    for (const auto& t : ts) a.push_back(type_json(t));
    return a;
}

json group_json(const AbelianGroup& g) {
    return {{"free_rank", g.free_rank}, {"torsion", g.torsion}, {"text", to_string(g)}};
}

json descriptor_json(const GroupDescriptor& d) {
    json c = json::array();
    for (const auto& x : d.constituents) c.push_back(descriptor_json(x));
    return {{"shape", to_string(d.shape)},
            {"torus_rank", d.torus_rank},
            {"finite_invariants", d.finite_invariants},
            {"has_Ga", d.has_Ga},
            {"unipotent_dim", d.unipotent_dim ? json(*d.unipotent_dim) : json(nullptr)},
            {"n", d.n},
            {"nonabelian", d.nonabelian},
            {"quotient_invariants", d.quotient_invariants},
            {"types", types_json(d.types)},
            {"L", d.L ? group_json(*d.L) : json(nullptr)},
            {"constituents", c}};
}

// Smallest q^(1/N) and zeta_M holding every scalar of the input.
std::pair<long long, long long> field_of(const Parsed& p) {
    long long N = 1, M = 1;
    auto see = [&](const CoeffScalar& c) {
        if (c.is_zero()) return;
        const CoeffScalar k = c.canonical();
        N = std::lcm(N, static_cast<long long>(k.N()));
        M = std::lcm(M, static_cast<long long>(k.M()));
    };
    auto see_series = [&](const PuiseuxSeries& f) {
        for (const auto& c : f.coeffs()) see(c);
    };
    switch (p.kind) {
        case ParsedKind::Scalar: see(p.scalar); break;
        case ParsedKind::Series: see_series(p.series); break;
        case ParsedKind::Operator:
            for (const auto& [k, a] : p.op.terms()) see_series(a);
            break;
        case ParsedKind::Module:
            for (size_t i = 0; i < p.module.B.rows(); ++i)
                for (size_t j = 0; j < p.module.B.cols(); ++j) see_series(p.module.B(i, j));
            break;
        case ParsedKind::Equation:
            see(p.eq.rhs);
            for (const auto& f : p.eq.factors) see(f.c);
            break;
    }
    return {N, M};
}

struct Context {
    const Request& req;
    json notices = json::array();
    json checks = json::object();

    // Doubles T up to twice on PrecisionExhausted.
    template <class F>
    json with_precision(F f) {
        Rat T = req.options.T;
        for (int attempt = 0;; ++attempt) {
            try {
                return f(T);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::PrecisionExhausted || !req.options.enlarge || attempt == 2) throw;
                T *= 2;
                notices.push_back("precision raised to T=" + rat_str(T) + ": " + e.what());
            }
        }
    }
};

DiffModule module_at(const Parsed& p, const Rat& T) {
    DiffModule M = as_module(p, T);
    M.T = T;
    return M;
}

json cmd_polygon(Context& cx, const Parsed& p) {
    const SkewOperator L = as_operator(p);
    const NewtonPolygon np = newton_polygon(L);
    json verts = json::array(), segs = json::array(), slopes = json::array();
    long long total = 0;
    for (const auto& [i, v] : np.vertices) verts.push_back({i, rat(v)});
    for (const auto& s : np.segments) {
        segs.push_back({{"slope", rat(s.slope)}, {"length", s.length}, {"left", s.left}, {"right", s.right}});
        slopes.push_back({rat(s.slope), s.length});
        total += s.length;
    }
    cx.checks["lengths_sum_to_span"] = L.is_zero() || total == L.span();
    return {{"operator", to_string(L)}, {"vertices", verts}, {"segments", segs}, {"slopes", slopes}};
}

json cmd_factor(Context& cx, const Parsed& p) {
    const SkewOperator L = as_operator(p);
    return cx.with_precision([&](const Rat& T) {
        const Filtration f = slope_filtration(L, T);
        json factors = json::array();
        for (const auto& x : f.factors) factors.push_back(to_string(x));
        const SkewOperator rebuilt = f.lead * (SkewOperator::phi_pow(f.shift) * f.normalized);
        cx.checks["product_residual"] = to_string(f.residual);
        cx.checks["product_residual_zero"] = f.residual.is_zero();
        cx.checks["residual_precision"] = f.residual_precision ? rat(*f.residual_precision) : json(nullptr);
        cx.checks["normalization_reproduces_input"] = agree(rebuilt, L);
        bool increasing = true;
        for (size_t k = 1; k < f.slopes.size(); ++k) increasing = increasing && f.slopes[k - 1] < f.slopes[k];
        cx.checks["slopes_strictly_increasing"] = increasing;
        return json{{"lead", to_string(f.lead)},
                    {"shift", f.shift},
                    {"normalized", to_string(f.normalized)},
                    {"factors", factors},
                    {"slopes", slopes_json(f.slopes)}};
    });
}

json cmd_classify(Context& cx, const Parsed& p) {
    return cx.with_precision([&](const Rat& T) {
        const std::vector<TypeMult> ts =
            p.kind == ParsedKind::Module ? formal_decompose(module_at(p, T), T) : formal_decompose(as_operator(p), T);
        const BundleInvariants b = bundle_invariants(ts);
        const long long dim = p.kind == ParsedKind::Module ? static_cast<long long>(p.module.dim())
                                                           : as_operator(p).span();
        cx.checks["rank_matches_dimension"] = b.rank == dim;
        return json{{"types", types_json(ts)}, {"rank", b.rank}, {"degree", b.degree}};
    });
}

json cmd_galois(Context& cx, const Parsed& p) {
    return cx.with_precision([&](const Rat& T) {
        const GroupDescriptor d = galois_group(module_at(p, T), T);
        long long dim = 0;
        for (const auto& t : d.types) dim += t.type.slope.denominator() * t.type.m * t.mult;
        cx.checks["types_cover_dimension"] = dim == static_cast<long long>(module_at(p, T).dim());
        return descriptor_json(d);
    });
}

json cmd_moduli(Context& cx, const Parsed& p) {
    return cx.with_precision([&](const Rat& T) {
        const ModuliPoint mp = moduli_point(module_at(p, T), T);
        json graded = json::array(), window = json::array(), coords = json::array();
        for (const auto& g : mp.graded) graded.push_back({{"slope", rat(g.slope)}, {"dim", g.dim}});
        for (const auto& w : mp.window) window.push_back({{"row", w.row}, {"col", w.col}, {"exp", rat(w.exp)}});
        for (const auto& c : mp.coords) coords.push_back(to_string(c));
        const ModuliPoint again = moduli_point(mp.normal_form, T);
        cx.checks["normal_form_is_fixed"] = again.coords == mp.coords;
        cx.checks["window_size_is_N"] = static_cast<long long>(mp.window.size()) == mp.N;
        return json{{"graded", graded},
                    {"sub_types", types_json(mp.sub_types)},
                    {"quotient_types", types_json(mp.quotient_types)},
                    {"N", mp.N},
                    {"dimension", moduli_dimension(mp.graded)},
                    {"split", mp.split},
                    {"window", window},
                    {"coords", coords},
                    {"normal_form", to_string(mp.normal_form.B)}};
    });
}

json cmd_cohomology(Context& cx, const Parsed& p) {
    const DiffModule M = module_at(p, cx.req.options.T);
    long long W = cx.req.options.B;
    for (int attempt = 0;; ++attempt) {
        try {
            const CohomologyReport r = cohomology(M, W);
            cx.checks["stable_against_window"] = W + 4;
            cx.checks["kernel_matches_h0"] = static_cast<long long>(r.kernel.size()) == r.h0;
            return json{{"h0", r.h0}, {"h1", r.h1}, {"euler", r.h0 - r.h1}, {"window", r.window}};
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::WindowTooSmall || !cx.req.options.enlarge || attempt == 3) throw;
            W += 4;
            cx.notices.push_back("window raised to B=" + std::to_string(W) + ": " + e.what());
        }
    }
}

json cmd_solve(Context& cx, const Parsed& p) {
    if (p.kind != ParsedKind::Equation) fail(ErrorKind::InvalidArgument, "solve needs an equation");
    return cx.with_precision([&](const Rat& T) {
        const PuiseuxSeries f = p.eq.rhs * solve_b(p.eq.factors, p.eq.mu, T);
        const PuiseuxSeries res = apply_b(p.eq.factors, f) - PuiseuxSeries::monomial(p.eq.rhs, p.eq.mu);
        cx.checks["residual"] = to_string(res);
        cx.checks["residual_zero"] = res.is_zero();
        return json{{"equation", format(p.eq)}, {"solution", to_string(f)}};
    });
}

json cmd_theta(Context& cx, const Parsed&) {
    const long long B = cx.req.options.B;
    const GlobalSeries th = theta(B);
    const GlobalSeries lhs = mul_monomial(phi_apply(th, 1), CoeffScalar(-1), 1);
    json coeffs = json::object();
    bool ok = true;
    for (long long n = -B; n <= B; ++n) {
        coeffs[std::to_string(n)] = to_string(th.at(n));
        if (n > -B) ok = ok && lhs.at(n) == th.at(n);
    }
    cx.checks["functional_equation"] = ok;
    cx.checks["overlap"] = json::array({-B + 1, B});
    return json{{"window", B}, {"coefficients", coeffs}};
}

json cmd_pv(Context& cx, const Parsed& p) {
    const DiffModule M = module_at(p, cx.req.options.T);
    const FundamentalMatrix F = fundamental_matrix(M);
    const PVMat R = fundamental_residual(M, F.U);
    bool zero = true;
    for (size_t i = 0; i < R.rows(); ++i)
        for (size_t j = 0; j < R.cols(); ++j) zero = zero && R(i, j).is_zero();
    cx.checks["residual"] = to_string(R);
    cx.checks["residual_zero"] = zero;
    return json{{"U", to_string(F.U)}, {"notes", F.notes}};
}

bool all_true(const json& checks) {
    for (const auto& [k, v] : checks.items())
        if (v.is_boolean() && !v.get<bool>()) return false;
    return true;
}

}  // namespace

Outcome run(const Request& r) {
    Outcome out;
    json& rep = out.report;
    rep["schema"] = kReportSchema;
    rep["command"] = r.command;
    rep["input"] = r.input;
    rep["options"] = {{"T", rat(r.options.T)}, {"B", r.options.B}, {"N", r.options.N}, {"M", r.options.M}};
    Context cx{r};
    try {
        if (r.options.T <= Rat(0) || r.options.B < 1 || r.options.N < 1 || r.options.M < 1)
            fail(ErrorKind::InvalidArgument, "options T, B, N, M must be positive");
        const auto& cs = commands();
        if (std::find(cs.begin(), cs.end(), r.command) == cs.end())
            fail(ErrorKind::InvalidArgument, "unknown command '" + r.command + "'");
        Parsed p;
        if (r.command != "theta") {
            p = parse(r.input, r.options.T);
            rep["parsed"] = {{"kind", to_string(p.kind)}, {"text", format(p)}};
            const auto [N, M] = field_of(p);
            if (r.options.N % N != 0)
                cx.notices.push_back("ramification raised to N=" + std::to_string(std::lcm(r.options.N, N)));
            if (r.options.M % M != 0)
                cx.notices.push_back("cyclotomic order raised to M=" + std::to_string(std::lcm(r.options.M, M)));
        }
        json res;
        if (r.command == "polygon") res = cmd_polygon(cx, p);
        else if (r.command == "factor") res = cmd_factor(cx, p);
        else if (r.command == "classify") res = cmd_classify(cx, p);
        else if (r.command == "galois") res = cmd_galois(cx, p);
        else if (r.command == "moduli") res = cmd_moduli(cx, p);
        else if (r.command == "cohomology") res = cmd_cohomology(cx, p);
        else if (r.command == "solve") res = cmd_solve(cx, p);
        else if (r.command == "theta") res = cmd_theta(cx, p);
        else res = cmd_pv(cx, p);
        rep["result"] = res;
        rep["checks"] = cx.checks;
        rep["verified"] = all_true(cx.checks);
        rep["status"] = "ok";
        out.exit_code = rep["verified"].get<bool>() ? 0 : 1;
    } catch (const SyntaxError& e) {
        rep["status"] = "error";
        rep["error"] = {{"kind", kind_name(e.kind())}, {"message", e.what()}, {"position", e.position()}};
        out.exit_code = exit_code(e.kind());
    } catch (const Error& e) {
        rep["status"] = "error";
        rep["error"] = {{"kind", kind_name(e.kind())}, {"message", e.what()}, {"position", nullptr}};
        out.exit_code = exit_code(e.kind());
    } catch (const std::exception& e) {
        rep["status"] = "error";
        rep["error"] = {{"kind", "Internal"}, {"message", e.what()}, {"position", nullptr}};
        out.exit_code = 1;
    }
    rep["notices"] = cx.notices;
    return out;
}

std::vector<Outcome> run_batch(const std::vector<Request>& rs, unsigned threads) {
    std::vector<Outcome> out(rs.size());
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (size_t k; (k = next++) < rs.size();) out[k] = run(rs[k]);
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(rs.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return out;
}

namespace {

void flatten(const json& v, const std::string& key, std::string& out) {
    if (v.is_object() && !v.empty()) {
        for (const auto& [k, x] : v.items()) flatten(x, key.empty() ? k : key + "." + k, out);
    } else if (v.is_string()) {
        out += key + ": " + v.get<std::string>() + "\n";
    } else {
        out += key + ": " + v.dump() + "\n";
    }
}

}  // namespace

std::string render_text(const json& report) {
    std::string out;
    for (const char* k : {"command", "input", "status"})
        if (report.contains(k)) flatten(report[k], k, out);
    for (const char* k : {"error", "result", "checks"})
        if (report.contains(k)) flatten(report[k], k, out);
    for (const auto& n : report.value("notices", json::array())) out += "notice: " + n.get<std::string>() + "\n";
    return out;
}

}  // namespace qd
