#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "hauptwerk/cm_side.hpp"
#include "hauptwerk/eisenstein.hpp"
#include "hauptwerk/product_id.hpp"
#include "hauptwerk/weilrep.hpp"

using namespace hauptwerk;
using Json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kMismatch = 1, kConfig = 2 };

struct Options {
    i64 level = 5, p = 3, d1 = -8, d2 = -11;
    i64 order = 8, bits = 256, value_bound = 0, n = 1, prec = 8, root = 0;
    std::string cusp = "0/1", group = "gamma1", formulas = "calibrated", D = "88", t_spec;
    std::string json_path, out_path;
    bool json = false;
};

Json series_json(const PuiseuxSeries& s) {
    Json c = Json::object();
    for (auto& [n, v] : s.coeffs()) c[std::to_string(n)] = v.str();
    return Json{{"hden", s.hden()}, {"prec", s.prec()}, {"coeffs", c}};
}

Json log_linear_json(const LogLinearValue& v) {
    Json t = Json::object();
    for (auto& [q, c] : v.terms) t[std::to_string(q)] = c.get_str();
    return t;
}

Json form_json(const BinaryQuadraticForm& Q) { return Json::array({Q.a, Q.b, Q.c}); }

std::string ball_str(const RealBall& b, int digits = 40) {
    std::ostringstream os;
    os << b.mid().str(digits) << " +/- " << b.rad_double();
    return os.str();
}

// Trial division of |n| by primes up to `limit`; the unfactored part is returned as cofactor.
std::pair<std::map<std::string, i64>, Integer> factor_integer(Integer n, i64 limit = 1000000) {
    std::map<std::string, i64> f;
    n = abs(n);
    for (i64 q = 2; q <= limit && n > 1; q += (q == 2 ? 1 : 2)) {
        if (!mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(q))) continue;
        i64 e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(q))) {
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(q));
            ++e;
        }
        f[std::to_string(q)] = e;
    }
    return {f, n};
}

// The unique integer inside exp(x), if the enclosure is narrow enough to single one out.
std::optional<Integer> integer_candidate(const RealBall& x) {
    RealBall e = x.exp();
    Mpfr lo = e.lower(), hi = e.upper();
    Integer a, b;
    mpfr_get_z(a.get_mpz_t(), lo.get(), MPFR_RNDU);
    mpfr_get_z(b.get_mpz_t(), hi.get(), MPFR_RNDD);
    if (a == b) return a;
    return std::nullopt;
}

FormulaSet parse_formulas(const std::string& s) {
    if (s == "printed") return FormulaSet::Printed;
    if (s == "calibrated") return FormulaSet::Calibrated;
    throw InvalidArgument("formulas must be printed or calibrated");
}

void check_bits(i64 bits) {
    if (bits < 64) throw InvalidArgument("bits must be at least 64");
}

void check_gz_level(i64 p) {
    if (p != 3 && p != 5 && p != 7 && p != 13) throw UnsupportedLevel("unsupported level " + std::to_string(p));
}

void check_level(i64 N) {
    if (!in_catalog(N)) throw UnsupportedLevel("unsupported level " + std::to_string(N));
}

// ---------------------------------------------------------------- commands

int cmd_verify_product(const Options& o, Json& r) {
    check_level(o.level);
    if (o.order < 2) throw InvalidArgument("order must be at least 2");
    auto rep = verify_product(o.level, o.order);
    r["level"] = o.level;
    r["order"] = o.order;
    r["coefficients_compared"] = rep.coefficients_compared;
    r["factors"] = rep.factors;
    r["verified"] = rep.verified;
    Json mm = Json::array();
    for (auto& m : rep.mismatches) mm.push_back({{"q1", m.e1}, {"q2", m.e2}, {"lhs", m.lhs.str()}, {"rhs", m.rhs.str()}});
    r["mismatches"] = mm;
    return rep.verified ? kOk : kMismatch;
}

int cmd_faber(const Options& o, Json& r) {
    check_level(o.level);
    if (o.n < 1) throw InvalidArgument("n must be positive");
    auto F = faber_check(o.level, o.n, std::max<i64>(o.order, o.n + 2));
    r["level"] = o.level;
    r["n"] = o.n;
    Json poly = Json::array();
    for (auto& c : F.poly) poly.push_back(c.str());
    r["polynomial"] = poly;
    r["normalized"] = F.normalized;
    return F.normalized ? kOk : kMismatch;
}

int cmd_weilrep(const Options& o, Json& r) {
    check_level(o.level);
    if (o.prec < 1) throw InvalidArgument("prec must be positive");
    auto rel = check_weil_relations(o.level);
    WeilFormSeries f = induce_fN(o.level, o.prec);
    r["level"] = o.level;
    r["prec"] = o.prec;
    r["relations"] = {{"S2_negation", rel.s2_negation}, {"S4_identity", rel.s4_identity}, {"ST3_equals_S2", rel.st3_equals_s2}};
    Json comps = Json::array();
    for (auto& [mu, s] : f.comp) comps.push_back({{"mu", {mu.first, mu.second}}, {"series", series_json(s)}});
    r["components"] = comps;
    return rel.ok() ? kOk : kMismatch;
}

int cmd_cusp_expand(const Options& o, Json& r) {
    check_level(o.level);
    auto slash = o.cusp.find('/');
    i64 a, c;
    if (o.cusp == "oo" || o.cusp == "inf" || o.cusp == "Infinity") {
        a = 1;
        c = 0;
    } else if (slash == std::string::npos) {
        throw InvalidArgument("cusp must be a/c or oo");
    } else {
        a = std::stoll(o.cusp.substr(0, slash));
        c = std::stoll(o.cusp.substr(slash + 1));
    }
    CuspGroup grp;
    if (o.group == "gamma0") grp = CuspGroup::Gamma0;
    else if (o.group == "gamma1") grp = CuspGroup::Gamma1;
    else throw InvalidArgument("group must be gamma0 or gamma1");
    CuspDatum s = make_cusp(o.level, a, c, grp);
    auto e = expand_at_cusp(hauptmodul(o.level), s, Rational(o.prec));
    r["level"] = o.level;
    r["cusp"] = s.label();
    r["group"] = o.group;
    r["width"] = s.width;
    r["htilde"] = s.htilde;
    r["regular"] = s.regular;
    r["eta_quotient"] = hauptmodul(o.level).str();
    r["series"] = series_json(e.series);
    return kOk;
}

int cmd_serre_check(const Options& o, Json& r) {
    check_level(o.level);
    r["level"] = o.level;
    Json res = Json::object();
    bool ok = true;
    for (i64 d : divisors(o.level)) {
        Rational v = serre_duality_residue(o.level, d);
        res[std::to_string(d)] = v.get_str();
        ok = ok && v == 0;
    }
    r["residues"] = res;
    r["vanishing"] = ok;
    return ok ? kOk : kMismatch;
}

Json lhs_json(const LhsResult& L) {
    Json j;
    const PairSet& S = L.pairs;
    j["classes1"] = S.classes1.size();
    j["classes2"] = S.classes2.size();
    j["pair_count"] = S.matched_count();
    j["full_product"] = S.full_product();
    j["value_bound"] = S.value_bound;
    Json pairs = Json::array();
    for (auto& t : L.terms)
        pairs.push_back({{"form1", form_json(t.q1)}, {"form2", form_json(t.q2)}, {"log_abs", ball_str(t.log_abs)}});
    j["pairs"] = pairs;
    j["sum"] = ball_str(L.sum);
    if (auto n = integer_candidate(L.sum)) {
        auto [f, rest] = factor_integer(*n);
        j["integer"] = n->get_str();
        j["factorization"] = f;
        if (rest != 1) j["cofactor"] = rest.get_str();
    } else {
        j["integer"] = nullptr;
    }
    return j;
}

int cmd_gz_lhs(const Options& o, Json& r) {
    check_gz_level(o.p);
    check_bits(o.bits);
    LhsResult L = lhs_sum_detail(o.p, o.d1, o.d2, static_cast<mpfr_prec_t>(o.bits), o.value_bound);
    r["p"] = o.p;
    r["d1"] = o.d1;
    r["d2"] = o.d2;
    r["bits"] = o.bits;
    r.update(lhs_json(L));
    return kOk;
}

Json rhs_json(const RhsResult& R, mpfr_prec_t bits) {
    Json j;
    j["case"] = R.rc.id;
    j["formulas"] = to_string(R.formulas);
    j["bridged"] = case_bridged(R.rc.id, R.formulas);
    j["pair_count"] = R.pair_count;
    j["class_numbers"] = {R.h1, R.h2};
    j["unit_counts"] = {R.w1, R.w2};
    j["degree"] = R.degree.get_str();
    j["a_terms"] = log_linear_json(R.a_sum);
    j["a0_terms"] = log_linear_json(R.a0_sum);
    j["terms"] = log_linear_json(R.value);
    j["numeric"] = ball_str(R.value.eval(bits));
    return j;
}

int cmd_gz_rhs(const Options& o, Json& r) {
    check_gz_level(o.p);
    check_bits(o.bits);
    RhsResult R = rhs_detail(o.p, o.d1, o.d2, parse_formulas(o.formulas), -1, static_cast<int>(o.root));
    r["p"] = o.p;
    r["d1"] = o.d1;
    r["d2"] = o.d2;
    r["bits"] = o.bits;
    r.update(rhs_json(R, static_cast<mpfr_prec_t>(o.bits)));
    return kOk;
}

int cmd_gz(const Options& o, Json& r) {
    check_gz_level(o.p);
    check_bits(o.bits);
    auto bits = static_cast<mpfr_prec_t>(o.bits);
    LhsResult L = lhs_sum_detail(o.p, o.d1, o.d2, bits, o.value_bound);
    RhsResult R = rhs_detail(o.p, o.d1, o.d2, parse_formulas(o.formulas), static_cast<i64>(L.pairs.matched_count()),
                             static_cast<int>(o.root));
    RealBall rhs = R.value.eval(bits);
    bool agree = L.sum.overlaps(rhs);
    r["p"] = o.p;
    r["d1"] = o.d1;
    r["d2"] = o.d2;
    r["bits"] = o.bits;
    r["lhs"] = lhs_json(L);
    r["rhs"] = rhs_json(R, bits);
    r["difference"] = ball_str(L.sum - rhs, 10);
    r["agreement"] = agree;
    Json fac = Json::object();
    bool integral = true;
    for (auto& [q, c] : R.value.terms) {
        if (c.get_den() != 1 || c < 0) integral = false;
        fac[std::to_string(q)] = c.get_str();
    }
    r["factorization"] = integral ? fac : Json(nullptr);
    return agree ? kOk : kMismatch;
}

int cmd_gz_classical(const Options& o, Json& r) {
    check_bits(o.bits);
    check_disc_pair(o.d1, o.d2);
    auto bits = static_cast<mpfr_prec_t>(o.bits);
    LogLinearValue v = classical_gz_rhs(o.d1, o.d2);
    // (8 / (w1 w2)) sum over class pairs of log |j(tau1) - j(tau2)|
    std::vector<ComplexBall> j1, j2;
    for (auto& f : reduced_forms(o.d1)) j1.push_back(eval_j(cm_point({f.a, f.b, f.c}).tau(bits + 32), bits));
    for (auto& f : reduced_forms(o.d2)) j2.push_back(eval_j(cm_point({f.a, f.b, f.c}).tau(bits + 32), bits));
    RealBall direct = RealBall::exact(0, bits);
    for (auto& a : j1)
        for (auto& b : j2) direct = direct + (a - b).log_abs();
    direct = RealBall::from_mpq(rat(8, unit_count(o.d1) * unit_count(o.d2)), bits) * direct;
    RealBall rhs = v.eval(bits);
    bool agree = rhs.overlaps(direct);
    r["d1"] = o.d1;
    r["d2"] = o.d2;
    r["bits"] = o.bits;
    r["terms"] = log_linear_json(v);
    r["numeric"] = ball_str(rhs);
    r["singular_moduli"] = ball_str(direct);
    r["agreement"] = agree;
    return agree ? kOk : kMismatch;
}

int cmd_conjecture_probe(const Options& o, Json& r) {
    check_gz_level(o.p);
    PairSet S = s_pairs(o.p, o.d1, o.d2, o.value_bound);
    r["p"] = o.p;
    r["d1"] = o.d1;
    r["d2"] = o.d2;
    r["value_bound"] = S.value_bound;
    r["classes1"] = S.classes1.size();
    r["classes2"] = S.classes2.size();
    Json pairs = Json::array();
    for (auto& cp : S.pairs) {
        Json e{{"form1", form_json(S.classes1[cp.i1].representative)}, {"form2", form_json(S.classes2[cp.i2].representative)}};
        if (cp.matched) {
            e["status"] = "member";
            e["witnesses"] = {cp.witness1, cp.witness2};
        } else if (cp.excluded) {
            e["status"] = "excluded";
        } else {
            e["status"] = "undecided below bound";
        }
        pairs.push_back(e);
    }
    r["pairs"] = pairs;
    r["pair_count"] = S.matched_count();
    r["exhaustive"] = S.exhaustive;
    r["full_product"] = S.full_product();
    return kOk;
}

int cmd_quadfield(const Options& o, Json& r) {
    i64 D = std::stoll(o.D);
    if (D <= 1 || !is_fundamental_discriminant(D)) throw InvalidArgument("D must be a positive fundamental discriminant");
    if (o.t_spec.empty()) throw InvalidArgument("--factor-norm needs u,v for t = u + v sqrt(D)");
    auto comma = o.t_spec.find(',');
    if (comma == std::string::npos) throw InvalidArgument("t-spec must be u,v");
    Rational u(o.t_spec.substr(0, comma)), v(o.t_spec.substr(comma + 1));
    u.canonicalize();
    v.canonicalize();
    RealQuadElement t(D, u, v);
    r["D"] = D;
    r["t"] = t.str();
    r["norm"] = t.norm().get_str();
    r["integral"] = t.is_integral();
    if (t.is_integral() && !t.is_zero()) {
        Json primes = Json::array();
        for (auto& [P, e] : prime_support(t)) {
            Json pj{{"prime", P.str()}, {"kind", to_string(P.kind)}, {"valuation", e}};
            if (o.d1 * o.d2 == D) pj["in_E"] = to_string(split_in_E(P, o.d1, o.d2));
            primes.push_back(pj);
        }
        r["primes"] = primes;
        if (o.d1 * o.d2 == D) {
            Json diff = Json::array();
            for (auto& P : diff_set(t, o.d1, o.d2)) diff.push_back(P.str());
            r["diff_set"] = diff;
        }
    }
    return kOk;
}

// ---------------------------------------------------------------- output

void print_human(const Json& r, std::ostream& os) {
    for (auto& [k, v] : r.items()) {
        if (k == "schema") continue;
        os << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hauptmodul product expansions and CM value checks"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI/TOML file with option defaults");
    Options o;
    std::string ran;

    auto add_output = [&](CLI::App* sc) {
        sc->add_option("--json", o.json_path, "emit JSON (to FILE if given)")->expected(0, 1);
        sc->add_option("--out,--emit", o.out_path, "write the JSON report to FILE");
    };
    auto add_level = [&](CLI::App* sc) { sc->add_option("--level,-N", o.level, "level N")->required(); };
    auto add_gz = [&](CLI::App* sc) {
        sc->add_option("--p", o.p, "prime level")->required();
        sc->add_option("--d1", o.d1, "first discriminant")->required()->allow_extra_args(false);
        sc->add_option("--d2", o.d2, "second discriminant")->required();
        sc->add_option("--bits", o.bits, "working precision");
        sc->add_option("--value-bound", o.value_bound, "initial value bound for the pair set (default 20 max|d|)");
    };

    std::map<std::string, std::function<int(const Options&, Json&)>> cmds;
    auto sub = [&](const std::string& name, const std::string& help, std::function<int(const Options&, Json&)> fn) {
        CLI::App* sc = app.add_subcommand(name, help);
        sc->callback([&ran, name] { ran = name; });
        cmds[name] = std::move(fn);
        add_output(sc);
        return sc;
    };

    auto* vp = sub("verify-product", "check the product identity coefficientwise", cmd_verify_product);
    add_level(vp);
    vp->add_option("--order,-K", o.order, "window (K,K)");
    auto* fb = sub("faber", "Faber polynomial from the product expansion", cmd_faber);
    add_level(fb);
    fb->add_option("--n", o.n, "degree")->required();
    fb->add_option("--order", o.order, "series precision");
    auto* wr = sub("weilrep", "vector-valued input form and Weil relations", cmd_weilrep);
    add_level(wr);
    wr->add_option("--prec", o.prec, "q-precision");
    auto* ce = sub("cusp-expand", "expansion of the Hauptmodul at a cusp", cmd_cusp_expand);
    add_level(ce);
    ce->add_option("--cusp", o.cusp, "cusp a/c or oo");
    ce->add_option("--prec", o.prec, "q-precision");
    ce->add_option("--group", o.group, "gamma0 or gamma1");
    auto* sd = sub("serre-check", "Serre duality residues for every d | N", cmd_serre_check);
    add_level(sd);
    add_gz(sub("gz-lhs", "sum of log|pi_p(tau1) - pi_p(tau2)| over the pair set", cmd_gz_lhs));
    auto* rhs = sub("gz-rhs", "exact right-hand side of the CM value formula", cmd_gz_rhs);
    add_gz(rhs);
    rhs->add_option("--formulas", o.formulas, "printed or calibrated");
    rhs->add_option("--root", o.root, "index of the square root of D mod p");
    auto* gz = sub("gz", "both sides of the CM value formula", cmd_gz);
    add_gz(gz);
    gz->add_option("--formulas", o.formulas, "printed or calibrated");
    gz->add_option("--root", o.root, "index of the square root of D mod p");
    auto* gc = sub("gz-classical", "classical singular-moduli factorization", cmd_gz_classical);
    gc->add_option("--d1", o.d1, "first discriminant")->required();
    gc->add_option("--d2", o.d2, "second discriminant")->required();
    gc->add_option("--bits", o.bits, "working precision");
    add_gz(sub("conjecture-probe", "pair-set membership with witnesses", cmd_conjecture_probe));
    auto* qf = sub("quadfield", "prime decomposition of an element of a real quadratic field", cmd_quadfield);
    qf->add_option("--D", o.D, "discriminant of F")->required();
    qf->add_option("--factor-norm", o.t_spec, "t = u + v sqrt(D) given as u,v")->required();
    qf->add_option("--d1", o.d1, "first imaginary discriminant (optional, for E/F)");
    qf->add_option("--d2", o.d2, "second imaginary discriminant (optional, for E/F)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }
    for (auto* sc : app.get_subcommands())
        if (sc->count("--json") > 0) o.json = true;

    Json report;
    report["schema"] = "1";
    report["command"] = ran;
    int rc;
    try {
        rc = cmds.at(ran)(o, report);
    } catch (const UnsupportedLevel& e) {
        std::cerr << "error: unsupported level (" << e.what() << ")\n";
        return kConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: invalid argument (" << e.what() << ")\n";
        return kConfig;
    }
    report["status"] = rc == kOk ? "ok" : "mismatch";

    std::string text = report.dump(2) + "\n";
    if (!o.out_path.empty()) {
        std::ofstream f(o.out_path);
        if (!f) {
            std::cerr << "error: cannot write " << o.out_path << "\n";
            return kConfig;
        }
        f << text;
    }
    if (o.json && !o.json_path.empty()) {
        std::ofstream f(o.json_path);
        if (!f) {
            std::cerr << "error: cannot write " << o.json_path << "\n";
            return kConfig;
        }
        f << text;
    } else if (o.json) {
        std::cout << text;
    }
    if (!o.json || !o.json_path.empty()) print_human(report, std::cout);
    return rc;
}
