// mirrorcount: point counts of the Dwork family and its mirror over small
// finite fields, by direct enumeration and by the Gauss-sum formulas, with
// theorem verifiers and zeta-quotient reports.
//
// Exit codes: 0 all checks pass, 1 verification failure (witness on stdout),
// 2 usage/configuration error, 3 enumeration budget exceeded.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "mirrorcount/verify.hpp"

using namespace mc;

namespace {

struct CommonOpts {
    u64 p = 0;
    u32 n = 2, m = 1;
    std::string lambda = "zero";
    i64 psi = -1;
    u32 kmax = 1, order = 8;
    std::string method = "both";
    std::string out = "json";
    std::string cache_dir;
    u64 budget = 1'000'000'000;
    int precision = 0;
    bool do_verify_cache = false;
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_field = true) {
    if (needs_field) {
        cmd->add_option("--p", o.p, "field characteristic (prime)")->required();
        cmd->add_option("--m", o.m, "extension degree of the base field");
    }
    cmd->add_option("--out", o.out, "output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--cache-dir", o.cache_dir, "count/table cache directory");
    cmd->add_option("--budget", o.budget, "enumeration budget (loop iterations)");
    cmd->add_option("--precision", o.precision, "force MPFR mantissa bits (>106)");
    cmd->add_flag("--verify-cache", o.do_verify_cache, "recompute cache hits and compare");
    cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
}

void configure_engine(Engine& eng, const CommonOpts& o) {
    iteration_budget() = o.budget;
    thread_limit() = o.threads;
    eng.forced_precision = o.precision;
    eng.verify_cache = o.do_verify_cache;
    std::string dir = o.cache_dir;
    if (dir.empty())
        if (const char* env = std::getenv("MIRRORCOUNT_CACHE_DIR")) dir = env;
    if (!dir.empty()) eng.open_cache(dir);
}

ojson wrap(const std::string& command, ojson params, ojson results) {
    ojson j;
    j["command"] = command;
    j["params"] = std::move(params);
    j["results"] = std::move(results);
    j["engine_version"] = kEngineVersion;
    return j;
}

void emit(const ojson& j) { std::cout << j.dump(2) << "\n"; }

void emit_cases_csv(const std::vector<VerificationReport>& reps) {
    std::cout << "theorem,case,status\n";
    for (auto& r : reps)
        for (auto& c : r.cases) std::cout << r.theorem << ",\"" << c.key << "\"," << c.status << "\n";
}

int report_exit(const std::vector<VerificationReport>& reps) {
    for (auto& r : reps)
        if (!r.all_ok()) return 1;
    return 0;
}

std::string csv_count_header() {
    return "p,m,n,lambda,method,count_X,count_Nstar,count_Y,err_budget_used";
}

std::string csv_count_row(const CountRecord& r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", r.err_budget_used);
    return std::to_string(r.p) + "," + std::to_string(r.m) + "," + std::to_string(r.n) + "," +
           r.lambda_key + "," + r.method + "," + r.count_X.get_str() + "," +
           r.count_Nstar.get_str() + "," + r.count_Y.get_str() + "," + buf;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mirrorcount: Dwork-family point counts, mirror counts, and zeta quotients"};
    app.require_subcommand(1);

    CommonOpts o;
    int rc = 0;

    auto* cmd_field = app.add_subcommand("field-info", "describe the canonical field F_{p^m}");
    add_common(cmd_field, o);

    auto* cmd_count = app.add_subcommand("count", "count points of X, N*, Y for one instance");
    add_common(cmd_count, o);
    cmd_count->add_option("--n", o.n, "dimension parameter")->required();
    cmd_count->add_option("--lambda", o.lambda, "lambda as discrete-log index or 'zero'");
    cmd_count->add_option("--psi", o.psi, "psi as discrete-log index (lambda = -(n+1)psi)");
    cmd_count->add_option("--method", o.method)->check(CLI::IsMember({"direct", "formula", "both"}));

    auto* cmd_eq = app.add_subcommand("verify-equal", "check #X = #Y when gcd(n+1, q^k-1) = 1");
    add_common(cmd_eq, o);
    cmd_eq->add_option("--n", o.n)->required();
    cmd_eq->add_option("--kmax", o.kmax, "largest extension degree k");
    cmd_eq->add_option("--lambda", o.lambda, "restrict to one lambda (default: all)");

    auto* cmd_cong = app.add_subcommand("verify-cong", "check the congruence theorem");
    add_common(cmd_cong, o);
    cmd_cong->add_option("--n", o.n)->required();

    auto* cmd_crt = app.add_subcommand("verify-crt", "check #X = #Y mod l*q^k for psi^{n+1} != 1");
    add_common(cmd_crt, o);
    cmd_crt->add_option("--n", o.n)->required();
    cmd_crt->add_option("--kmax", o.kmax);

    auto* cmd_quot = app.add_subcommand("quotient", "signed zeta quotient structure report");
    add_common(cmd_quot, o);
    cmd_quot->add_option("--n", o.n)->required();
    cmd_quot->add_option("--lambda", o.lambda);
    cmd_quot->add_option("--order", o.order, "truncation order K");

    std::string coeffs_arg;
    auto* cmd_factor = app.add_subcommand("factor", "factor a polynomial in 1 + T Z[T]");
    add_common(cmd_factor, o, false);
    cmd_factor->add_option("coeffs", coeffs_arg,
                           "comma-separated integer coefficients, constant first")
        ->required();

    GridSpec grid;
    auto* cmd_all = app.add_subcommand("verify-all", "run the default verification grid");
    add_common(cmd_all, o, false);
    cmd_all->add_option("--qmax", grid.qmax, "largest base prime power");
    cmd_all->add_option("--ext-bound", grid.ext_bound, "largest extension cardinality q^k");
    cmd_all->add_option("--kmax", o.kmax, "unused cap kept for interface stability");

    CLI11_PARSE(app, argc, argv);

    try {
        Engine eng;
        configure_engine(eng, o);

        if (cmd_field->parsed()) {
            auto F = eng.field(o.p, o.m);
            ojson r;
            r["p"] = F->p;
            r["m"] = F->m;
            r["q"] = F->q;
            r["modulus"] = F->m >= 2 ? ojson(F->modulus) : ojson(std::vector<u32>{});
            r["generator"] = F->generator;
            r["generator_order"] = F->element_order(F->generator);
            if (o.out == "csv") {
                std::cout << "p,m,q,generator,generator_order\n"
                          << F->p << "," << F->m << "," << F->q << "," << F->generator << ","
                          << F->element_order(F->generator) << "\n";
            } else {
                emit(wrap("field-info", {{"p", o.p}, {"m", o.m}}, ojson::array({r})));
            }
        } else if (cmd_count->parsed()) {
            auto F = eng.field(o.p, o.m);
            fe lam;
            if (o.psi >= 0)
                lam = DworkInstance::from_psi(o.n, F, F->exp_of((u64)o.psi)).lambda;
            else
                lam = lambda_from_key(*F, o.lambda);
            std::vector<CountRecord> recs;
            if (o.method == "direct" || o.method == "both")
                recs.push_back(eng.counts_direct(o.n, F, lam));
            if (o.method == "formula" || o.method == "both")
                recs.push_back(eng.counts_formula(o.n, F, lam));
            bool mismatch = recs.size() == 2 && !(recs[0].count_X == recs[1].count_X &&
                                                  recs[0].count_Nstar == recs[1].count_Nstar &&
                                                  recs[0].count_Y == recs[1].count_Y);
            if (o.out == "csv") {
                std::cout << csv_count_header() << "\n";
                for (auto& r : recs) std::cout << csv_count_row(r) << "\n";
            } else {
                ojson rs = ojson::array();
                for (auto& r : recs) rs.push_back(count_record_to_json(r));
                ojson j = wrap("count",
                               {{"n", o.n}, {"p", o.p}, {"m", o.m},
                                {"lambda", lambda_key_of(*F, lam)}, {"method", o.method}},
                               rs);
                if (mismatch) j["mismatch"] = true;
                emit(j);
            }
            rc = mismatch ? 1 : 0;
        } else if (cmd_eq->parsed()) {
            std::optional<std::string> lam;
            if (cmd_eq->count("--lambda")) lam = o.lambda;
            auto rep = verify_equal(eng, o.n, o.p, o.m, o.kmax, lam);
            if (o.out == "csv")
                emit_cases_csv({rep});
            else
                emit(wrap("verify-equal", rep.grid, ojson::array({rep.to_json()})));
            rc = report_exit({rep});
        } else if (cmd_cong->parsed()) {
            auto reps = verify_cong(eng, o.n, o.p, o.m);
            if (o.out == "csv") {
                emit_cases_csv(reps);
            } else {
                ojson rs = ojson::array();
                for (auto& r : reps) rs.push_back(r.to_json());
                emit(wrap("verify-cong", reps[0].grid, rs));
            }
            rc = report_exit(reps);
        } else if (cmd_crt->parsed()) {
            auto rep = verify_crt(eng, o.n, o.p, o.m, o.kmax);
            if (o.out == "csv")
                emit_cases_csv({rep});
            else
                emit(wrap("verify-crt", rep.grid, ojson::array({rep.to_json()})));
            rc = report_exit({rep});
        } else if (cmd_quot->parsed()) {
            auto rep = run_quotient(eng, o.n, o.p, o.m, o.lambda, o.order);
            emit(wrap("quotient",
                      {{"n", o.n}, {"p", o.p}, {"m", o.m}, {"lambda", o.lambda},
                       {"order", o.order}},
                      ojson::array({quotient_report_to_json(rep)})));
            bool ok = rep.integer_coeffs && rep.support_in_kZ && rep.kth_root_ok &&
                      rep.detection != "violation";
            rc = ok ? 0 : 1;
        } else if (cmd_factor->parsed()) {
            std::vector<mpz_class> cs;
            std::string tok;
            for (char ch : coeffs_arg + ",") {
                if (ch == ',') {
                    if (!tok.empty()) cs.push_back(mpz_class(tok));
                    tok.clear();
                } else if (!isspace((unsigned char)ch)) {
                    tok += ch;
                }
            }
            auto P = IntPolynomial::from_coeffs(std::move(cs));
            auto fs = factor_over_Z(P);
            ojson rs = ojson::array();
            for (auto& [f, mult] : fs) {
                ojson e;
                ojson fc = ojson::array();
                for (auto& c : f.c) fc.push_back(c.get_str());
                e["factor"] = fc;
                e["multiplicity"] = mult;
                rs.push_back(e);
            }
            emit(wrap("factor", {{"coeffs", coeffs_arg}}, rs));
        } else if (cmd_all->parsed()) {
            ojson j = verify_all(eng, grid);
            emit(j);
            rc = j["all_ok"].get<bool>() ? 0 : 1;
        }
        eng.cache.flush();
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const budget_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const math_error& e) {
        ojson w;
        w["error"] = e.what();
        std::cout << w.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
