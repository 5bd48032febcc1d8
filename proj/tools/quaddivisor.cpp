// quaddivisor: exact divisor sums over quadratic polynomial values vs the
// circle-method main term.  See README.md for the config format.

#include "quaddivisor/arith.hpp"
#include "quaddivisor/compare.hpp"
#include "quaddivisor/config.hpp"
#include "quaddivisor/exact_oracle.hpp"
#include "quaddivisor/local_counts.hpp"
#include "quaddivisor/main_term.hpp"
#include "quaddivisor/phi_kernel.hpp"
#include "quaddivisor/singular_series.hpp"
#include "quaddivisor/verify.hpp"
#include "quaddivisor/zeta_laurent.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

qd::RunConfig default_config() {
    qd::RunConfig cfg;
    cfg.Q = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    cfg.L = {0, 0, 0};
    cfg.N = 0;
    cfg.box_lo = {qd::Rat(0), qd::Rat(0), qd::Rat(0)};
    cfg.box_hi = {qd::Rat(1), qd::Rat(1), qd::Rat(1)};
    return cfg;
}

qd::RunConfig load_or_default(const std::string& path) {
    if (path.empty()) return default_config();
    return qd::RunConfig::load(path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"divisor sums over quadratic polynomials: exact sums, singular series, main terms"};
    app.set_help_flag("--help", "print help");  // frees -h for the progression residue flag
    app.require_subcommand(1);
    app.fallthrough(true);  // allow --config after the subcommand name

    std::string config_path;
    app.add_option("--config", config_path, "run-config JSON (defaults to x1^2+x2^2+x3^2 on [0,1]^3)");

    // sieve
    auto* sieve = app.add_subcommand("sieve", "tau_k table by Dirichlet convolution sieve");
    int sieve_k = 2;
    std::int64_t sieve_limit = 100;
    std::string sieve_out;
    sieve->add_option("--k", sieve_k, "divisor order")->required();
    sieve->add_option("--limit", sieve_limit, "largest argument")->required();
    sieve->add_option("--out", sieve_out, "CSV output path (default stdout)");

    // local
    auto* local = app.add_subcommand("local", "local densities rho_F(p^l) and S_F(p^l)");
    std::int64_t local_p = 2;
    int local_lmax = 3;
    local->add_option("--p", local_p, "prime")->required();
    local->add_option("--lmax", local_lmax, "largest exponent");

    // zeta
    auto* zeta = app.add_subcommand("zeta", "Laurent coefficients of zeta(s)^k at s=1");
    int zeta_k = 2, zeta_order = 4;
    zeta->add_option("--k", zeta_k, "power")->required();
    zeta->add_option("--order", zeta_order, "truncation order");

    // phi
    auto* phi = app.add_subcommand("phi", "Phi_k(q,s) jet at s=1");
    int phi_k = 2, phi_order = 4;
    std::int64_t phi_q = 1;
    std::string phi_mode = "closed";
    phi->add_option("--k", phi_k)->required();
    phi->add_option("--q", phi_q)->required();
    phi->add_option("--order", phi_order);
    phi->add_option("--mode", phi_mode, "closed|definition");

    // beta
    auto* beta = app.add_subcommand("beta", "beta_{k,r}(q) residue coefficients");
    int beta_k = 2;
    std::int64_t beta_q = 1;
    beta->add_option("--k", beta_k)->required();
    beta->add_option("--q", beta_q)->required();

    // ap
    auto* ap = app.add_subcommand("ap", "divisor sum in progression: exact A_k vs main term M_k");
    int ap_k = 2;
    double ap_x = 1e6;
    std::int64_t ap_h = 1, ap_q = 1;
    ap->add_option("--k", ap_k)->required();
    ap->add_option("--x", ap_x)->required();
    ap->add_option("--h", ap_h)->required();
    ap->add_option("--q", ap_q)->required();

    // series
    auto* series = app.add_subcommand("series", "singular series jet and theorem coefficients");
    int series_k = 2, series_lmax = 6, series_order = -1;
    std::int64_t series_pmax = 1000;
    series->add_option("--k", series_k)->required();
    series->add_option("--pmax", series_pmax);
    series->add_option("--lmax", series_lmax);
    series->add_option("--order", series_order);

    // integral
    auto* integral = app.add_subcommand("integral", "box integral of (log F)^r");
    int int_r = 0;
    double int_tol = 1e-8;
    std::string int_X = "1";
    integral->add_option("--r", int_r)->required();
    integral->add_option("--tol", int_tol);
    integral->add_option("--X", int_X, "dilation (rational)");

    // exact
    auto* exact = app.add_subcommand("exact", "exact divisor sum over the dilated box");
    int exact_k = 2;
    std::string exact_X = "2";
    exact->add_option("--k", exact_k)->required();
    exact->add_option("--X", exact_X)->required();

    // ap-exact
    auto* apx = app.add_subcommand("ap-exact", "exact divisor sum in a progression");
    int apx_k = 2;
    double apx_x = 1e4;
    std::int64_t apx_h = 1, apx_q = 1;
    apx->add_option("--k", apx_k)->required();
    apx->add_option("--x", apx_x)->required();
    apx->add_option("--h", apx_h)->required();
    apx->add_option("--q", apx_q)->required();

    // predict
    auto* predict = app.add_subcommand("predict", "main-term prediction at one X");
    int pred_k = 2;
    std::string pred_X = "2";
    predict->add_option("--k", pred_k)->required();
    predict->add_option("--X", pred_X)->required();

    // compare
    auto* compare = app.add_subcommand("compare", "exact vs prediction over the config ladder");

    // verify
    auto* verify = app.add_subcommand("verify", "identity/invariant suite");
    std::string verify_level = "quick";
    unsigned verify_threads = 0;
    verify->add_option("--level", verify_level, "quick|full");
    verify->add_option("--threads", verify_threads);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sieve) {
            qd::DivisorTable t = qd::sieve_tau_k(sieve_k, sieve_limit);
            std::ostream* os = &std::cout;
            std::ofstream f;
            if (!sieve_out.empty()) {
                f.open(sieve_out);
                os = &f;
            }
            *os << "m,tau_" << sieve_k << "\n";
            for (std::int64_t m = 0; m <= sieve_limit; ++m)
                *os << m << "," << t.values[static_cast<std::size_t>(m)] << "\n";
        } else if (*local) {
            qd::RunConfig cfg = load_or_default(config_path);
            qd::QuadraticPolynomial F = cfg.polynomial();
            qd::LocalCounter counter(F);
            std::cout << "q,count,rho,S_F\n";
            for (int l = 0; l <= local_lmax; ++l) {
                qd::LocalDensity d = counter.rho(local_p, l);
                std::cout << d.q.str() << "," << d.count.str() << ","
                          << qd::rational_string(d.rho) << ",";
                if (l >= 1) std::cout << qd::rational_string(counter.s_f_prime_power(local_p, l));
                else std::cout << "1";
                std::cout << "\n";
            }
        } else if (*zeta) {
            qd::LaurentBlock b = qd::zeta_pow_laurent(zeta_k, zeta_order);
            std::cout << "j,coefficient\n";
            for (int j = -b.pole_order; j <= b.top_order(); ++j)
                std::cout << j << "," << qd::format_double(b.coeff(j)) << "\n";
        } else if (*phi) {
            qd::PhiMode mode = phi_mode == "definition" ? qd::PhiMode::definition
                                                        : qd::PhiMode::closed_form;
            qd::SeriesJet j = qd::phi_jet(phi_k, qd::Int(phi_q), phi_order, mode);
            std::cout << "t,coefficient_re,coefficient_im\n";
            for (int t = 0; t <= j.order(); ++t)
                std::cout << t << "," << qd::format_double(j[t].real()) << ","
                          << qd::format_double(j[t].imag()) << "\n";
        } else if (*beta) {
            std::cout << "r,beta\n";
            for (int r = 0; r < beta_k; ++r)
                std::cout << r << ","
                          << qd::format_double(qd::beta_coefficient(beta_k, r, qd::Int(beta_q)).value)
                          << "\n";
        } else if (*ap) {
            double m = qd::ap_main_term(ap_k, ap_x, qd::Int(ap_h), qd::Int(ap_q));
            qd::Int a = qd::ap_exact_sum(ap_k, ap_x, qd::Int(ap_h), qd::Int(ap_q));
            double rel = (qd::to_double(a) - m) / m;
            std::cout << "A_k=" << a.str() << " M_k=" << qd::format_double(m)
                      << " rel_diff=" << qd::format_double(rel) << "\n";
        } else if (*series) {
            qd::RunConfig cfg = load_or_default(config_path);
            qd::QuadraticPolynomial F = cfg.polynomial();
            int order = series_order >= 0 ? series_order : qd::default_jet_order(series_k);
            qd::SingularSeriesValue L =
                qd::singular_series_jet(F, series_k, order, series_pmax, series_lmax, cfg.threads);
            qd::TheoremCoefficients C = qd::theorem_coefficients_from(L, series_k);
            nlohmann::json j;
            j["k"] = series_k;
            j["pmax"] = series_pmax;
            j["lmax"] = series_lmax;
            j["tail_estimate"] = qd::format_double(L.tail_estimate);
            nlohmann::json jet = nlohmann::json::array();
            for (int t = 0; t <= L.jet.order(); ++t) jet.push_back(qd::format_double(L.jet[t].real()));
            j["jet"] = jet;
            nlohmann::json coeff = nlohmann::json::array();
            for (double c : C.C) coeff.push_back(qd::format_double(c));
            j["C"] = coeff;
            std::cout << j.dump(2) << "\n";
        } else if (*integral) {
            qd::RunConfig cfg = load_or_default(config_path);
            qd::QuadraticPolynomial F = cfg.polynomial();
            qd::BoxRegion box = cfg.box_at(qd::parse_rational(nlohmann::json(int_X)));
            qd::BoxIntegral I = qd::log_power_integral(F, box, int_r, int_tol);
            std::cout << "value=" << qd::format_double(I.value)
                      << " abs_error_estimate=" << qd::format_double(I.abs_error_estimate)
                      << " cells=" << I.cells_used << " tol_ok=" << I.tolerance_reached << "\n";
        } else if (*exact) {
            qd::RunConfig cfg = load_or_default(config_path);
            qd::QuadraticPolynomial F = cfg.polynomial();
            qd::BoxRegion box = cfg.box_at(qd::parse_rational(nlohmann::json(exact_X)));
            qd::ExactSumResult r = qd::exact_sigma(F, exact_k, box);
            std::cout << "total=" << r.total.str() << " lattice_count=" << r.lattice_count.str()
                      << " fmax=" << r.fmax_used << "\n";
        } else if (*apx) {
            qd::Int a = qd::ap_exact_sum(apx_k, apx_x, qd::Int(apx_h), qd::Int(apx_q));
            std::cout << a.str() << "\n";
        } else if (*predict) {
            qd::RunConfig cfg = load_or_default(config_path);
            qd::QuadraticPolynomial F = cfg.polynomial();
            qd::TheoremCoefficients C =
                qd::theorem_coefficients(F, pred_k, cfg.pmax, cfg.lmax, cfg.jet_order, cfg.threads);
            qd::BoxRegion box = cfg.box_at(qd::parse_rational(nlohmann::json(pred_X)));
            qd::SigmaPrediction pr = qd::predict_sigma(F, pred_k, box, C, cfg.quad_tol);
            for (int r = 0; r < pred_k; ++r)
                std::cout << "piece_r" << r << "=" << qd::format_double(pr.pieces[static_cast<std::size_t>(r)])
                          << " (C=" << qd::format_double(C.C[static_cast<std::size_t>(r)]) << ")\n";
            std::cout << "total=" << qd::format_double(pr.total)
                      << " sing_tail=" << qd::format_double(C.tail_estimate) << "\n";
        } else if (*compare) {
            if (config_path.empty()) {
                std::cerr << "compare requires --config\n";
                return 2;
            }
            qd::RunConfig cfg = qd::RunConfig::load(config_path);
            qd::CompareResult res = qd::run_compare(cfg);
            std::cout << res.report.to_csv();
            std::cout << "error_slope=" << qd::format_double(res.report.error_slope)
                      << " decreasing=" << res.report.decreasing << "\n";
            return res.passed ? 0 : 1;
        } else if (*verify) {
            qd::VerifyLevel level =
                verify_level == "full" ? qd::VerifyLevel::full : qd::VerifyLevel::quick;
            auto results = qd::verify_suite(level, verify_threads);
            int failed = 0;
            for (const auto& c : results) {
                std::cout << qd::format_check(c) << "\n";
                if (!c.pass) ++failed;
            }
            std::cout << (failed == 0 ? "ALL CHECKS PASSED" : "FAILURES: " + std::to_string(failed))
                      << " (" << results.size() << " checks)\n";
            return failed == 0 ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
