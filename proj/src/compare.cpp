#include "quaddivisor/compare.hpp"

#include "quaddivisor/exact_oracle.hpp"
#include "quaddivisor/main_term.hpp"
#include "quaddivisor/phi_kernel.hpp"

#include <chrono>
#include <cmath>
#include <iostream>

namespace qd {

CompareResult run_compare(const RunConfig& config, bool write_files) {
    CompareResult out;
    out.report.k = config.k;
    QuadraticPolynomial F = config.polynomial();

    int order = config.jet_order >= 0 ? config.jet_order : default_jet_order(config.k);
    out.coeffs = theorem_coefficients(F, config.k, config.pmax, config.lmax, order, config.threads);

    QuadratureOptions qopts;
    qopts.max_depth = config.quad_max_depth;
    qopts.threads = config.threads;

    for (const Rat& X : config.ladder) {
        BoxRegion box = config.box_at(X);
        auto t0 = std::chrono::steady_clock::now();
        ExactSumOptions eopts;
        eopts.threads = config.threads;
        ExactSumResult exact = exact_sigma(F, config.k, box, eopts);
        SigmaPrediction pred = predict_sigma(F, config.k, box, out.coeffs, config.quad_tol, qopts);
        auto t1 = std::chrono::steady_clock::now();

        PredictionRow row;
        row.X = X;
        row.exact_total = exact.total;
        row.lattice_count = exact.lattice_count;
        row.fmax_used = exact.fmax_used;
        row.prediction = pred.total;
        row.pieces = pred.pieces;
        double ex = to_double(exact.total);
        row.rel_error = ex != 0.0 ? (ex - pred.total) / ex : 0.0;
        row.sing_tail = out.coeffs.tail_estimate;
        for (const auto& I : pred.integrals) {
            row.quad_error += I.abs_error_estimate;
            row.cells += I.cells_used;
            row.quad_ok = row.quad_ok && I.tolerance_reached;
        }
        out.report.rows.push_back(row);
        double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        std::cerr << "X=" << rational_string(X) << " exact=" << exact.total.str()
                  << " prediction=" << format_double(pred.total)
                  << " rel_error=" << format_double(row.rel_error) << " (" << ms << " ms)\n";
    }

    // least-squares slope of log|rel err| against log X
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : out.report.rows) {
        double a = std::abs(r.rel_error);
        if (a > 0.0) pts.emplace_back(std::log(to_double(r.X)), std::log(a));
    }
    if (pts.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        double m = static_cast<double>(pts.size());
        out.report.error_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        out.report.decreasing = out.report.error_slope < 0.0;
    }
    out.passed = out.report.decreasing;

    if (write_files) out.report.write(config.out_csv, config.out_json);
    return out;
}

}  // namespace qd
