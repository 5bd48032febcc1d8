// Prediction reports: one row per ladder X with the exact sum, per-r main
// term pieces, totals, relative error and truncation diagnostics.  CSV and
// JSON carry the same fields; output is deterministic (timing is logged to
// the console, never into report files).

#pragma once

#include "quaddivisor/numeric.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace qd {

struct PredictionRow {
    Rat X;
    Int exact_total = 0;
    Int lattice_count = 0;
    std::int64_t fmax_used = 0;
    double prediction = 0.0;
    std::vector<double> pieces;  // C_{k,r} * integral_r, r = 0..k-1
    double rel_error = 0.0;      // (exact - prediction)/exact
    double sing_tail = 0.0;
    double quad_error = 0.0;
    std::int64_t cells = 0;
    bool quad_ok = true;
};

struct PredictionReport {
    int schema_version = 1;
    int k = 2;
    std::vector<PredictionRow> rows;
    double error_slope = 0.0;  // least-squares slope of log|rel err| vs log X
    bool decreasing = true;

    nlohmann::json to_json() const;
    std::string to_csv() const;
    void write(const std::string& csv_path, const std::string& json_path) const;
};

// deterministic shortest-roundtrip formatting for doubles
std::string format_double(double v);

}  // namespace qd
