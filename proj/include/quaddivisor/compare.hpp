// End-to-end pipeline: theorem coefficients once, then exact sum vs
// prediction for every ladder X.

#pragma once

#include "quaddivisor/config.hpp"
#include "quaddivisor/report.hpp"
#include "quaddivisor/singular_series.hpp"

namespace qd {

struct CompareResult {
    PredictionReport report;
    TheoremCoefficients coeffs;
    bool passed = true;  // relative-error decrease test
};

CompareResult run_compare(const RunConfig& config, bool write_files = true);

}  // namespace qd
