// The archimedean factor: integrals of (log F(t))^r over the dilated box by
// adaptive tensor-product Gauss-Legendre quadrature with dyadic subdivision,
// and assembly of the full main-term prediction.

#pragma once

#include "quaddivisor/numeric.hpp"
#include "quaddivisor/quad_poly.hpp"
#include "quaddivisor/singular_series.hpp"

#include <cstdint>
#include <vector>

namespace qd {

struct BoxIntegral {
    int r = 0;
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::int64_t cells_used = 0;
    bool tolerance_reached = true;  // false: depth cap made the estimate inflate past tol
};

struct QuadratureOptions {
    int max_depth = 40;
    unsigned threads = 0;
    int points = 7;  // Gauss-Legendre points per axis
};

// integral over X*B of (log F(t))^r dt, computed as X^n * integral over B.
// Cells whose exact interval range stays positive are integrated and refined
// on the parent-vs-children difference; cells that may touch {F = 0} shrink
// until their contribution bound is negligible, which lands in
// abs_error_estimate (never silently in value).
BoxIntegral log_power_integral(const QuadraticPolynomial& F, const BoxRegion& box, int r,
                               double tol, const QuadratureOptions& opts = {});

// Fixed composite Gauss-Legendre reference rule (panels per axis, points per
// panel); independent of the adaptive path, for oracle comparisons on
// singularity-free boxes.
double composite_log_power_integral(const QuadraticPolynomial& F, const BoxRegion& box, int r,
                                    int panels = 12, int points = 5);

struct SigmaPrediction {
    int k = 0;
    std::vector<BoxIntegral> integrals;  // r = 0..k-1
    std::vector<double> pieces;          // C_{k,r} * integral_r
    double total = 0.0;
};

SigmaPrediction predict_sigma(const QuadraticPolynomial& F, int k, const BoxRegion& box,
                              const TheoremCoefficients& coeffs, double tol,
                              const QuadratureOptions& opts = {});

// nodes/weights on [-1, 1]
void gauss_legendre_nodes(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace qd
