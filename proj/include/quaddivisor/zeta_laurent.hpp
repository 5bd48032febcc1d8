// Stieltjes constants, the Laurent expansion of zeta(s)^k at s = 1, and the
// weighted residues res_{s=1}((s-1)^w zeta(s)^k).

#pragma once

#include "quaddivisor/jet.hpp"
#include "quaddivisor/numeric.hpp"

#include <complex>
#include <vector>

namespace qd {

// gamma_n for the defining limit, computed once to <= 1e-12 absolute error
// (Euler-Maclaurin acceleration in extended precision) and cached.
double stieltjes_constant(int nidx);
const std::vector<double>& stieltjes_table();  // gamma_0..gamma_20

// Raw partial sum  sum_{d<=M} log^n d / d - log^{n+1} M/(n+1)  (low-precision
// oracle for the limit).
double stieltjes_raw_partial_sum(int nidx, std::int64_t M);

// Exact Bernoulli number B_n (B_1 = -1/2 convention).
Rat bernoulli(int n);

// zeta(s)^k = sum_{j >= -k} c_j (s-1)^j, truncated at j = d.
struct LaurentBlock {
    int pole_order = 1;
    std::vector<double> coeffs;  // c_{-pole_order} .. c_{d}

    int top_order() const { return static_cast<int>(coeffs.size()) - 1 - pole_order; }
    double coeff(int j) const {
        int idx = j + pole_order;
        if (idx < 0 || idx >= static_cast<int>(coeffs.size())) return 0.0;
        return coeffs[static_cast<std::size_t>(idx)];
    }
};

LaurentBlock zeta_pow_laurent(int k, int d);

// Truncated product (pole orders add; top order is the min of the operands').
LaurentBlock laurent_mul(const LaurentBlock& a, const LaurentBlock& b);

// res_{s=1}((s-1)^w zeta(s)^k): coefficient c_{-1-w}; zero when w >= k.
double weighted_residue(int k, int w);

// residue of LaurentBlock * analytic jet: sum_j c_{-1-j} a_j.
double residue_product(const LaurentBlock& zk, const SeriesJet& jet);

// Euler-Maclaurin zeta for complex s near s = 1 (s != 1).
Complex zeta_em(Complex s, int terms = 25, int corrections = 30);

// Trapezoid contour (1/2pi i) oint_{|s-1|=radius} (s-1)^w zeta(s)^k ds.
double contour_residue_oracle(int k, int w, double radius = 0.3, int nodes = 64);

}  // namespace qd
