// Ground truth: the exact divisor sum over lattice points of the dilated
// box, and exact divisor sums in arithmetic progressions.

#pragma once

#include "quaddivisor/arith.hpp"
#include "quaddivisor/numeric.hpp"
#include "quaddivisor/quad_poly.hpp"

#include <cstdint>

namespace qd {

struct ExactSumResult {
    Rat X;
    Int total = 0;          // sum of tau_k(F(x)), exact
    Int lattice_count = 0;
    std::int64_t fmax_used = 0;  // sieve limit = floor(max F over the dilated box)
};

struct ExactSumOptions {
    unsigned threads = 0;
    std::int64_t sieve_cap = 1'000'000'000;
};

// Sieves tau_k once up to the box maximum of F, then streams lattice slabs.
// Hard error with a witness point if any F(x) < 0.
ExactSumResult exact_sigma(const QuadraticPolynomial& F, int k, const BoxRegion& box,
                           const ExactSumOptions& opts = {});

// A_k(x;h,q) = sum_{m <= x, m == h mod q} tau_k(m), exact.
Int ap_exact_sum(int k, double x, const Int& h, const Int& q,
                 const ExactSumOptions& opts = {});

}  // namespace qd
