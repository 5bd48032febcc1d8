// F(x) = x^T Q x + L^T x + N with symmetric nonsingular integer Q, and the
// dilated box X*B: exact evaluation, lattice enumeration, exact range
// extrema over the closed dilated box.

#pragma once

#include "quaddivisor/numeric.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace qd {

struct QuadraticPolynomial {
    int n = 0;
    std::vector<std::vector<Int>> Q;  // n x n, symmetric, det != 0
    std::vector<Int> L;
    Int N = 0;

    QuadraticPolynomial() = default;
    QuadraticPolynomial(std::vector<std::vector<Int>> Q_, std::vector<Int> L_, Int N_);

    Int evaluate(const std::vector<Int>& x) const;
    Rat evaluate(const std::vector<Rat>& t) const;
    // gradient 2Qx + L
    std::vector<Int> gradient(const std::vector<Int>& x) const;

    bool is_diagonal() const;
    Int det_q() const;  // exact integer determinant of Q
};

struct BoxRegion {
    std::vector<Rat> lo, hi;  // lo_i < hi_i
    Rat X = 1;                // dilation, > 0

    BoxRegion() = default;
    BoxRegion(std::vector<Rat> lo_, std::vector<Rat> hi_, Rat X_);

    int dim() const { return static_cast<int>(lo.size()); }
    // closed dilated lattice range on axis i: [ceil(X*lo_i), floor(X*hi_i)]
    std::pair<Int, Int> lattice_range(int i) const;
    Int lattice_count() const;
};

struct RangeExtrema {
    Rat fmin, fmax;
    std::vector<Rat> argmin, argmax;
    bool admissible = false;  // fmin >= 0
};

// Streams every integer vector of the closed dilated box (axis 0 outermost).
void for_each_lattice_point(const BoxRegion& box,
                            const std::function<void(const std::vector<std::int64_t>&)>& visit);

// Exact extrema of F over the closed dilated box by face recursion over the
// 3^n {lo, hi, free} patterns; free-face critical points solved exactly over
// the rationals.  Faces with a singular restricted system contribute through
// their own boundary subfaces.
RangeExtrema range_extrema(const QuadraticPolynomial& F, const BoxRegion& box);

}  // namespace qd
