// The singular series L(s;k,F): local Euler factors as jets at s = 1, the
// truncated product over primes, and the theorem coefficients C_{k,r}(F).

#pragma once

#include "quaddivisor/jet.hpp"
#include "quaddivisor/local_counts.hpp"
#include "quaddivisor/numeric.hpp"
#include "quaddivisor/zeta_laurent.hpp"

#include <functional>

namespace qd {

// Density provider: rho_F(p^l) as an exact rational.  The default wraps a
// LocalCounter; tests may substitute synthetic densities.
using DensityFn = std::function<Rat(std::int64_t p, int l)>;

DensityFn density_from(LocalCounter& counter);

struct LocalFactorResult {
    SeriesJet jet;
    int lmax_used = 0;
    double tail_bound = 0.0;  // heuristic bound on the dropped l-tail
};

// Telescoped local factor
//   L_p(s;k,F) = [ sum_{l>=0} rho(p^l)(tau_k(p^l) - p^{s-1} tau_k(p^{l-1}))/p^{ls} ]
//                * (1-p^{-s})^k / (1-p^{-1}),   tau_k(p^{-1}) := 0.
// The l-sum runs to the 1e-14 relative summand rule; a density failure past
// lmax stops the sum and reports the remainder in tail_bound instead.
LocalFactorResult local_factor_jet(const DensityFn& rho, int k, std::int64_t p, int order,
                                   int lmax);

// Pointwise complex evaluation (contour oracle path).
Complex local_factor_value(const DensityFn& rho, int k, std::int64_t p, Complex s, int lmax);

struct SingularSeriesValue {
    SeriesJet jet;  // L(s;k,F) at s = 1
    std::int64_t pmax = 0;
    int lmax = 0;
    double tail_estimate = 0.0;  // heuristic p > pmax tail plus dropped l-tails
};

// Product of local factors over p <= pmax (ascending-prime accumulation).
// n_for_tail is the number of variables driving the p^{-n/2} tail envelope.
SingularSeriesValue singular_series_jet(const DensityFn& rho, int n_for_tail, int k, int order,
                                        std::int64_t pmax, int lmax, unsigned threads = 0);
SingularSeriesValue singular_series_jet(const QuadraticPolynomial& F, int k, int order,
                                        std::int64_t pmax, int lmax, unsigned threads = 0);

struct TheoremCoefficients {
    int k = 0;
    std::vector<double> C;          // C_{k,0} .. C_{k,k-1}
    double tail_estimate = 0.0;     // propagated from the singular series
    double leading() const { return C.back(); }
};

// C_{k,r}(F) = (1/r!) sum_{t=0}^{k-r-1} (1/t!) (d^t L/ds^t|_1) res((s-1)^{r+t} zeta^k).
TheoremCoefficients theorem_coefficients_from(const SingularSeriesValue& L, int k);
TheoremCoefficients theorem_coefficients(const QuadraticPolynomial& F, int k, std::int64_t pmax,
                                         int lmax, int order = -1, unsigned threads = 0);

}  // namespace qd
