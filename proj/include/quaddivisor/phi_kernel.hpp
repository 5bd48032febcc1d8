// The arithmetic kernel of the major arcs: f_k(q,delta,s), Phi_k(q,s) and
// its derivatives at s = 1 (as jets), the residue coefficients beta_{k,r}(q),
// and the main term M_k(x;h,q) for divisor sums in progressions.

#pragma once

#include "quaddivisor/jet.hpp"
#include "quaddivisor/numeric.hpp"
#include "quaddivisor/zeta_laurent.hpp"

#include <complex>

namespace qd {

enum class PhiMode { closed_form, definition };

// Jet at s = 1 of
//   f_k(q,delta,s) = 1/(phi(q/delta) delta^s) * (sum_{d|q/delta} mu(d)/d^s)^k
//     * sum_{d_1...d_k = delta} sum_{t_i | prod_{j>i} d_j, (t_i, q/delta)=1}
//         mu(t_1)...mu(t_k)/(t_1...t_k)^s
// built entirely in jet arithmetic.  Memoized on (k, q, delta, order).
SeriesJet f_k_jet(int k, const Int& q, const Int& delta, int order);

// Pointwise complex evaluation of the same function (oracle paths).
Complex f_k_value(int k, const Int& q, const Int& delta, Complex s);

// The inner double factorization sum alone (the I_k of the prime-power
// derivation), enumerated without shortcuts; test oracle for the closed form.
Complex f_k_inner_sum_value(int k, const Int& delta, const Int& coprime_to, Complex s);

// Phi_k(q,s) as a jet at s = 1.  closed_form evaluates the prime-power
// formula and multiplies across prime powers; definition evaluates
// sum_{delta|q} mu(delta) f_k(q, q/delta, s).
SeriesJet phi_jet(int k, const Int& q, int order, PhiMode mode = PhiMode::closed_form);

// Pointwise closed-form evaluation at complex s.
Complex phi_value(int k, const Int& q, Complex s);

struct BetaCoefficient {
    int k = 0;
    int r = 0;
    Int q;
    double value = 0.0;
};

// beta_{k,r}(q) = (1/r!) sum_{t=0}^{k-r-1} (1/t!) res((s-1)^{r+t} zeta^k)
//                  * d^t Phi_k(q,s)/ds^t |_{s=1}
BetaCoefficient beta_coefficient(int k, int r, const Int& q);

// Smith-type main term M_k(x;h,q) = res_{s=1}(zeta(s)^k (x^s/s) f_k(q,delta,s)),
// delta = gcd(h,q).
double ap_main_term(int k, double x, const Int& h, const Int& q);

// Default jet order for k-th power work: max(k-1, 4) plus guard coefficients.
inline int default_jet_order(int k) { return std::max(k - 1, 4) + 2; }

}  // namespace qd
