// Local solution densities rho_F(p^l) and the complete exponential sums
// S_F(q,a), S_F(q).
//
// Counting strategies, cross-checked against each other in the test suite:
//   * brute force over [0,q)^n           (ground truth, capped)
//   * fiber lifting over solutions mod p^{l-1}   (capped)
//   * mod-p counting via exact diagonalization + quadratic-residue shapes
//   * a Hensel-style singular-point recursion for all higher powers
//     (odd p with Q invertible mod p, and the full p = 2 analogue)
//   * value-distribution convolution for diagonal F at composite-free
//     moduli p^l (also an independent oracle)

#pragma once

#include "quaddivisor/jet.hpp"
#include "quaddivisor/numeric.hpp"
#include "quaddivisor/quad_poly.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>

namespace qd {

struct LocalDensity {
    std::int64_t p = 0;
    int l = 0;
    Int q = 1;      // p^l
    Int count = 1;  // #{h mod q : F(h) == 0 mod q}
    Rat rho = 1;    // count / q^{n-1}
};

struct RhoOptions {
    std::uint64_t op_cap = 1ull << 28;
    std::uint64_t entry_cap = 16'000'000;     // stored solutions in the lifting path
    std::int64_t conv_modulus_cap = 1 << 14;  // diagonal convolution path
};

enum class RhoStrategy { auto_select, brute, lift, convolution };

// Caches densities for one polynomial; all methods pure w.r.t. observable state.
class LocalCounter {
public:
    explicit LocalCounter(const QuadraticPolynomial& F, RhoOptions opts = {});
    LocalDensity rho(std::int64_t p, int l, RhoStrategy strategy = RhoStrategy::auto_select);
    Rat s_f_prime_power(std::int64_t p, int m);  // rho(p^m) - rho(p^{m-1})
    Rat s_f(const Int& q);                       // multiplicative over prime powers
    const QuadraticPolynomial& poly() const { return F_; }

private:
    Int count(std::int64_t p, int l, RhoStrategy strategy);
    QuadraticPolynomial F_;
    RhoOptions opts_;
    std::map<std::pair<std::int64_t, int>, Int> cache_;
    std::map<std::pair<std::vector<std::uint64_t>, int>, Int> memo2_;  // p = 2 recursion
};

LocalDensity rho(const QuadraticPolynomial& F, std::int64_t p, int l, RhoOptions opts = {});

// Ground-truth enumeration over [0, p^l)^n.
Int rho_count_brute(const QuadraticPolynomial& F, std::int64_t p, int l,
                    std::uint64_t op_cap = 1ull << 28);

struct GaussSumValue {
    Int q;
    Int a;
    Complex value;
};

// S_F(q,a) = sum_{h in [1,q]^n} e(a F(h)/q); exact integer phases reduced
// mod q before any trigonometry; CRT factorization into prime powers.
GaussSumValue gauss_sum(const QuadraticPolynomial& F, const Int& q, const Int& a,
                        std::uint64_t op_cap = 1ull << 27);

// Normalized average over residues coprime to q, via multiplicativity and
// the density telescoping identity.  Exact.
Rat s_f(const QuadraticPolynomial& F, const Int& q, RhoOptions opts = {});

// Oracle paths for s_f: exact Ramanujan-sum aggregation, and the direct
// complex double sum (whose imaginary part must vanish).
Rat s_f_ramanujan_oracle(const QuadraticPolynomial& F, std::int64_t q,
                         std::uint64_t op_cap = 1ull << 27);
Complex s_f_complex_oracle(const QuadraticPolynomial& F, std::int64_t q,
                           std::uint64_t op_cap = 1ull << 24);

}  // namespace qd
