// Elementary multiplicative number theory: tau_k sieves, factorization,
// Moebius/totient, and ordered factorizations.

#pragma once

#include "quaddivisor/numeric.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace qd {

// tau_k(0..limit); tau_k(0) = 0 by convention.
struct DivisorTable {
    int k = 0;
    std::int64_t limit = 0;
    std::vector<std::uint64_t> values;  // values[m] = tau_k(m)

    std::uint64_t operator()(std::int64_t m) const { return values.at(static_cast<std::size_t>(m)); }
};

// k-1 successive Dirichlet convolutions with 1, segmented output passes.
DivisorTable sieve_tau_k(int k, std::int64_t limit, unsigned threads = 0);

// tau_k(p^m) = C(m+k-1, k-1), independent of the prime.
std::uint64_t tau_k_prime_power(int k, int m);

struct Factorization {
    Int n = 1;
    std::vector<std::pair<Int, int>> pairs;  // (prime, exponent), primes increasing
};

struct MultiplicativeBasics {
    Factorization factorization;
    int mu = 0;          // Moebius
    Int phi = 1;         // Euler totient
    std::vector<Int> divisors;  // sorted ascending
};

Factorization factorize(const Int& n);
MultiplicativeBasics multiplicative_basics(const Int& n);

bool is_prime(std::uint64_t n);
// Primes in [2, limit].
std::vector<std::int64_t> primes_up_to(std::int64_t limit);

int mobius(const Int& n);
Int euler_phi(const Int& n);
std::vector<Int> divisors_of(const Int& n);

// Every ordered k-tuple (d_1,...,d_k) with product delta, in lexicographic
// order; count equals tau_k(delta).
void ordered_factorizations(const Int& delta, int k,
                            const std::function<void(const std::vector<Int>&)>& visit);
std::vector<std::vector<Int>> ordered_factorizations_list(const Int& delta, int k);

}  // namespace qd
