#include "quaddivisor/arith.hpp"

#include "quaddivisor/parallel.hpp"

#include <algorithm>
#include <numeric>

namespace qd {

namespace {

constexpr std::int64_t kSegment = 1 << 22;

// out[m] += in[d] over all multiples m of d inside [lo, hi).
void convolve_with_one_segment(const std::vector<std::uint64_t>& in,
                               std::vector<std::uint64_t>& out,
                               std::int64_t lo, std::int64_t hi) {
    for (std::int64_t d = 1; d < hi; ++d) {
        std::int64_t first = std::max<std::int64_t>(d, ((lo + d - 1) / d) * d);
        for (std::int64_t m = first; m < hi; m += d) {
            std::uint64_t prev = out[static_cast<std::size_t>(m)];
            std::uint64_t next = prev + in[static_cast<std::size_t>(m / d)];
            if (next < prev) throw ResourceError("tau_k count overflowed 64 bits");
            out[static_cast<std::size_t>(m)] = next;
        }
    }
}

}  // namespace

DivisorTable sieve_tau_k(int k, std::int64_t limit, unsigned threads) {
    if (k < 2) throw DomainError("sieve_tau_k: k must be >= 2");
    if (limit < 1) throw DomainError("sieve_tau_k: limit must be >= 1");
    std::vector<std::uint64_t> cur(static_cast<std::size_t>(limit) + 1, 1);
    cur[0] = 0;  // tau_j(0) = 0
    for (int stage = 2; stage <= k; ++stage) {
        std::vector<std::uint64_t> next(static_cast<std::size_t>(limit) + 1, 0);
        std::int64_t nseg = (limit + kSegment) / kSegment;
        parallel_reduce<int>(
            0, nseg, 0,
            [&](std::int64_t s0, std::int64_t s1) {
                for (std::int64_t s = s0; s < s1; ++s) {
                    std::int64_t lo = std::max<std::int64_t>(1, s * kSegment);
                    std::int64_t hi = std::min<std::int64_t>(limit + 1, (s + 1) * kSegment);
                    if (lo < hi) convolve_with_one_segment(cur, next, lo, hi);
                }
                return 0;
            },
            [](int a, int) { return a; }, threads);
        cur = std::move(next);
    }
    return DivisorTable{k, limit, std::move(cur)};
}

std::uint64_t tau_k_prime_power(int k, int m) {
    if (k < 1 || m < 0) throw DomainError("tau_k_prime_power: need k >= 1, m >= 0");
    // C(m+k-1, k-1)
    unsigned __int128 acc = 1;
    for (int i = 1; i <= k - 1; ++i) {
        acc = acc * static_cast<unsigned>(m + i) / static_cast<unsigned>(i);
        if (acc > static_cast<unsigned __int128>(UINT64_MAX))
            throw ResourceError("tau_k_prime_power overflow");
    }
    return static_cast<std::uint64_t>(acc);
}

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

std::uint64_t pollard_rho(std::uint64_t n) {
    if ((n & 1) == 0) return 2;
    std::uint64_t x = 2, y = 2, c = 1;
    for (;;) {
        x = 2; y = 2;
        std::uint64_t d = 1;
        while (d == 1) {
            x = (mulmod_u64(x, x, n) + c) % n;
            y = (mulmod_u64(y, y, n) + c) % n;
            y = (mulmod_u64(y, y, n) + c) % n;
            std::uint64_t diff = x > y ? x - y : y - x;
            d = std::gcd(diff, n);
        }
        if (d != n) return d;
        ++c;
    }
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    // deterministic Miller-Rabin for 64-bit with the standard witness set
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

std::vector<std::int64_t> primes_up_to(std::int64_t limit) {
    std::vector<std::int64_t> out;
    if (limit < 2) return out;
    std::vector<bool> comp(static_cast<std::size_t>(limit) + 1, false);
    for (std::int64_t i = 2; i * i <= limit; ++i)
        if (!comp[static_cast<std::size_t>(i)])
            for (std::int64_t j = i * i; j <= limit; j += i) comp[static_cast<std::size_t>(j)] = true;
    for (std::int64_t i = 2; i <= limit; ++i)
        if (!comp[static_cast<std::size_t>(i)]) out.push_back(i);
    return out;
}

Factorization factorize(const Int& n) {
    if (n < 1) throw DomainError("factorize: n must be positive");
    Factorization f;
    f.n = n;
    if (n == 1) return f;
    if (n > Int(UINT64_MAX)) throw ResourceError("factorize: n exceeds 64-bit range");
    std::uint64_t m = static_cast<std::uint64_t>(n);
    std::vector<std::uint64_t> stack{m}, primes;
    while (!stack.empty()) {
        std::uint64_t v = stack.back();
        stack.pop_back();
        if (v == 1) continue;
        if (is_prime(v)) { primes.push_back(v); continue; }
        std::uint64_t d = 1;
        for (std::uint64_t p = 2; p < 10000 && p * p <= v; ++p)
            if (v % p == 0) { d = p; break; }
        if (d == 1) d = pollard_rho(v);
        stack.push_back(d);
        stack.push_back(v / d);
    }
    std::sort(primes.begin(), primes.end());
    for (std::size_t i = 0; i < primes.size();) {
        std::size_t j = i;
        while (j < primes.size() && primes[j] == primes[i]) ++j;
        f.pairs.emplace_back(Int(primes[i]), static_cast<int>(j - i));
        i = j;
    }
    return f;
}

MultiplicativeBasics multiplicative_basics(const Int& n) {
    if (n < 1) throw DomainError("multiplicative_basics: n must be positive");
    MultiplicativeBasics out;
    out.factorization = factorize(n);
    out.mu = 1;
    out.phi = 1;
    out.divisors = {Int(1)};
    for (const auto& [p, e] : out.factorization.pairs) {
        out.mu = (e > 1) ? 0 : -out.mu;
        Int pk = p - 1;
        for (int i = 1; i < e; ++i) pk *= p;
        out.phi *= pk;
        std::vector<Int> grown;
        grown.reserve(out.divisors.size() * static_cast<std::size_t>(e + 1));
        Int pe = 1;
        for (int i = 0; i <= e; ++i) {
            for (const Int& d : out.divisors) grown.push_back(d * pe);
            pe *= p;
        }
        out.divisors = std::move(grown);
    }
    std::sort(out.divisors.begin(), out.divisors.end());
    return out;
}

int mobius(const Int& n) { return multiplicative_basics(n).mu; }
Int euler_phi(const Int& n) { return multiplicative_basics(n).phi; }
std::vector<Int> divisors_of(const Int& n) { return multiplicative_basics(n).divisors; }

namespace {

void ordered_rec(const Int& remaining, int slots, std::vector<Int>& tuple,
                 const std::function<void(const std::vector<Int>&)>& visit) {
    if (slots == 1) {
        tuple.push_back(remaining);
        visit(tuple);
        tuple.pop_back();
        return;
    }
    for (const Int& d : divisors_of(remaining)) {
        tuple.push_back(d);
        ordered_rec(remaining / d, slots - 1, tuple, visit);
        tuple.pop_back();
    }
}

}  // namespace

void ordered_factorizations(const Int& delta, int k,
                            const std::function<void(const std::vector<Int>&)>& visit) {
    if (delta < 1 || k < 1) throw DomainError("ordered_factorizations: need delta >= 1, k >= 1");
    std::vector<Int> tuple;
    tuple.reserve(static_cast<std::size_t>(k));
    ordered_rec(delta, k, tuple, visit);
}

std::vector<std::vector<Int>> ordered_factorizations_list(const Int& delta, int k) {
    std::vector<std::vector<Int>> out;
    ordered_factorizations(delta, k, [&](const std::vector<Int>& t) { out.push_back(t); });
    return out;
}

}  // namespace qd
