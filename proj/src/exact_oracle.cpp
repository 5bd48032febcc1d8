#include "quaddivisor/exact_oracle.hpp"

#include "quaddivisor/parallel.hpp"

#include <sstream>

namespace qd {

namespace {

std::string witness_string(const std::vector<std::int64_t>& x) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
    os << ")";
    return os.str();
}

struct U128Sum {
    unsigned __int128 v = 0;
};

Int to_int(unsigned __int128 v) {
    Int hi = static_cast<std::uint64_t>(v >> 64);
    hi <<= 64;
    return hi + static_cast<std::uint64_t>(v);
}

}  // namespace

ExactSumResult exact_sigma(const QuadraticPolynomial& F, int k, const BoxRegion& box,
                           const ExactSumOptions& opts) {
    if (box.dim() != F.n) throw DomainError("exact_sigma: dimension mismatch");
    int n = F.n;
    RangeExtrema ex = range_extrema(F, box);
    if (!ex.admissible) {
        std::ostringstream os;
        os << "exact_sigma: F takes the negative value " << ex.fmin.str()
           << " on the dilated box (divisor sum undefined)";
        throw InadmissibleError(os.str());
    }
    std::int64_t fmax = to_i64(floor_rat(ex.fmax));
    if (fmax > opts.sieve_cap) throw ResourceError("exact_sigma: sieve limit exceeds cap");

    ExactSumResult out;
    out.X = box.X;
    out.lattice_count = box.lattice_count();
    out.fmax_used = fmax;
    if (out.lattice_count == 0) return out;

    DivisorTable table = sieve_tau_k(k, std::max<std::int64_t>(fmax, 1), opts.threads);

    std::vector<std::int64_t> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto [a, b] = box.lattice_range(i);
        lo[static_cast<std::size_t>(i)] = to_i64(a);
        hi[static_cast<std::size_t>(i)] = to_i64(b);
    }
    // int64 coefficient copies for the hot loop
    std::vector<std::vector<std::int64_t>> Q(static_cast<std::size_t>(n),
                                             std::vector<std::int64_t>(static_cast<std::size_t>(n)));
    std::vector<std::int64_t> L(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        L[static_cast<std::size_t>(i)] = to_i64(F.L[static_cast<std::size_t>(i)]);
        for (int j = 0; j < n; ++j)
            Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                to_i64(F.Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
    std::int64_t N0 = to_i64(F.N);

    // slabs on x_1; the innermost axis evaluates F as a quadratic in x_n
    auto slab_sum = [&](std::int64_t s0, std::int64_t s1) {
        U128Sum acc;
        std::vector<std::int64_t> x(static_cast<std::size_t>(n));
        for (std::int64_t x1 = s0; x1 < s1; ++x1) {
            x[0] = x1;
            // odometer over x_2..x_{n-1}
            for (int i = 1; i < n - 1; ++i) x[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)];
            for (;;) {
                // F(prefix, x_n) = A x_n^2 + B x_n + C
                std::int64_t A = Q[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(n - 1)];
                std::int64_t B = L[static_cast<std::size_t>(n - 1)];
                for (int j = 0; j < n - 1; ++j)
                    B += 2 * Q[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
                std::int64_t C = N0;
                for (int i = 0; i < n - 1; ++i) {
                    C += L[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
                    for (int j = 0; j < n - 1; ++j)
                        C += Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                             x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
                }
                for (std::int64_t xn = lo[static_cast<std::size_t>(n - 1)]; xn <= hi[static_cast<std::size_t>(n - 1)]; ++xn) {
                    std::int64_t v = (A * xn + B) * xn + C;
                    if (v < 0 || v > fmax) {
                        x[static_cast<std::size_t>(n - 1)] = xn;
                        throw InadmissibleError("exact_sigma: negative or out-of-range value at x = " +
                                                witness_string(x));
                    }
                    acc.v += table.values[static_cast<std::size_t>(v)];
                }
                if (n == 2) break;
                int axis = n - 2;
                while (axis >= 1) {
                    if (++x[static_cast<std::size_t>(axis)] <= hi[static_cast<std::size_t>(axis)]) break;
                    x[static_cast<std::size_t>(axis)] = lo[static_cast<std::size_t>(axis)];
                    --axis;
                }
                if (axis < 1) break;
            }
        }
        return acc;
    };

    U128Sum total = parallel_reduce<U128Sum>(
        lo[0], hi[0] + 1, U128Sum{}, slab_sum,
        [](U128Sum a, U128Sum b) {
            a.v += b.v;
            return a;
        },
        opts.threads);
    out.total = to_int(total.v);
    return out;
}

Int ap_exact_sum(int k, double x, const Int& h, const Int& q, const ExactSumOptions& opts) {
    if (q < 1 || h < 1 || h > q) throw DomainError("ap_exact_sum: need 1 <= h <= q");
    if (x < 1.0) return 0;
    std::int64_t limit = static_cast<std::int64_t>(std::floor(x));
    if (limit > opts.sieve_cap) throw ResourceError("ap_exact_sum: x exceeds sieve cap");
    std::int64_t hh = to_i64(h), qq = to_i64(q);
    if (hh > limit) return 0;
    DivisorTable table = sieve_tau_k(k, limit, opts.threads);
    unsigned __int128 acc = 0;
    for (std::int64_t m = hh; m <= limit; m += qq) acc += table.values[static_cast<std::size_t>(m)];
    return to_int(acc);
}

}  // namespace qd
