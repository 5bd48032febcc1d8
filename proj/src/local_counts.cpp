#include "quaddivisor/local_counts.hpp"

#include "quaddivisor/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>

namespace qd {

namespace {

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
    return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
}

std::int64_t powmod(std::int64_t a, std::int64_t e, std::int64_t m) {
    std::int64_t r = 1 % m;
    a %= m;
    if (a < 0) a += m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

std::int64_t inv_mod_prime(std::int64_t a, std::int64_t p) { return powmod(a, p - 2, p); }

// Legendre symbol, chi(0) = 0.
int legendre(std::int64_t a, std::int64_t p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

std::int64_t mod_i64(const Int& v, std::int64_t m) {
    Int r = v % m;
    if (r < 0) r += m;
    return static_cast<std::int64_t>(r);
}

Int pow_int(std::int64_t p, int e) {
    Int r = 1;
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

// Exact coefficient-level diagonalization of x^T Q x + L^T x mod odd p by
// symmetric elimination; returns per-variable (a_i, l_i) with the same
// value-count distribution (unimodular change of variables mod p).
void diagonalize_mod_p(const QuadraticPolynomial& F, std::int64_t p,
                       std::vector<std::int64_t>& diag, std::vector<std::int64_t>& lin) {
    int n = F.n;
    std::vector<std::vector<std::int64_t>> A(static_cast<std::size_t>(n),
                                             std::vector<std::int64_t>(static_cast<std::size_t>(n)));
    std::vector<std::int64_t> b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        b[static_cast<std::size_t>(i)] = mod_i64(F.L[static_cast<std::size_t>(i)], p);
        for (int j = 0; j < n; ++j)
            A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                mod_i64(F.Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], p);
    }
    diag.clear();
    lin.clear();
    std::vector<int> act(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) act[static_cast<std::size_t>(i)] = i;
    while (!act.empty()) {
        int piv = -1;
        for (int i : act)
            if (A[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] % p != 0) { piv = i; break; }
        if (piv < 0) {
            std::pair<int, int> od{-1, -1};
            for (int i : act) {
                for (int j : act)
                    if (i != j && A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] % p != 0) {
                        od = {i, j};
                        break;
                    }
                if (od.first >= 0) break;
            }
            if (od.first < 0) {
                // remaining quadratic block vanishes mod p
                for (int i : act) {
                    diag.push_back(0);
                    lin.push_back(b[static_cast<std::size_t>(i)] % p);
                }
                return;
            }
            auto [i0, j0] = od;
            for (int t = 0; t < n; ++t)
                A[static_cast<std::size_t>(i0)][static_cast<std::size_t>(t)] =
                    (A[static_cast<std::size_t>(i0)][static_cast<std::size_t>(t)] +
                     A[static_cast<std::size_t>(j0)][static_cast<std::size_t>(t)]) % p;
            for (int t = 0; t < n; ++t)
                A[static_cast<std::size_t>(t)][static_cast<std::size_t>(i0)] =
                    (A[static_cast<std::size_t>(t)][static_cast<std::size_t>(i0)] +
                     A[static_cast<std::size_t>(t)][static_cast<std::size_t>(j0)]) % p;
            b[static_cast<std::size_t>(i0)] = (b[static_cast<std::size_t>(i0)] + b[static_cast<std::size_t>(j0)]) % p;
            continue;
        }
        std::int64_t a = A[static_cast<std::size_t>(piv)][static_cast<std::size_t>(piv)] % p;
        std::int64_t ainv = inv_mod_prime(a, p);
        for (int j : act) {
            if (j == piv) continue;
            std::int64_t c = A[static_cast<std::size_t>(piv)][static_cast<std::size_t>(j)] % p;
            if (c == 0) continue;
            std::int64_t f = mulmod(c, ainv, p);
            for (int t = 0; t < n; ++t)
                A[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)] =
                    ((A[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)] -
                      mulmod(f, A[static_cast<std::size_t>(piv)][static_cast<std::size_t>(t)], p)) % p + p) % p;
            for (int t = 0; t < n; ++t)
                A[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] =
                    ((A[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] -
                      mulmod(f, A[static_cast<std::size_t>(t)][static_cast<std::size_t>(piv)], p)) % p + p) % p;
            b[static_cast<std::size_t>(j)] =
                ((b[static_cast<std::size_t>(j)] - mulmod(f, b[static_cast<std::size_t>(piv)], p)) % p + p) % p;
        }
        diag.push_back(a);
        lin.push_back(b[static_cast<std::size_t>(piv)] % p);
        act.erase(std::find(act.begin(), act.end(), piv));
    }
}

// Distribution of sum_i (a_i x_i^2 + l_i x_i) mod p in closed form.  A
// distribution is either  A + B*chi(c*(v-w))  or  A + B*delta_{v,w};
// convolving in one chi-type variable flips between the two via the
// standard Jacobi-sum evaluation sum_t chi(t)chi(z-t).
Int shape_count(const std::vector<std::int64_t>& diag, const std::vector<std::int64_t>& lin,
                std::int64_t Nmod, std::int64_t p) {
    bool is_delta = true;  // start as delta at 0
    Int A = 0, B = 1;
    std::int64_t c = 1, w = 0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        std::int64_t a = ((diag[i] % p) + p) % p;
        std::int64_t l = ((lin[i] % p) + p) % p;
        if (a == 0 && l == 0) {
            A *= p;
            B *= p;
        } else if (a == 0) {
            // uniform variable: everything flattens to the total mass
            Int total = A * p;
            if (is_delta) total += B;
            A = total;
            B = 0;
            c = 1;
            w = 0;
            is_delta = false;
        } else {
            // a x^2 + l x = a (x + l/2a)^2 - l^2/(4a): value distribution
            // 1 + chi(a (v - e)) with e = -l^2/(4a)
            std::int64_t e = 0;
            if (l != 0) {
                std::int64_t inv4a = inv_mod_prime(4 * a % p, p);
                e = (p - mulmod(mulmod(l, l, p), inv4a, p)) % p;
            }
            if (is_delta) {
                Int A2 = A * p + B;
                // delta_w * (1 + chi(a(v-e))) = 1 + chi(a(v-w-e)), weighted by B
                is_delta = false;
                c = a;
                w = (w + e) % p;
                A = A2;
                // B unchanged
            } else if (B == 0) {
                A *= p;
            } else {
                int s = legendre(mulmod(c, a, p), p) * legendre(p - 1, p);
                Int A2 = A * p - B * s;
                Int B2 = B * s * p;
                is_delta = true;
                w = (w + e) % p;
                A = A2;
                B = B2;
            }
        }
    }
    std::int64_t v = ((-Nmod) % p + p) % p;
    if (is_delta) return v == w ? A + B : A;
    return A + B * legendre(mulmod(c, (v - w + p) % p, p), p);
}

struct SingularPoint {
    bool unique = false;
    std::vector<std::int64_t> x;  // representative in [0,p)
};

// Solve 2Q x == -L mod p; unique iff 2Q invertible mod p.
SingularPoint solve_singular(const QuadraticPolynomial& F, const std::vector<Int>& L,
                             std::int64_t p) {
    int n = F.n;
    std::vector<std::vector<std::int64_t>> M(static_cast<std::size_t>(n),
                                             std::vector<std::int64_t>(static_cast<std::size_t>(n) + 1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                mod_i64(2 * F.Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], p);
        M[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)] = mod_i64(-L[static_cast<std::size_t>(i)], p);
    }
    int rank = 0;
    std::vector<int> pivcol;
    for (int cidx = 0; cidx < n; ++cidx) {
        int pr = -1;
        for (int r = rank; r < n; ++r)
            if (M[static_cast<std::size_t>(r)][static_cast<std::size_t>(cidx)] % p != 0) { pr = r; break; }
        if (pr < 0) continue;
        std::swap(M[static_cast<std::size_t>(rank)], M[static_cast<std::size_t>(pr)]);
        std::int64_t inv = inv_mod_prime(M[static_cast<std::size_t>(rank)][static_cast<std::size_t>(cidx)], p);
        for (int t = 0; t <= n; ++t)
            M[static_cast<std::size_t>(rank)][static_cast<std::size_t>(t)] =
                mulmod(M[static_cast<std::size_t>(rank)][static_cast<std::size_t>(t)], inv, p);
        for (int r = 0; r < n; ++r) {
            if (r == rank) continue;
            std::int64_t f = M[static_cast<std::size_t>(r)][static_cast<std::size_t>(cidx)] % p;
            if (f == 0) continue;
            for (int t = 0; t <= n; ++t)
                M[static_cast<std::size_t>(r)][static_cast<std::size_t>(t)] =
                    ((M[static_cast<std::size_t>(r)][static_cast<std::size_t>(t)] -
                      mulmod(f, M[static_cast<std::size_t>(rank)][static_cast<std::size_t>(t)], p)) % p + p) % p;
        }
        pivcol.push_back(cidx);
        ++rank;
    }
    SingularPoint sp;
    if (rank < n) return sp;  // not unique (or empty) -- caller falls back
    sp.unique = true;
    sp.x.assign(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < rank; ++i)
        sp.x[static_cast<std::size_t>(pivcol[static_cast<std::size_t>(i)])] =
            M[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)] % p;
    return sp;
}

Int evaluate_with(const QuadraticPolynomial& F, const std::vector<Int>& L, const Int& N,
                  const std::vector<Int>& x) {
    Int v = N;
    for (int i = 0; i < F.n; ++i) {
        v += L[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
        for (int j = 0; j < F.n; ++j)
            v += F.Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                 x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
    }
    return v;
}

Int count_prime(const QuadraticPolynomial& F, const std::vector<Int>& L, const Int& N,
                std::int64_t p) {
    int n = F.n;
    if (p == 2) {
        Int cnt = 0;
        std::vector<Int> x(static_cast<std::size_t>(n), 0);
        for (std::int64_t mask = 0; mask < (1ll << n); ++mask) {
            for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = (mask >> i) & 1;
            if (evaluate_with(F, L, N, x) % 2 == 0) ++cnt;
        }
        return cnt;
    }
    // diagonalize the quadratic+linear part; the helper reads F.L, so build a
    // temporary polynomial view via a shifted copy when L differs.
    QuadraticPolynomial G = F;
    G.L = L;
    G.N = 0;
    std::vector<std::int64_t> diag, lin;
    diagonalize_mod_p(G, p, diag, lin);
    return shape_count(diag, lin, mod_i64(N, p), p);
}

// Counts {x mod p^l : F(x) == 0 mod p^l} for odd p with 2Q invertible mod p,
// by splitting lifts at the unique singular point x*:
//   F(x* + p y) = F(x*) + p^2 G(y),  G(y) = y^T Q y + (grad F(x*)/p) . y
// Nonsingular solutions lift p^{n-1}-fold per level; the singular tower
// descends into G two levels down.  The chain of derived polynomials (same
// Q, new linear/constant parts) is built once and counted bottom-up.
Int count_pp_odd(const QuadraticPolynomial& F, const std::vector<Int>& L0, const Int& N0,
                 std::int64_t p, int l) {
    if (l == 0) return 1;
    if (l == 1) return count_prime(F, L0, N0, p);
    int n = F.n;

    struct ChainLink {
        std::vector<Int> L;
        Int N;
        bool div_p = false;   // p  | F(x*)
        bool div_p2 = false;  // p^2 | F(x*)
    };
    std::vector<ChainLink> chain;
    chain.push_back({L0, N0, false, false});
    Int p2 = Int(p) * p;
    for (int depth = 0; 2 * depth < l; ++depth) {
        ChainLink& link = chain[static_cast<std::size_t>(depth)];
        SingularPoint sp = solve_singular(F, link.L, p);
        if (!sp.unique) throw DomainError("count_pp_odd: 2Q not invertible mod p");
        std::vector<Int> xs(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = sp.x[static_cast<std::size_t>(i)];
        Int v = evaluate_with(F, link.L, link.N, xs);
        link.div_p = (v % p == 0);
        link.div_p2 = (v % p2 == 0);
        if (!link.div_p2) break;  // the singular tower ends here
        std::vector<Int> g(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            Int gi = link.L[static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j)
                gi += 2 * F.Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                      xs[static_cast<std::size_t>(j)];
            if (gi % p != 0) throw Error("count_pp_odd: gradient not divisible at singular point");
            g[static_cast<std::size_t>(i)] = gi / p;
        }
        chain.push_back({std::move(g), v / p2, false, false});
    }

    Int pn1 = pow_int(p, n - 1);
    Int pn = pow_int(p, n);
    // cnt[i][j] = #{y mod p^j : F_i(y) == 0 mod p^j} for chain element i,
    // needed up to level l - 2i; built from the deepest element upward.
    int depth_max = static_cast<int>(chain.size()) - 1;
    std::vector<std::vector<Int>> cnt(chain.size());
    for (int i = depth_max; i >= 0; --i) {
        int levels = l - 2 * i;
        auto& c = cnt[static_cast<std::size_t>(i)];
        c.assign(static_cast<std::size_t>(std::max(levels, 0)) + 1, Int(0));
        c[0] = 1;
        if (levels >= 1) c[1] = count_prime(F, chain[static_cast<std::size_t>(i)].L,
                                            chain[static_cast<std::size_t>(i)].N, p);
        const ChainLink& link = chain[static_cast<std::size_t>(i)];
        for (int j = 2; j <= levels; ++j) {
            auto child = [&](int m) -> Int {
                if (m == 0) return 1;
                return cnt[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(m)];
            };
            Int A;  // singular solutions mod p^{j-1}
            if (j - 1 == 1) A = link.div_p ? 1 : 0;
            else A = link.div_p2 ? pn * child(j - 3) : Int(0);
            Int B = link.div_p2 ? child(j - 2) : Int(0);
            c[static_cast<std::size_t>(j)] = pn1 * (c[static_cast<std::size_t>(j) - 1] - A) + pn * B;
        }
    }
    return cnt[0][static_cast<std::size_t>(l)];
}

std::vector<std::uint64_t> memo2_key(const std::vector<Int>& L, const Int& N, int l) {
    std::vector<std::uint64_t> key;
    key.reserve(L.size() + 1);
    std::int64_t m = std::int64_t(1) << l;  // l <= 62 enforced by caller
    for (const Int& x : L) key.push_back(static_cast<std::uint64_t>(mod_i64(x, m)));
    key.push_back(static_cast<std::uint64_t>(mod_i64(N, m)));
    return key;
}

}  // namespace

// p = 2 tower: gradient mod 2 equals L mod 2 everywhere.  With any odd L
// entry every point is nonsingular and each level lifts 2^{n-1}-fold;
// otherwise every point is singular and
//   F(h0 + 2y) = F(h0) + 4 (y^T Q y + (Q h0 + L/2) . y)
// branches over h0 in {0,1}^n with 4 | F(h0), two levels down.  Memoized on
// (L, N) mod 2^l; Q is fixed along the recursion.
Int count_pow2(const QuadraticPolynomial& F, const std::vector<Int>& L, const Int& N, int l,
               std::map<std::pair<std::vector<std::uint64_t>, int>, Int>& memo) {
    if (l == 0) return 1;
    if (l > 62) throw ResourceError("count_pow2: exponent too large");
    int n = F.n;
    auto key = std::make_pair(memo2_key(L, N, l), l);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    Int result;
    bool odd_entry = false;
    for (const Int& x : L)
        if (x % 2 != 0) { odd_entry = true; break; }
    if (l == 1) {
        result = count_prime(F, L, N, 2);
    } else if (odd_entry) {
        result = pow_int(2, n - 1) * count_pow2(F, L, N, l - 1, memo);
    } else {
        std::vector<Int> lam(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) lam[static_cast<std::size_t>(i)] = L[static_cast<std::size_t>(i)] / 2;
        Int total = 0;
        std::vector<Int> h0(static_cast<std::size_t>(n));
        for (std::int64_t mask = 0; mask < (1ll << n); ++mask) {
            for (int i = 0; i < n; ++i) h0[static_cast<std::size_t>(i)] = (mask >> i) & 1;
            Int v = evaluate_with(F, L, N, h0);
            if (v % 4 != 0) continue;
            std::vector<Int> g(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                Int gi = lam[static_cast<std::size_t>(i)];
                for (int j = 0; j < n; ++j)
                    gi += F.Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * h0[static_cast<std::size_t>(j)];
                g[static_cast<std::size_t>(i)] = gi;
            }
            total += count_pow2(F, g, v / 4, l - 2, memo);
        }
        result = pow_int(2, n) * total;
    }
    memo.emplace(std::move(key), result);
    return result;
}

Int rho_count_brute(const QuadraticPolynomial& F, std::int64_t p, int l, std::uint64_t op_cap) {
    if (l == 0) return 1;
    int n = F.n;
    double ops = std::pow(static_cast<double>(p), static_cast<double>(l) * n);
    if (ops > static_cast<double>(op_cap)) throw ResourceError("rho brute force: modulus too large");
    std::int64_t q = 1;
    for (int i = 0; i < l; ++i) q *= p;
    // reduced int64 coefficients; accumulate in __int128
    std::vector<std::vector<std::int64_t>> Qm(static_cast<std::size_t>(n),
                                              std::vector<std::int64_t>(static_cast<std::size_t>(n)));
    std::vector<std::int64_t> Lm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Lm[static_cast<std::size_t>(i)] = mod_i64(F.L[static_cast<std::size_t>(i)], q);
        for (int j = 0; j < n; ++j)
            Qm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                mod_i64(F.Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], q);
    }
    std::int64_t Nm = mod_i64(F.N, q);
    std::vector<std::int64_t> x(static_cast<std::size_t>(n), 0);
    Int cnt = 0;
    for (;;) {
        __int128 v = Nm;
        for (int i = 0; i < n; ++i) {
            v += static_cast<__int128>(Lm[static_cast<std::size_t>(i)]) * x[static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j)
                v += static_cast<__int128>(Qm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) *
                     x[static_cast<std::size_t>(i)] % q * x[static_cast<std::size_t>(j)];
        }
        if (v % q == 0) ++cnt;
        int axis = n - 1;
        while (axis >= 0) {
            if (++x[static_cast<std::size_t>(axis)] < q) break;
            x[static_cast<std::size_t>(axis)] = 0;
            --axis;
        }
        if (axis < 0) break;
    }
    return cnt;
}

namespace {

// Spec'd lifting path: solutions mod p^j enumerated as fibers over solutions
// mod p^{j-1}, each fiber scanned over the p^n offsets.
Int count_lift(const QuadraticPolynomial& F, std::int64_t p, int l, const RhoOptions& opts) {
    int n = F.n;
    double pn = std::pow(static_cast<double>(p), n);
    if (pn > static_cast<double>(opts.op_cap)) throw ResourceError("lifting: p^n too large");
    std::int64_t q = 1;
    for (int i = 0; i < l; ++i) {
        if (q > (1ll << 40) / p) throw ResourceError("lifting: modulus too large");
        q *= p;
    }
    std::vector<std::int64_t> Lm(static_cast<std::size_t>(n));
    std::vector<std::vector<std::int64_t>> Qm(static_cast<std::size_t>(n),
                                              std::vector<std::int64_t>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
        Lm[static_cast<std::size_t>(i)] = mod_i64(F.L[static_cast<std::size_t>(i)], q);
        for (int j = 0; j < n; ++j)
            Qm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                mod_i64(F.Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], q);
    }
    std::int64_t Nm = mod_i64(F.N, q);
    auto eval_mod = [&](const std::vector<std::int64_t>& x, std::int64_t m) -> std::int64_t {
        __int128 v = Nm % m;
        for (int i = 0; i < n; ++i) {
            v += static_cast<__int128>(Lm[static_cast<std::size_t>(i)] % m) * (x[static_cast<std::size_t>(i)] % m);
            for (int j = 0; j < n; ++j)
                v += static_cast<__int128>(Qm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] % m) *
                     (x[static_cast<std::size_t>(i)] % m) % m * (x[static_cast<std::size_t>(j)] % m);
        }
        std::int64_t r = static_cast<std::int64_t>(v % m);
        return r < 0 ? r + m : r;
    };

    std::uint64_t ops = 0;
    auto charge = [&](std::uint64_t c) {
        ops += c;
        if (ops > opts.op_cap) throw ResourceError("lifting: op cap exceeded (modulus too large)");
    };

    // level 1 by scanning [0,p)^n
    std::vector<std::vector<std::int64_t>> sols;
    {
        std::vector<std::int64_t> x(static_cast<std::size_t>(n), 0);
        for (;;) {
            charge(1);
            if (eval_mod(x, p) == 0) sols.push_back(x);
            int axis = n - 1;
            while (axis >= 0) {
                if (++x[static_cast<std::size_t>(axis)] < p) break;
                x[static_cast<std::size_t>(axis)] = 0;
                --axis;
            }
            if (axis < 0) break;
        }
    }
    if (l == 1) return Int(sols.size());

    std::int64_t pj = p;  // modulus of current level
    for (int level = 2; level <= l; ++level) {
        std::int64_t pnext = pj * p;
        bool keep = level < l;  // final level is only counted
        std::vector<std::vector<std::int64_t>> next;
        Int cnt = 0;
        std::vector<std::int64_t> t(static_cast<std::size_t>(n), 0);
        for (const auto& h : sols) {
            std::fill(t.begin(), t.end(), 0);
            for (;;) {
                charge(1);
                std::vector<std::int64_t> hp(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i)
                    hp[static_cast<std::size_t>(i)] = h[static_cast<std::size_t>(i)] + pj * t[static_cast<std::size_t>(i)];
                if (eval_mod(hp, pnext) == 0) {
                    ++cnt;
                    if (keep) {
                        next.push_back(std::move(hp));
                        if (next.size() > opts.entry_cap)
                            throw ResourceError("lifting: entry cap exceeded (modulus too large)");
                    }
                }
                int axis = n - 1;
                while (axis >= 0) {
                    if (++t[static_cast<std::size_t>(axis)] < p) break;
                    t[static_cast<std::size_t>(axis)] = 0;
                    --axis;
                }
                if (axis < 0) break;
            }
        }
        if (!keep) return cnt;
        sols = std::move(next);
        pj = pnext;
    }
    return Int(sols.size());
}

// Value-distribution convolution for diagonal F modulo arbitrary q (used for
// any diagonal form; also an oracle for the structural recursions).
Int count_convolution(const QuadraticPolynomial& F, std::int64_t q, const RhoOptions& opts) {
    if (!F.is_diagonal()) throw DomainError("convolution counter requires diagonal Q");
    if (q > opts.conv_modulus_cap) throw ResourceError("convolution: modulus too large");
    int n = F.n;
    std::vector<unsigned __int128> D(static_cast<std::size_t>(q), 0);
    D[0] = 1;
    std::vector<std::uint32_t> T(static_cast<std::size_t>(q));
    for (int i = 0; i < n; ++i) {
        std::fill(T.begin(), T.end(), 0);
        std::int64_t a = mod_i64(F.Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)], q);
        std::int64_t b = mod_i64(F.L[static_cast<std::size_t>(i)], q);
        for (std::int64_t x = 0; x < q; ++x)
            ++T[static_cast<std::size_t>(static_cast<std::int64_t>(
                (static_cast<__int128>(a) * x % q * x + static_cast<__int128>(b) * x) % q))];
        std::vector<unsigned __int128> E(static_cast<std::size_t>(q), 0);
        for (std::int64_t u = 0; u < q; ++u) {
            if (D[static_cast<std::size_t>(u)] == 0) continue;
            unsigned __int128 du = D[static_cast<std::size_t>(u)];
            for (std::int64_t v = 0; v < q; ++v) {
                if (T[static_cast<std::size_t>(v)] == 0) continue;
                std::int64_t w = u + v;
                if (w >= q) w -= q;
                E[static_cast<std::size_t>(w)] += du * T[static_cast<std::size_t>(v)];
            }
        }
        D = std::move(E);
    }
    std::int64_t target = (q - mod_i64(F.N, q)) % q;
    unsigned __int128 r = D[static_cast<std::size_t>(target)];
    Int out = static_cast<std::uint64_t>(r >> 64);
    out <<= 64;
    out += static_cast<std::uint64_t>(r);
    return out;
}

}  // namespace

LocalCounter::LocalCounter(const QuadraticPolynomial& F, RhoOptions opts) : F_(F), opts_(opts) {}

Int LocalCounter::count(std::int64_t p, int l, RhoStrategy strategy) {
    if (l == 0) return 1;
    auto key = std::make_pair(p, l);
    if (strategy == RhoStrategy::auto_select) {
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    Int result;
    switch (strategy) {
        case RhoStrategy::brute:
            result = rho_count_brute(F_, p, l, opts_.op_cap);
            break;
        case RhoStrategy::lift:
            result = count_lift(F_, p, l, opts_);
            break;
        case RhoStrategy::convolution: {
            std::int64_t q = 1;
            for (int i = 0; i < l; ++i) q *= p;
            result = count_convolution(F_, q, opts_);
            break;
        }
        case RhoStrategy::auto_select: {
            if (p == 2) {
                result = count_pow2(F_, F_.L, F_.N, l, memo2_);
            } else if (l == 1) {
                result = count_prime(F_, F_.L, F_.N, p);
            } else if (F_.det_q() % p != 0) {
                result = count_pp_odd(F_, F_.L, F_.N, p, l);
            } else {
                // odd p dividing det Q: structural recursion unavailable
                double qd_ = std::pow(static_cast<double>(p), l);
                if (F_.is_diagonal() && qd_ <= static_cast<double>(opts_.conv_modulus_cap)) {
                    std::int64_t q = 1;
                    for (int i = 0; i < l; ++i) q *= p;
                    result = count_convolution(F_, q, opts_);
                } else {
                    result = count_lift(F_, p, l, opts_);
                }
            }
            break;
        }
    }
    if (strategy == RhoStrategy::auto_select) cache_.emplace(key, result);
    return result;
}

LocalDensity LocalCounter::rho(std::int64_t p, int l, RhoStrategy strategy) {
    if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) throw DomainError("rho: p must be prime");
    if (l < 0) throw DomainError("rho: l must be >= 0");
    LocalDensity d;
    d.p = p;
    d.l = l;
    d.q = pow_int(p, l);
    d.count = count(p, l, strategy);
    Int denom = 1;
    for (int i = 0; i < (F_.n - 1) * l; ++i) denom *= p;
    d.rho = Rat(d.count, denom);
    return d;
}

Rat LocalCounter::s_f_prime_power(std::int64_t p, int m) {
    if (m < 1) throw DomainError("s_f_prime_power: m >= 1");
    return rho(p, m).rho - rho(p, m - 1).rho;
}

Rat LocalCounter::s_f(const Int& q) {
    if (q < 1) throw DomainError("s_f: q >= 1");
    Rat prod = 1;
    for (const auto& [pp, e] : factorize(q).pairs)
        prod *= s_f_prime_power(static_cast<std::int64_t>(pp), e);
    return prod;
}

LocalDensity rho(const QuadraticPolynomial& F, std::int64_t p, int l, RhoOptions opts) {
    LocalCounter c(F, opts);
    return c.rho(p, l);
}

GaussSumValue gauss_sum(const QuadraticPolynomial& F, const Int& q, const Int& a,
                        std::uint64_t op_cap) {
    if (q < 1) throw DomainError("gauss_sum: q >= 1");
    if (boost::multiprecision::gcd(Int(a), Int(q)) != 1)
        throw DomainError("gauss_sum: a must be coprime to q");
    if (q == 1) return {q, a, Complex(1.0, 0.0)};

    auto base = [&](std::int64_t qq, std::int64_t aa) -> Complex {
        int n = F.n;
        double ops = 1.0;
        for (int i = 0; i < n; ++i) ops *= static_cast<double>(qq);
        if (ops > static_cast<double>(op_cap)) throw ResourceError("gauss_sum: q^n too large");
        std::vector<Complex> roots(static_cast<std::size_t>(qq));
        for (std::int64_t r = 0; r < qq; ++r) {
            double ang = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(qq);
            roots[static_cast<std::size_t>(r)] = Complex(std::cos(ang), std::sin(ang));
        }
        std::vector<std::vector<std::int64_t>> Qm(static_cast<std::size_t>(n),
                                                  std::vector<std::int64_t>(static_cast<std::size_t>(n)));
        std::vector<std::int64_t> Lm(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            Lm[static_cast<std::size_t>(i)] = mod_i64(F.L[static_cast<std::size_t>(i)], qq);
            for (int j = 0; j < n; ++j)
                Qm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    mod_i64(F.Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], qq);
        }
        std::int64_t Nm = mod_i64(F.N, qq);
        Complex acc = 0.0;
        std::vector<std::int64_t> x(static_cast<std::size_t>(n), 0);
        for (;;) {
            __int128 v = Nm;
            for (int i = 0; i < n; ++i) {
                v += static_cast<__int128>(Lm[static_cast<std::size_t>(i)]) * x[static_cast<std::size_t>(i)];
                for (int j = 0; j < n; ++j)
                    v += static_cast<__int128>(Qm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) *
                         x[static_cast<std::size_t>(i)] % qq * x[static_cast<std::size_t>(j)];
            }
            std::int64_t r = static_cast<std::int64_t>((static_cast<__int128>(aa) * (v % qq)) % qq);
            if (r < 0) r += qq;
            acc += roots[static_cast<std::size_t>(r)];
            int axis = n - 1;
            while (axis >= 0) {
                if (++x[static_cast<std::size_t>(axis)] < qq) break;
                x[static_cast<std::size_t>(axis)] = 0;
                --axis;
            }
            if (axis < 0) break;
        }
        return acc;
    };

    // CRT over prime powers: with q = q1 q2, gcd(q1,q2)=1 and
    // 1/(q1 q2) = u/q1 + v/q2 (u q2 + v q1 = 1):
    // S_F(q, a) = S_F(q1, a u) S_F(q2, a v).
    Complex value(1.0, 0.0);
    Factorization fac = factorize(q);
    for (const auto& [pp, e] : fac.pairs) {
        Int qi = 1;
        for (int i = 0; i < e; ++i) qi *= pp;
        Int rest = q / qi;
        // u = rest^{-1} mod qi
        Int u = 1;
        {
            // extended Euclid on (rest mod qi, qi)
            Int r0 = qi, r1 = rest % qi, s0 = 0, s1 = 1;
            while (r1 != 0) {
                Int qq = r0 / r1;
                Int r2 = r0 - qq * r1;
                Int s2 = s0 - qq * s1;
                r0 = r1; r1 = r2; s0 = s1; s1 = s2;
            }
            u = s0 % qi;
            if (u < 0) u += qi;
        }
        Int ai = (a % qi) * u % qi;
        if (ai < 0) ai += qi;
        value *= base(static_cast<std::int64_t>(qi), static_cast<std::int64_t>(ai));
    }
    return {q, a, value};
}

Rat s_f(const QuadraticPolynomial& F, const Int& q, RhoOptions opts) {
    LocalCounter c(F, opts);
    return c.s_f(q);
}

Rat s_f_ramanujan_oracle(const QuadraticPolynomial& F, std::int64_t q, std::uint64_t op_cap) {
    if (q < 1) throw DomainError("s_f oracle: q >= 1");
    int n = F.n;
    double ops = 1.0;
    for (int i = 0; i < n; ++i) ops *= static_cast<double>(q);
    if (ops > static_cast<double>(op_cap)) throw ResourceError("s_f oracle: q^n too large");
    // Ramanujan sums c_q(v) = sum_{d | gcd(v,q)} d mu(q/d), exact integers
    auto basics = multiplicative_basics(Int(q));
    std::vector<Int> cq(static_cast<std::size_t>(q), 0);
    for (const Int& d : basics.divisors) {
        int mu = mobius(Int(q) / d);
        if (mu == 0) continue;
        std::int64_t dd = static_cast<std::int64_t>(d);
        for (std::int64_t v = 0; v < q; v += dd) cq[static_cast<std::size_t>(v)] += mu * d;
    }
    // histogram of F mod q
    std::vector<Int> hist(static_cast<std::size_t>(q), 0);
    std::vector<std::vector<std::int64_t>> Qm(static_cast<std::size_t>(n),
                                              std::vector<std::int64_t>(static_cast<std::size_t>(n)));
    std::vector<std::int64_t> Lm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Lm[static_cast<std::size_t>(i)] = mod_i64(F.L[static_cast<std::size_t>(i)], q);
        for (int j = 0; j < n; ++j)
            Qm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                mod_i64(F.Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], q);
    }
    std::int64_t Nm = mod_i64(F.N, q);
    std::vector<std::int64_t> x(static_cast<std::size_t>(n), 0);
    for (;;) {
        __int128 v = Nm;
        for (int i = 0; i < n; ++i) {
            v += static_cast<__int128>(Lm[static_cast<std::size_t>(i)]) * x[static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j)
                v += static_cast<__int128>(Qm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) *
                     x[static_cast<std::size_t>(i)] % q * x[static_cast<std::size_t>(j)];
        }
        std::int64_t r = static_cast<std::int64_t>(v % q);
        if (r < 0) r += q;
        ++hist[static_cast<std::size_t>(r)];
        int axis = n - 1;
        while (axis >= 0) {
            if (++x[static_cast<std::size_t>(axis)] < q) break;
            x[static_cast<std::size_t>(axis)] = 0;
            --axis;
        }
        if (axis < 0) break;
    }
    Int total = 0;
    for (std::int64_t v = 0; v < q; ++v) total += hist[static_cast<std::size_t>(v)] * cq[static_cast<std::size_t>(v)];
    Int qn = 1;
    for (int i = 0; i < n; ++i) qn *= q;
    return Rat(total, qn);
}

Complex s_f_complex_oracle(const QuadraticPolynomial& F, std::int64_t q, std::uint64_t op_cap) {
    if (q < 1) throw DomainError("s_f oracle: q >= 1");
    Complex acc = 0.0;
    double qn = std::pow(static_cast<double>(q), F.n);
    for (std::int64_t a = 1; a <= q; ++a) {
        if (std::gcd(a, q) != 1) continue;
        acc += gauss_sum(F, Int(q), Int(a), op_cap).value / qn;
    }
    return acc;
}

}  // namespace qd
