#include "quaddivisor/zeta_laurent.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <mutex>
#include <numbers>

namespace qd {

namespace {

using BigFloat = boost::multiprecision::cpp_bin_float_50;

constexpr int kMaxStieltjes = 20;

std::vector<Rat>& bernoulli_cache() {
    static std::vector<Rat> cache{Rat(1), Rat(-1, 2)};
    return cache;
}

}  // namespace

Rat bernoulli(int n) {
    if (n < 0) throw DomainError("bernoulli: n >= 0");
    auto& cache = bernoulli_cache();
    static std::mutex mu;
    std::lock_guard<std::mutex> g(mu);
    while (static_cast<int>(cache.size()) <= n) {
        int m = static_cast<int>(cache.size());
        // sum_{j=0}^{m} C(m+1,j) B_j = 0
        Rat acc = 0;
        Int c = 1;  // C(m+1, j)
        for (int j = 0; j <= m - 1; ++j) {
            acc += Rat(c) * cache[static_cast<std::size_t>(j)];
            c = c * (m + 1 - j) / (j + 1);
        }
        cache.push_back(-acc / Rat(c));  // c = C(m+1, m) = m+1
    }
    return cache[static_cast<std::size_t>(n)];
}

namespace {

// Stieltjes constants by the defining limit with Euler-Maclaurin correction
// terms, in 50-digit arithmetic (the partial sum and the subtracted
// log^{n+1}M/(n+1) cancel to ~17 digits for n = 20).
std::vector<double> compute_stieltjes() {
    const int M = 4096;
    const int J = 16;
    std::vector<BigFloat> logpow(static_cast<std::size_t>(kMaxStieltjes) + 2);
    std::vector<BigFloat> sums(static_cast<std::size_t>(kMaxStieltjes) + 1, BigFloat(0));
    for (int k = 1; k <= M; ++k) {
        BigFloat lg = log(BigFloat(k));
        BigFloat pw = 1;
        BigFloat inv = BigFloat(1) / k;
        for (int n = 0; n <= kMaxStieltjes; ++n) {
            sums[static_cast<std::size_t>(n)] += pw * inv;
            pw *= lg;
        }
    }
    BigFloat logM = log(BigFloat(M));
    std::vector<double> out(static_cast<std::size_t>(kMaxStieltjes) + 1);
    for (int n = 0; n <= kMaxStieltjes; ++n) {
        BigFloat gamma = sums[static_cast<std::size_t>(n)];
        // - log^{n+1} M / (n+1)
        BigFloat lp = 1;
        for (int i = 0; i <= n; ++i) lp *= logM;
        gamma -= lp / (n + 1);
        // f(t) = log^n t / t;  derivatives tracked as coefficient vectors over
        // log^a t / t^{m+1}
        std::vector<BigFloat> coef(static_cast<std::size_t>(n) + 1, BigFloat(0));
        coef[static_cast<std::size_t>(n)] = 1;
        int m = 0;
        // f(M)/2
        {
            BigFloat fM = 0, lpw = 1;
            for (int a = 0; a <= n; ++a) {
                fM += coef[static_cast<std::size_t>(a)] * lpw;
                lpw *= logM;
            }
            fM /= M;
            gamma -= fM / 2;
        }
        for (int j = 1; j <= J; ++j) {
            // advance derivative from order m to 2j-1
            while (m < 2 * j - 1) {
                std::vector<BigFloat> next(coef.size(), BigFloat(0));
                for (int a = 0; a <= n; ++a) {
                    if (a + 1 <= n)
                        next[static_cast<std::size_t>(a)] += coef[static_cast<std::size_t>(a) + 1] * (a + 1);
                    next[static_cast<std::size_t>(a)] -= coef[static_cast<std::size_t>(a)] * (m + 1);
                }
                coef = std::move(next);
                ++m;
            }
            BigFloat fd = 0, lpw = 1;
            for (int a = 0; a <= n; ++a) {
                fd += coef[static_cast<std::size_t>(a)] * lpw;
                lpw *= logM;
            }
            BigFloat Mp = pow(BigFloat(M), m + 1);
            fd /= Mp;
            Rat b = bernoulli(2 * j);
            BigFloat bf = BigFloat(rat_num(b).str()) / BigFloat(rat_den(b).str());
            BigFloat fact = 1;
            for (int i = 2; i <= 2 * j; ++i) fact *= i;
            gamma -= bf / fact * fd;
        }
        out[static_cast<std::size_t>(n)] = static_cast<double>(gamma);
    }
    return out;
}

}  // namespace

const std::vector<double>& stieltjes_table() {
    static const std::vector<double> table = compute_stieltjes();
    return table;
}

double stieltjes_constant(int nidx) {
    if (nidx < 0 || nidx > kMaxStieltjes) throw DomainError("stieltjes_constant: need 0 <= n <= 20");
    return stieltjes_table()[static_cast<std::size_t>(nidx)];
}

double stieltjes_raw_partial_sum(int nidx, std::int64_t M) {
    double acc = 0.0, comp = 0.0;
    for (std::int64_t d = 1; d <= M; ++d) {
        double term = std::pow(std::log(static_cast<double>(d)), nidx) / static_cast<double>(d);
        double y = term - comp;
        double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    return acc - std::pow(std::log(static_cast<double>(M)), nidx + 1) / (nidx + 1);
}

LaurentBlock zeta_pow_laurent(int k, int d) {
    if (k < 1) throw DomainError("zeta_pow_laurent: k >= 1");
    if (d > 20) throw DomainError("zeta_pow_laurent: truncation order too large");
    // (s-1) zeta(s) = 1 + sum_{n>=0} (-1)^n gamma_n u^{n+1} / n!
    int order = k + d;
    SeriesJet g(order);
    g[0] = 1.0;
    double fact = 1.0;
    for (int n = 0; n + 1 <= order; ++n) {
        if (n > 0) fact *= n;
        if (n > kMaxStieltjes) break;
        g[n + 1] = ((n % 2 == 0) ? 1.0 : -1.0) * stieltjes_constant(n) / fact;
    }
    SeriesJet gk = pow_int(g, k);
    LaurentBlock out;
    out.pole_order = k;
    out.coeffs.resize(static_cast<std::size_t>(order) + 1);
    for (int i = 0; i <= order; ++i) out.coeffs[static_cast<std::size_t>(i)] = gk[i].real();
    return out;
}

LaurentBlock laurent_mul(const LaurentBlock& a, const LaurentBlock& b) {
    LaurentBlock out;
    out.pole_order = a.pole_order + b.pole_order;
    int top = std::min(a.top_order(), b.top_order());
    out.coeffs.assign(static_cast<std::size_t>(out.pole_order + top) + 1, 0.0);
    for (int i = -a.pole_order; i <= a.top_order(); ++i)
        for (int j = -b.pole_order; j <= b.top_order(); ++j) {
            int t = i + j;
            if (t > top) continue;
            out.coeffs[static_cast<std::size_t>(t + out.pole_order)] += a.coeff(i) * b.coeff(j);
        }
    return out;
}

double weighted_residue(int k, int w) {
    if (w < 0) throw DomainError("weighted_residue: w >= 0");
    if (w >= k) return 0.0;
    if (w == k - 1) return 1.0;  // leading coefficient of zeta^k is exactly 1
    LaurentBlock zk = zeta_pow_laurent(k, 0);
    return zk.coeff(-1 - w);
}

double residue_product(const LaurentBlock& zk, const SeriesJet& jet) {
    double acc = 0.0;
    for (int j = 0; j <= jet.order() && j < zk.pole_order; ++j)
        acc += zk.coeff(-1 - j) * jet[j].real();
    return acc;
}

Complex zeta_em(Complex s, int terms, int corrections) {
    if (s == Complex(1.0, 0.0)) throw DomainError("zeta_em: pole at s = 1");
    int M = terms;
    Complex acc = 0.0;
    for (int n = 1; n < M; ++n) acc += std::exp(-s * std::log(static_cast<double>(n)));
    Complex Ms = std::exp(-s * std::log(static_cast<double>(M)));
    acc += Ms * static_cast<double>(M) / (s - 1.0);
    acc += Ms * 0.5;
    // + sum_j B_{2j}/(2j)! * s(s+1)...(s+2j-2) * M^{-s-2j+1}
    Complex rising = s;                    // s(s+1)...(s+2j-2)
    double Mfac = 1.0 / M;                 // M^{1-2j}
    double fact = 2.0;                     // (2j)!
    Complex tail = 0.0;
    for (int j = 1; j <= corrections; ++j) {
        if (j > 1) {
            rising *= (s + Complex(2.0 * j - 3.0)) * (s + Complex(2.0 * j - 2.0));
            Mfac /= static_cast<double>(M) * M;
            fact *= (2.0 * j - 1.0) * (2.0 * j);
        }
        Rat b = bernoulli(2 * j);
        double bf = static_cast<double>(rat_num(b)) / static_cast<double>(rat_den(b));
        tail += bf / fact * rising * Ms * Mfac;
    }
    return acc + tail;
}

double contour_residue_oracle(int k, int w, double radius, int nodes) {
    Complex acc = 0.0;
    for (int m = 0; m < nodes; ++m) {
        double th = 2.0 * std::numbers::pi * m / nodes;
        Complex u = std::polar(radius, th);
        Complex s = Complex(1.0, 0.0) + u;
        Complex zk = std::pow(zeta_em(s), k);
        Complex uw = std::pow(u, w);
        acc += uw * zk * u;
    }
    acc /= static_cast<double>(nodes);
    return acc.real();
}

}  // namespace qd
