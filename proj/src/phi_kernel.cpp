#include "quaddivisor/phi_kernel.hpp"

#include "quaddivisor/arith.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace qd {

namespace {

// squarefree divisors of m coprime to c, as (value, mu) pairs
std::vector<std::pair<Int, int>> squarefree_divisors_coprime(const Int& m, const Int& c) {
    std::vector<std::pair<Int, int>> out{{Int(1), 1}};
    for (const auto& [p, e] : factorize(m).pairs) {
        (void)e;
        if (c % p == 0) continue;
        std::size_t sz = out.size();
        for (std::size_t i = 0; i < sz; ++i) out.emplace_back(out[i].first * p, -out[i].second);
    }
    return out;
}

// Accumulates integer weights sum mu(t_1)...mu(t_k) per product t_1...t_k
// over the nested factorization sum; the (q/delta)-coprimality constraint
// applies to each t_i.
void inner_sum_weights(int k, const Int& delta, const Int& coprime_to,
                       std::map<Int, long long>& weights) {
    ordered_factorizations(delta, k, [&](const std::vector<Int>& d) {
        // suffix products prod_{j>i} d_j
        std::vector<Int> suffix(static_cast<std::size_t>(k) + 1, Int(1));
        for (int i = k - 1; i >= 0; --i)
            suffix[static_cast<std::size_t>(i)] =
                suffix[static_cast<std::size_t>(i) + 1] * d[static_cast<std::size_t>(i)];
        // t_i ranges over squarefree divisors of suffix[i+1] coprime to q/delta
        std::vector<std::vector<std::pair<Int, int>>> choices;
        choices.reserve(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i)
            choices.push_back(squarefree_divisors_coprime(suffix[static_cast<std::size_t>(i) + 1], coprime_to));
        std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
        for (;;) {
            Int prod = 1;
            int mu = 1;
            for (int i = 0; i < k; ++i) {
                const auto& [tv, tm] = choices[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
                prod *= tv;
                mu *= tm;
            }
            weights[prod] += mu;
            int axis = k - 1;
            while (axis >= 0) {
                if (++idx[static_cast<std::size_t>(axis)] < choices[static_cast<std::size_t>(axis)].size()) break;
                idx[static_cast<std::size_t>(axis)] = 0;
                --axis;
            }
            if (axis < 0) break;
        }
    });
}

template <class Ring, class PowMinusS>
Ring f_k_generic(int k, const Int& q, const Int& delta, const PowMinusS& pow_minus_s,
                 const Ring& one) {
    if (delta < 1 || q % delta != 0) throw DomainError("f_k: delta must divide q");
    Int m = q / delta;
    auto mb = multiplicative_basics(m);

    // (sum_{d | q/delta} mu(d)/d^s)^k
    Ring moebius_sum = one * Complex(0.0);
    for (const auto& [d, mu] : squarefree_divisors_coprime(m, Int(1)))
        moebius_sum += pow_minus_s(d) * Complex(static_cast<double>(mu));
    Ring acc = one;
    for (int i = 0; i < k; ++i) acc *= moebius_sum;

    // inner double factorization sum
    std::map<Int, long long> weights;
    inner_sum_weights(k, delta, m, weights);
    Ring inner = one * Complex(0.0);
    for (const auto& [t, w] : weights) {
        if (w == 0) continue;
        inner += pow_minus_s(t) * Complex(static_cast<double>(w));
    }
    acc *= inner;

    // 1/(phi(q/delta) delta^s)
    acc *= pow_minus_s(delta);
    acc *= Complex(1.0 / to_double(mb.phi));
    return acc;
}

std::mutex fk_mutex;
std::map<std::tuple<int, std::int64_t, std::int64_t, int>, SeriesJet> fk_cache;

// Phi_k(p^m, s) closed form as a generic ring element:
//   p^{-ms} ( sum_{v=1..k} (1-p^{-s})^{v-1} tau_v(p^{m-1})
//             - tau_k(p^{m-1}) p^s (1-p^{-s})^k / (p-1) )
template <class Ring, class PowMinusS, class PowPlusS>
Ring phi_prime_power_generic(int k, std::int64_t p, int m, const PowMinusS& pow_minus_s,
                             const PowPlusS& pow_plus_s, const Ring& one) {
    Int pm = 1;
    for (int i = 0; i < m; ++i) pm *= p;
    Ring one_minus = one - pow_minus_s(Int(p));
    Ring sum = one * Complex(0.0);
    Ring pw = one;
    for (int v = 1; v <= k; ++v) {
        sum += pw * Complex(static_cast<double>(tau_k_prime_power(v, m - 1)));
        pw *= one_minus;
    }
    // pw now holds (1-p^{-s})^k
    Ring corr = pow_plus_s(Int(p)) * pw *
                Complex(static_cast<double>(tau_k_prime_power(k, m - 1)) / static_cast<double>(p - 1));
    return pow_minus_s(pm) * (sum - corr);
}

}  // namespace

SeriesJet f_k_jet(int k, const Int& q, const Int& delta, int order) {
    if (k < 1) throw DomainError("f_k: k >= 1");
    auto key = std::make_tuple(k, to_i64(q), to_i64(delta), order);
    {
        std::lock_guard<std::mutex> g(fk_mutex);
        auto it = fk_cache.find(key);
        if (it != fk_cache.end()) return it->second;
    }
    auto pow_minus_s = [order](const Int& v) {
        return SeriesJet::power_minus_s(order, to_double(v));
    };
    SeriesJet jet = f_k_generic<SeriesJet>(k, q, delta, pow_minus_s, SeriesJet::constant(order, 1.0));
    std::lock_guard<std::mutex> g(fk_mutex);
    fk_cache.emplace(key, jet);
    return jet;
}

Complex f_k_value(int k, const Int& q, const Int& delta, Complex s) {
    auto pow_minus_s = [s](const Int& v) { return std::exp(-s * std::log(to_double(v))); };
    return f_k_generic<Complex>(k, q, delta, pow_minus_s, Complex(1.0));
}

Complex f_k_inner_sum_value(int k, const Int& delta, const Int& coprime_to, Complex s) {
    std::map<Int, long long> weights;
    inner_sum_weights(k, delta, coprime_to, weights);
    Complex acc = 0.0;
    for (const auto& [t, w] : weights)
        acc += static_cast<double>(w) * std::exp(-s * std::log(to_double(t)));
    return acc;
}

SeriesJet phi_jet(int k, const Int& q, int order, PhiMode mode) {
    if (q < 1) throw DomainError("phi_jet: q >= 1");
    if (q == 1) return SeriesJet::constant(order, 1.0);
    if (mode == PhiMode::definition) {
        SeriesJet acc(order);
        for (const auto& [d, mu] : squarefree_divisors_coprime(q, Int(1)))
            acc += Complex(static_cast<double>(mu)) * f_k_jet(k, q, q / d, order);
        return acc;
    }
    SeriesJet acc = SeriesJet::constant(order, 1.0);
    auto pow_minus_s = [order](const Int& v) { return SeriesJet::power_minus_s(order, to_double(v)); };
    auto pow_plus_s = [order](const Int& v) { return SeriesJet::power_plus_s(order, to_double(v)); };
    for (const auto& [p, e] : factorize(q).pairs)
        acc *= phi_prime_power_generic<SeriesJet>(k, static_cast<std::int64_t>(p), e, pow_minus_s,
                                                  pow_plus_s, SeriesJet::constant(order, 1.0));
    return acc;
}

Complex phi_value(int k, const Int& q, Complex s) {
    if (q < 1) throw DomainError("phi_value: q >= 1");
    Complex acc = 1.0;
    auto pow_minus_s = [s](const Int& v) { return std::exp(-s * std::log(to_double(v))); };
    auto pow_plus_s = [s](const Int& v) { return std::exp(s * std::log(to_double(v))); };
    for (const auto& [p, e] : factorize(q).pairs)
        acc *= phi_prime_power_generic<Complex>(k, static_cast<std::int64_t>(p), e, pow_minus_s,
                                                pow_plus_s, Complex(1.0));
    return acc;
}

BetaCoefficient beta_coefficient(int k, int r, const Int& q) {
    if (r < 0 || r >= k) throw DomainError("beta_coefficient: need 0 <= r < k");
    int order = default_jet_order(k);
    SeriesJet phi = phi_jet(k, q, order);
    double rfact = 1.0;
    for (int i = 2; i <= r; ++i) rfact *= i;
    double acc = 0.0;
    for (int t = 0; t <= k - r - 1; ++t) {
        // (1/t!) d^t Phi/ds^t = jet coefficient a_t
        acc += weighted_residue(k, r + t) * phi[t].real();
    }
    return BetaCoefficient{k, r, q, acc / rfact};
}

double ap_main_term(int k, double x, const Int& h, const Int& q) {
    if (x <= 1.0) throw DomainError("ap_main_term: x > 1 required");
    if (q < 1 || h < 1 || h > q) throw DomainError("ap_main_term: need 1 <= h <= q");
    Int delta = boost::multiprecision::gcd(h, q);
    int order = default_jet_order(k);
    // x^s / s = x e^{u log x} / (1 + u)
    SeriesJet xs = SeriesJet::power_plus_s(order, x);
    SeriesJet denom = SeriesJet::constant(order, 1.0);
    if (order >= 1) denom[1] = 1.0;
    SeriesJet jet = (xs / denom) * f_k_jet(k, q, delta, order);
    LaurentBlock zk = zeta_pow_laurent(k, 0);
    return residue_product(zk, jet);
}

}  // namespace qd
