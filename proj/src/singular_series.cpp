#include "quaddivisor/singular_series.hpp"

#include "quaddivisor/arith.hpp"
#include "quaddivisor/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace qd {

namespace {

constexpr double kSummandTol = 1e-14;
constexpr int kHardCeiling = 200;  // absolute l-sum ceiling

double jet_norm(const SeriesJet& j) {
    double m = 0.0;
    for (const auto& c : j.coeffs) m = std::max(m, std::abs(c));
    return m;
}

// integral estimate of sum_{p > P} p^{-n/2} ~ int_P^inf dt/(t^{n/2} log t)
double prime_tail_integral(double P, int n) {
    // substitute t = P e^v; integrand dt/(t^{n/2} ln t) = P^{1-n/2} e^{v(1-n/2)} / (ln P + v) dv
    double acc = 0.0;
    const int steps = 2000;
    const double vmax = 60.0;
    double h = vmax / steps;
    for (int i = 0; i <= steps; ++i) {
        double v = i * h;
        double w = (i == 0 || i == steps) ? 0.5 : 1.0;
        acc += w * std::exp(v * (1.0 - n / 2.0)) / (std::log(P) + v);
    }
    return acc * h * std::pow(P, 1.0 - n / 2.0);
}

}  // namespace

DensityFn density_from(LocalCounter& counter) {
    return [&counter](std::int64_t p, int l) { return counter.rho(p, l).rho; };
}

LocalFactorResult local_factor_jet(const DensityFn& rho, int k, std::int64_t p, int order,
                                   int lmax) {
    if (lmax < 2) throw DomainError("local_factor_jet: lmax >= 2");
    LocalFactorResult out;
    SeriesJet p_s_minus1 = SeriesJet::exponential(order, std::log(static_cast<double>(p)));
    SeriesJet sum = SeriesJet::constant(order, 1.0);  // l = 0 term
    double pl = 1.0;
    int l = 1;
    for (; l <= kHardCeiling; ++l) {
        pl *= static_cast<double>(p);
        Rat rl;
        try {
            rl = rho(p, l);
        } catch (const ResourceError&) {
            if (l <= lmax) throw;
            // stop here; bound the dropped tail by a geometric estimate of the
            // last available summand scale
            double tk = static_cast<double>(tau_k_prime_power(k, l));
            out.tail_bound += 2.0 * tk / pl;
            break;
        }
        double rd = to_double(rl);
        double tk = static_cast<double>(tau_k_prime_power(k, l));
        double tk1 = static_cast<double>(tau_k_prime_power(k, l - 1));
        SeriesJet term = SeriesJet::constant(order, tk) - p_s_minus1 * Complex(tk1);
        term = term * SeriesJet::power_minus_s(order, pl) * Complex(rd);
        sum += term;
        double scale = std::max(std::abs(sum[0].real()), 1e-3);
        if (l >= 2 && jet_norm(term) < kSummandTol * scale && rd * (tk + tk1) / pl < kSummandTol * scale)
            break;
    }
    out.lmax_used = std::min(l, kHardCeiling);
    SeriesJet closing = pow_int(SeriesJet::constant(order, 1.0) - SeriesJet::power_minus_s(order, static_cast<double>(p)), k);
    closing *= Complex(1.0 / (1.0 - 1.0 / static_cast<double>(p)));
    out.jet = sum * closing;
    return out;
}

Complex local_factor_value(const DensityFn& rho, int k, std::int64_t p, Complex s, int lmax) {
    Complex ps1 = std::exp((s - 1.0) * std::log(static_cast<double>(p)));
    Complex sum = 1.0;
    double pl = 1.0;
    double sigma = s.real();
    for (int l = 1; l <= kHardCeiling; ++l) {
        pl *= static_cast<double>(p);
        Rat rl;
        try {
            rl = rho(p, l);
        } catch (const ResourceError&) {
            if (l <= lmax) throw;
            break;
        }
        double rd = to_double(rl);
        double tk = static_cast<double>(tau_k_prime_power(k, l));
        double tk1 = static_cast<double>(tau_k_prime_power(k, l - 1));
        Complex term = (Complex(tk) - ps1 * tk1) * std::exp(-s * std::log(pl)) * rd;
        sum += term;
        if (l >= 2 && rd * (tk + tk1) * std::pow(pl, -sigma) < kSummandTol * std::abs(sum)) break;
    }
    Complex closing = std::pow(1.0 - std::exp(-s * std::log(static_cast<double>(p))), k) /
                      (1.0 - 1.0 / static_cast<double>(p));
    return sum * closing;
}

namespace {

SingularSeriesValue assemble_product(const std::vector<std::int64_t>& primes,
                                     const std::vector<LocalFactorResult>& factors,
                                     int n_for_tail, int order, std::int64_t pmax, int lmax) {
    SingularSeriesValue out;
    out.pmax = pmax;
    out.lmax = lmax;
    out.jet = SeriesJet::constant(order, 1.0);
    double deviation_scale = 0.0;  // max |L_p(1)-1| p^{n/2} over computed primes
    for (std::size_t i = 0; i < primes.size(); ++i) {
        double p = static_cast<double>(primes[i]);
        double dev = std::abs(factors[i].jet[0].real() - 1.0);
        if (primes[i] > 50 && dev > 0.9)
            throw Error("singular series: local factor far from 1 at p=" + std::to_string(primes[i]) +
                        " (density bug?)");
        deviation_scale = std::max(deviation_scale, dev * std::pow(p, n_for_tail / 2.0));
        out.tail_estimate += factors[i].tail_bound;
        out.jet *= factors[i].jet;
    }
    out.tail_estimate +=
        deviation_scale * prime_tail_integral(static_cast<double>(pmax), n_for_tail);
    return out;
}

}  // namespace

SingularSeriesValue singular_series_jet(const DensityFn& rho, int n_for_tail, int k, int order,
                                        std::int64_t pmax, int lmax, unsigned threads) {
    if (pmax < 2) throw DomainError("singular_series_jet: pmax >= 2");
    std::vector<std::int64_t> primes = primes_up_to(pmax);
    std::vector<LocalFactorResult> factors(primes.size());
    parallel_reduce<int>(
        0, static_cast<std::int64_t>(primes.size()), 0,
        [&](std::int64_t i0, std::int64_t i1) {
            for (std::int64_t i = i0; i < i1; ++i)
                factors[static_cast<std::size_t>(i)] =
                    local_factor_jet(rho, k, primes[static_cast<std::size_t>(i)], order, lmax);
            return 0;
        },
        [](int a, int) { return a; }, threads);
    return assemble_product(primes, factors, n_for_tail, order, pmax, lmax);
}

SingularSeriesValue singular_series_jet(const QuadraticPolynomial& F, int k, int order,
                                        std::int64_t pmax, int lmax, unsigned threads) {
    if (pmax < 2) throw DomainError("singular_series_jet: pmax >= 2");
    std::vector<std::int64_t> primes = primes_up_to(pmax);
    std::vector<LocalFactorResult> factors(primes.size());
    // each worker chunk holds its own density cache
    parallel_reduce<int>(
        0, static_cast<std::int64_t>(primes.size()), 0,
        [&](std::int64_t i0, std::int64_t i1) {
            LocalCounter counter(F);
            DensityFn rho = density_from(counter);
            for (std::int64_t i = i0; i < i1; ++i)
                factors[static_cast<std::size_t>(i)] =
                    local_factor_jet(rho, k, primes[static_cast<std::size_t>(i)], order, lmax);
            return 0;
        },
        [](int a, int) { return a; }, threads);
    return assemble_product(primes, factors, F.n, order, pmax, lmax);
}

TheoremCoefficients theorem_coefficients_from(const SingularSeriesValue& L, int k) {
    if (L.jet.order() < k - 1)
        throw DomainError("theorem_coefficients: jet order must be >= k-1");
    TheoremCoefficients out;
    out.k = k;
    out.tail_estimate = L.tail_estimate;
    out.C.resize(static_cast<std::size_t>(k));
    double rfact = 1.0;
    for (int r = 0; r < k; ++r) {
        if (r >= 2) rfact *= r;
        double acc = 0.0;
        for (int t = 0; t <= k - r - 1; ++t)
            acc += L.jet[t].real() * weighted_residue(k, r + t);
        out.C[static_cast<std::size_t>(r)] = acc / rfact;
    }
    double lead = out.C[static_cast<std::size_t>(k - 1)];
    double a0 = L.jet[0].real();
    double kfact = 1.0;
    for (int i = 2; i <= k - 1; ++i) kfact *= i;
    if (std::abs(lead - a0 / kfact) > 1e-9 * std::max(1.0, std::abs(lead)))
        throw Error("theorem_coefficients: leading coefficient identity violated");
    if (lead <= 0.0)
        throw Error("theorem_coefficients: non-positive leading coefficient (theorem violation)");
    return out;
}

TheoremCoefficients theorem_coefficients(const QuadraticPolynomial& F, int k, std::int64_t pmax,
                                         int lmax, int order, unsigned threads) {
    if (order < 0) order = std::max(k - 1, 4) + 2;
    SingularSeriesValue L = singular_series_jet(F, k, order, pmax, lmax, threads);
    return theorem_coefficients_from(L, k);
}

}  // namespace qd
