// Truncated Taylor ("jet") arithmetic at a point, used to carry values and
// derivatives of Dirichlet-series factors at s = 1 without numerical
// differentiation.  A jet of order d stores a_0..a_d for sum a_j u^j with
// u = s - 1.

#pragma once

#include "quaddivisor/numeric.hpp"

#include <cmath>
#include <complex>
#include <vector>

namespace qd {

using Complex = std::complex<double>;

struct SeriesJet {
    std::vector<Complex> coeffs;  // a_0 .. a_order

    SeriesJet() = default;
    explicit SeriesJet(int order, Complex a0 = 0.0)
        : coeffs(static_cast<std::size_t>(order) + 1, 0.0) {
        coeffs[0] = a0;
    }

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
    Complex operator[](int j) const { return coeffs[static_cast<std::size_t>(j)]; }
    Complex& operator[](int j) { return coeffs[static_cast<std::size_t>(j)]; }

    // value of the j-th derivative at the expansion point: j! * a_j
    Complex derivative(int j) const {
        double f = 1.0;
        for (int i = 2; i <= j; ++i) f *= i;
        return coeffs[static_cast<std::size_t>(j)] * f;
    }

    static SeriesJet constant(int order, Complex c) { return SeriesJet(order, c); }

    // u itself
    static SeriesJet variable(int order) {
        SeriesJet j(order);
        if (order >= 1) j[1] = 1.0;
        return j;
    }

    // exp(c*u) = sum c^j u^j / j!
    static SeriesJet exponential(int order, Complex c) {
        SeriesJet j(order);
        Complex term = 1.0;
        for (int i = 0; i <= order; ++i) {
            j[i] = term;
            term *= c / static_cast<double>(i + 1);
        }
        return j;
    }

    // v^{-s} at s = 1+u:  v^{-1} * exp(-u log v), v > 0
    static SeriesJet power_minus_s(int order, double v) {
        SeriesJet j = exponential(order, -std::log(v));
        for (auto& c : j.coeffs) c /= v;
        return j;
    }

    // v^{s} at s = 1+u:  v * exp(u log v), v > 0
    static SeriesJet power_plus_s(int order, double v) {
        SeriesJet j = exponential(order, std::log(v));
        for (auto& c : j.coeffs) c *= v;
        return j;
    }
};

inline SeriesJet operator+(const SeriesJet& a, const SeriesJet& b) {
    SeriesJet r = a;
    for (int i = 0; i <= std::min(a.order(), b.order()); ++i) r[i] += b[i];
    return r;
}

inline SeriesJet operator-(const SeriesJet& a, const SeriesJet& b) {
    SeriesJet r = a;
    for (int i = 0; i <= std::min(a.order(), b.order()); ++i) r[i] -= b[i];
    return r;
}

inline SeriesJet operator-(const SeriesJet& a) {
    SeriesJet r = a;
    for (auto& c : r.coeffs) c = -c;
    return r;
}

inline SeriesJet operator*(const SeriesJet& a, Complex s) {
    SeriesJet r = a;
    for (auto& c : r.coeffs) c *= s;
    return r;
}
inline SeriesJet operator*(Complex s, const SeriesJet& a) { return a * s; }

inline SeriesJet operator*(const SeriesJet& a, const SeriesJet& b) {
    int d = std::min(a.order(), b.order());
    SeriesJet r(d);
    for (int i = 0; i <= d; ++i)
        for (int j = 0; i + j <= d && j <= b.order(); ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

inline SeriesJet& operator+=(SeriesJet& a, const SeriesJet& b) { a = a + b; return a; }
inline SeriesJet& operator-=(SeriesJet& a, const SeriesJet& b) { a = a - b; return a; }
inline SeriesJet& operator*=(SeriesJet& a, const SeriesJet& b) { a = a * b; return a; }
inline SeriesJet& operator*=(SeriesJet& a, Complex s) { a = a * s; return a; }

inline SeriesJet inverse(const SeriesJet& a) {
    if (a[0] == Complex(0.0)) throw DomainError("SeriesJet inverse: constant term is zero");
    int d = a.order();
    SeriesJet r(d);
    r[0] = 1.0 / a[0];
    for (int i = 1; i <= d; ++i) {
        Complex acc = 0.0;
        for (int j = 1; j <= i; ++j) acc += a[j] * r[i - j];
        r[i] = -acc / a[0];
    }
    return r;
}

inline SeriesJet operator/(const SeriesJet& a, const SeriesJet& b) { return a * inverse(b); }

inline SeriesJet pow_int(const SeriesJet& a, int e) {
    SeriesJet r = SeriesJet::constant(a.order(), 1.0);
    for (int i = 0; i < e; ++i) r *= a;
    return r;
}

}  // namespace qd
