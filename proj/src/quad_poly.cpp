#include "quaddivisor/quad_poly.hpp"

#include <algorithm>

namespace qd {

QuadraticPolynomial::QuadraticPolynomial(std::vector<std::vector<Int>> Q_, std::vector<Int> L_, Int N_)
    : n(static_cast<int>(L_.size())), Q(std::move(Q_)), L(std::move(L_)), N(std::move(N_)) {
    if (n < 3) throw DomainError("QuadraticPolynomial: need n >= 3");
    if (static_cast<int>(Q.size()) != n) throw DomainError("QuadraticPolynomial: Q has wrong size");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(Q[i].size()) != n) throw DomainError("QuadraticPolynomial: Q row size");
        for (int j = 0; j < n; ++j)
            if (Q[i][j] != Q[j][i]) throw DomainError("QuadraticPolynomial: Q must be symmetric");
    }
    if (det_q() == 0) throw DomainError("QuadraticPolynomial: Q must be nonsingular");
}

Int QuadraticPolynomial::evaluate(const std::vector<Int>& x) const {
    if (static_cast<int>(x.size()) != n) throw DomainError("evaluate: dimension mismatch");
    Int v = N;
    for (int i = 0; i < n; ++i) {
        v += L[i] * x[i];
        for (int j = 0; j < n; ++j) v += Q[i][j] * x[i] * x[j];
    }
    return v;
}

Rat QuadraticPolynomial::evaluate(const std::vector<Rat>& t) const {
    if (static_cast<int>(t.size()) != n) throw DomainError("evaluate: dimension mismatch");
    Rat v = N;
    for (int i = 0; i < n; ++i) {
        v += Rat(L[i]) * t[i];
        for (int j = 0; j < n; ++j) v += Rat(Q[i][j]) * t[i] * t[j];
    }
    return v;
}

std::vector<Int> QuadraticPolynomial::gradient(const std::vector<Int>& x) const {
    std::vector<Int> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Int gi = L[i];
        for (int j = 0; j < n; ++j) gi += 2 * Q[i][j] * x[j];
        g[static_cast<std::size_t>(i)] = gi;
    }
    return g;
}

bool QuadraticPolynomial::is_diagonal() const {
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && Q[i][j] != 0) return false;
    return true;
}

Int QuadraticPolynomial::det_q() const {
    // fraction-free Bareiss elimination
    std::vector<std::vector<Int>> a = Q;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int swap = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) { swap = i; break; }
            if (swap < 0) return 0;
            std::swap(a[k], a[swap]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

BoxRegion::BoxRegion(std::vector<Rat> lo_, std::vector<Rat> hi_, Rat X_)
    : lo(std::move(lo_)), hi(std::move(hi_)), X(std::move(X_)) {
    if (lo.size() != hi.size() || lo.empty()) throw DomainError("BoxRegion: bad bounds");
    if (X <= 0) throw DomainError("BoxRegion: dilation must be positive");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] < hi[i])) throw DomainError("BoxRegion: need lo < hi on every axis");
}

std::pair<Int, Int> BoxRegion::lattice_range(int i) const {
    Rat a = X * lo[static_cast<std::size_t>(i)];
    Rat b = X * hi[static_cast<std::size_t>(i)];
    return {ceil_rat(a), floor_rat(b)};
}

Int BoxRegion::lattice_count() const {
    Int total = 1;
    for (int i = 0; i < dim(); ++i) {
        auto [a, b] = lattice_range(i);
        if (b < a) return 0;
        total *= (b - a + 1);
    }
    return total;
}

void for_each_lattice_point(const BoxRegion& box,
                            const std::function<void(const std::vector<std::int64_t>&)>& visit) {
    int n = box.dim();
    std::vector<std::int64_t> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto [a, b] = box.lattice_range(i);
        if (b < a) return;
        lo[static_cast<std::size_t>(i)] = to_i64(a);
        hi[static_cast<std::size_t>(i)] = to_i64(b);
    }
    std::vector<std::int64_t> x = lo;
    for (;;) {
        visit(x);
        int axis = n - 1;
        while (axis >= 0) {
            if (x[static_cast<std::size_t>(axis)] < hi[static_cast<std::size_t>(axis)]) {
                ++x[static_cast<std::size_t>(axis)];
                break;
            }
            x[static_cast<std::size_t>(axis)] = lo[static_cast<std::size_t>(axis)];
            --axis;
        }
        if (axis < 0) return;
    }
}

namespace {

// Solve M y = rhs exactly over the rationals.  Returns false if the system
// has no unique solution.
bool solve_unique(std::vector<std::vector<Rat>> M, std::vector<Rat> rhs, std::vector<Rat>& y) {
    int m = static_cast<int>(M.size());
    for (int c = 0; c < m; ++c) {
        int piv = -1;
        for (int r = c; r < m; ++r)
            if (M[r][c] != 0) { piv = r; break; }
        if (piv < 0) return false;
        std::swap(M[c], M[piv]);
        std::swap(rhs[c], rhs[piv]);
        for (int r = 0; r < m; ++r) {
            if (r == c || M[r][c] == 0) continue;
            Rat f = M[r][c] / M[c][c];
            for (int t = c; t < m; ++t) M[r][t] -= f * M[c][t];
            rhs[r] -= f * rhs[c];
        }
    }
    y.assign(static_cast<std::size_t>(m), Rat(0));
    for (int r = 0; r < m; ++r) y[static_cast<std::size_t>(r)] = rhs[r] / M[r][r];
    return true;
}

}  // namespace

RangeExtrema range_extrema(const QuadraticPolynomial& F, const BoxRegion& box) {
    if (box.dim() != F.n) throw DomainError("range_extrema: dimension mismatch");
    int n = F.n;
    std::vector<Rat> dlo(static_cast<std::size_t>(n)), dhi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        dlo[static_cast<std::size_t>(i)] = box.X * box.lo[static_cast<std::size_t>(i)];
        dhi[static_cast<std::size_t>(i)] = box.X * box.hi[static_cast<std::size_t>(i)];
    }

    RangeExtrema out;
    bool have = false;
    auto consider = [&](const std::vector<Rat>& t) {
        Rat v = F.evaluate(t);
        if (!have || v < out.fmin) { out.fmin = v; out.argmin = t; }
        if (!have || v > out.fmax) { out.fmax = v; out.argmax = t; }
        have = true;
    };

    // pattern digit per axis: 0 = at lo, 1 = at hi, 2 = free
    std::vector<int> pat(static_cast<std::size_t>(n), 0);
    std::int64_t npat = 1;
    for (int i = 0; i < n; ++i) npat *= 3;
    for (std::int64_t code = 0; code < npat; ++code) {
        std::int64_t c = code;
        std::vector<int> freeIdx;
        std::vector<Rat> point(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            pat[static_cast<std::size_t>(i)] = static_cast<int>(c % 3);
            c /= 3;
            if (pat[static_cast<std::size_t>(i)] == 0) point[static_cast<std::size_t>(i)] = dlo[static_cast<std::size_t>(i)];
            else if (pat[static_cast<std::size_t>(i)] == 1) point[static_cast<std::size_t>(i)] = dhi[static_cast<std::size_t>(i)];
            else freeIdx.push_back(i);
        }
        if (freeIdx.empty()) {
            consider(point);
            continue;
        }
        int m = static_cast<int>(freeIdx.size());
        // critical point of the restriction: 2 Q_ff y = -(L_f + 2 Q_fc c)
        std::vector<std::vector<Rat>> M(static_cast<std::size_t>(m), std::vector<Rat>(static_cast<std::size_t>(m)));
        std::vector<Rat> rhs(static_cast<std::size_t>(m));
        for (int a = 0; a < m; ++a) {
            int ia = freeIdx[static_cast<std::size_t>(a)];
            for (int b = 0; b < m; ++b)
                M[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                    Rat(2 * F.Q[static_cast<std::size_t>(ia)][static_cast<std::size_t>(freeIdx[static_cast<std::size_t>(b)])]);
            Rat r = -Rat(F.L[static_cast<std::size_t>(ia)]);
            for (int j = 0; j < n; ++j) {
                if (pat[static_cast<std::size_t>(j)] == 2) continue;
                r -= Rat(2 * F.Q[static_cast<std::size_t>(ia)][static_cast<std::size_t>(j)]) * point[static_cast<std::size_t>(j)];
            }
            rhs[static_cast<std::size_t>(a)] = r;
        }
        std::vector<Rat> y;
        if (!solve_unique(std::move(M), std::move(rhs), y)) continue;  // boundary subfaces cover it
        bool inside = true;
        for (int a = 0; a < m; ++a) {
            int ia = freeIdx[static_cast<std::size_t>(a)];
            if (y[static_cast<std::size_t>(a)] < dlo[static_cast<std::size_t>(ia)] ||
                y[static_cast<std::size_t>(a)] > dhi[static_cast<std::size_t>(ia)]) { inside = false; break; }
        }
        if (!inside) continue;
        for (int a = 0; a < m; ++a)
            point[static_cast<std::size_t>(freeIdx[static_cast<std::size_t>(a)])] = y[static_cast<std::size_t>(a)];
        consider(point);
    }
    out.admissible = (out.fmin >= 0);
    return out;
}

}  // namespace qd
