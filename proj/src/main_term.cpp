#include "quaddivisor/main_term.hpp"

#include "quaddivisor/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qd {

void gauss_legendre_nodes(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        // Newton from the Chebyshev-like initial guess
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
            double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        nodes[static_cast<std::size_t>(i)] = x;
        weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

namespace {

// double-precision view of F(X u) as a polynomial in the undilated u
struct DilatedPoly {
    int n;
    std::vector<std::vector<double>> q2;  // Q_ij X^2
    std::vector<double> l1;               // L_i X
    double n0;

    DilatedPoly(const QuadraticPolynomial& F, double X) : n(F.n) {
        q2.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
        l1.assign(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) {
            l1[static_cast<std::size_t>(i)] = to_double(F.L[static_cast<std::size_t>(i)]) * X;
            for (int j = 0; j < n; ++j)
                q2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    to_double(F.Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) * X * X;
        }
        n0 = to_double(F.N);
    }

    double eval(const double* u) const {
        double v = n0;
        for (int i = 0; i < n; ++i) {
            v += l1[static_cast<std::size_t>(i)] * u[i];
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += q2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * u[j];
            v += row * u[i];
        }
        return v;
    }

    // outer interval bound of F(X u) over the cell [lo, hi]
    void range(const double* lo, const double* hi, double& fmin, double& fmax) const {
        double a = n0, b = n0;
        for (int i = 0; i < n; ++i) {
            double c = l1[static_cast<std::size_t>(i)];
            double t1 = c * lo[i], t2 = c * hi[i];
            a += std::min(t1, t2);
            b += std::max(t1, t2);
            for (int j = 0; j < n; ++j) {
                double q = q2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                if (q == 0.0) continue;
                double p1 = lo[i] * lo[j], p2 = lo[i] * hi[j], p3 = hi[i] * lo[j], p4 = hi[i] * hi[j];
                double mn = std::min(std::min(p1, p2), std::min(p3, p4));
                double mx = std::max(std::max(p1, p2), std::max(p3, p4));
                if (i == j) {
                    // x^2 over an interval: tighter than the product bound
                    mn = (lo[i] <= 0.0 && hi[i] >= 0.0) ? 0.0 : std::min(lo[i] * lo[i], hi[i] * hi[i]);
                    mx = std::max(lo[i] * lo[i], hi[i] * hi[i]);
                }
                a += q > 0 ? q * mn : q * mx;
                b += q > 0 ? q * mx : q * mn;
            }
        }
        double inflate = 1e-12 * (std::abs(a) + std::abs(b) + 1.0);
        fmin = a - inflate;
        fmax = b + inflate;
    }
};

constexpr int kMaxDim = 8;

struct Cell {
    double lo[kMaxDim];
    double hi[kMaxDim];
    int depth = 0;
};

struct QuadAccum {
    double value = 0.0;
    double comp = 0.0;  // Kahan compensation
    double err = 0.0;
    std::int64_t cells = 0;
    bool tol_ok = true;

    void add_value(double v) {
        double y = v - comp;
        double t = value + y;
        comp = (t - value) - y;
        value = t;
    }
};

class Integrator {
public:
    Integrator(const DilatedPoly& poly, int r, int points, int max_depth)
        : poly_(poly), r_(r), max_depth_(max_depth) {
        gauss_legendre_nodes(points, nodes_, weights_);
    }

    double rule(const Cell& c) const {
        int n = poly_.n;
        int m = static_cast<int>(nodes_.size());
        double u[kMaxDim];
        double scale = 1.0;
        for (int i = 0; i < n; ++i) scale *= (c.hi[i] - c.lo[i]) * 0.5;
        std::int64_t total = 1;
        for (int i = 0; i < n; ++i) total *= m;
        double acc = 0.0;
        for (std::int64_t idx = 0; idx < total; ++idx) {
            std::int64_t t = idx;
            double w = 1.0;
            for (int i = 0; i < n; ++i) {
                int j = static_cast<int>(t % m);
                t /= m;
                u[i] = 0.5 * (c.lo[i] + c.hi[i]) + 0.5 * (c.hi[i] - c.lo[i]) * nodes_[static_cast<std::size_t>(j)];
                w *= weights_[static_cast<std::size_t>(j)];
            }
            double f = poly_.eval(u);
            double g;
            if (r_ == 0) g = 1.0;
            else {
                double lf = std::log(f);
                g = lf;
                for (int i = 1; i < r_; ++i) g *= lf;
            }
            acc += w * g;
        }
        return acc * scale;
    }

    double contribution_bound(const Cell& c, double fmax) const {
        int n = poly_.n;
        double vol = 1.0, diag2 = 0.0;
        for (int i = 0; i < n; ++i) {
            vol *= (c.hi[i] - c.lo[i]);
            diag2 += (c.hi[i] - c.lo[i]) * (c.hi[i] - c.lo[i]);
        }
        // F vanishes at worst quadratically; the cell's positive scale is at
        // least of order diag^2 (heuristic, reported not certified)
        double m_est = std::max(1e-250, 0.25 * diag2);
        double logmag = std::max(std::abs(std::log(m_est)), std::abs(std::log(std::max(fmax, 2.0))));
        double g = 1.0;
        for (int i = 0; i < r_; ++i) g *= logmag;
        return vol * std::max(1.0, g);
    }

    void process(const Cell& c, double share, QuadAccum& acc) const {
        int n = poly_.n;
        double fmin, fmax;
        poly_.range(c.lo, c.hi, fmin, fmax);
        if (fmax < 0.0)
            throw InadmissibleError("log_power_integral: cell with F entirely negative");
        if (fmin <= 0.0 && r_ > 0) {
            double bound = contribution_bound(c, fmax);
            if (bound < share || c.depth >= max_depth_) {
                acc.err += bound;
                acc.cells += 1;
                if (c.depth >= max_depth_ && bound >= share) acc.tol_ok = false;
                return;
            }
            subdivide(c, share, acc);
            return;
        }
        double parent = rule(c);
        if (c.depth >= max_depth_) {
            acc.add_value(parent);
            acc.err += share;
            acc.cells += 1;
            acc.tol_ok = false;
            return;
        }
        double children_sum = 0.0;
        std::vector<Cell> kids = split(c);
        for (const Cell& kid : kids) children_sum += rule(kid);
        double diff = std::abs(parent - children_sum);
        // floating-point floor: once the two levels agree to rounding there
        // is nothing left to refine
        double floor_tol = 64.0 * std::numeric_limits<double>::epsilon() *
                               (std::abs(children_sum) + std::abs(parent)) + 1e-300;
        if (diff < std::max(share, floor_tol)) {
            acc.add_value(children_sum);
            acc.err += diff;
            acc.cells += static_cast<std::int64_t>(kids.size());
            return;
        }
        double sub = share / static_cast<double>(1 << n);
        for (const Cell& kid : kids) process(kid, sub, acc);
    }

private:
    std::vector<Cell> split(const Cell& c) const {
        int n = poly_.n;
        std::vector<Cell> out;
        out.reserve(static_cast<std::size_t>(1) << n);
        for (int mask = 0; mask < (1 << n); ++mask) {
            Cell k = c;
            k.depth = c.depth + 1;
            for (int i = 0; i < n; ++i) {
                double mid = 0.5 * (c.lo[i] + c.hi[i]);
                if (mask & (1 << i)) k.lo[i] = mid;
                else k.hi[i] = mid;
            }
            out.push_back(k);
        }
        return out;
    }

    void subdivide(const Cell& c, double share, QuadAccum& acc) const {
        int n = poly_.n;
        double sub = share / static_cast<double>(1 << n);
        for (const Cell& kid : split(c)) process(kid, sub, acc);
    }

    const DilatedPoly& poly_;
    int r_;
    int max_depth_;
    std::vector<double> nodes_, weights_;
};

}  // namespace

BoxIntegral log_power_integral(const QuadraticPolynomial& F, const BoxRegion& box, int r,
                               double tol, const QuadratureOptions& opts) {
    if (r < 0) throw DomainError("log_power_integral: r >= 0");
    if (box.dim() != F.n) throw DomainError("log_power_integral: dimension mismatch");
    RangeExtrema ex = range_extrema(F, box);
    if (!ex.admissible)
        throw InadmissibleError("log_power_integral: F takes negative values on the dilated box");

    double X = to_double(box.X);
    DilatedPoly poly(F, X);
    Integrator integ(poly, r, opts.points, opts.max_depth);

    int n = F.n;
    double Xn = 1.0;
    for (int i = 0; i < n; ++i) Xn *= X;
    // quadrature works in undilated coordinates; split axis 0 into strips for
    // the worker pool and combine in strip order
    int strips = (opts.threads == 1) ? 1 : 16;
    double lo0 = to_double(box.lo[0]), hi0 = to_double(box.hi[0]);
    // quadrature tolerance applies to the dilated value
    double tol_u = tol / Xn;

    auto run_strip = [&](std::int64_t s0, std::int64_t s1) {
        QuadAccum acc;
        for (std::int64_t s = s0; s < s1; ++s) {
            Cell c;
            c.depth = 0;
            for (int i = 0; i < n; ++i) {
                c.lo[i] = to_double(box.lo[static_cast<std::size_t>(i)]);
                c.hi[i] = to_double(box.hi[static_cast<std::size_t>(i)]);
            }
            c.lo[0] = lo0 + (hi0 - lo0) * static_cast<double>(s) / strips;
            c.hi[0] = lo0 + (hi0 - lo0) * static_cast<double>(s + 1) / strips;
            integ.process(c, tol_u / strips, acc);
        }
        return acc;
    };
    QuadAccum total = parallel_reduce<QuadAccum>(
        0, strips, QuadAccum{},
        run_strip,
        [](QuadAccum a, QuadAccum b) {
            a.add_value(b.value);
            a.err += b.err;
            a.cells += b.cells;
            a.tol_ok = a.tol_ok && b.tol_ok;
            return a;
        },
        opts.threads);

    BoxIntegral out;
    out.r = r;
    out.value = total.value * Xn;
    out.abs_error_estimate = total.err * Xn;
    out.cells_used = total.cells;
    out.tolerance_reached = total.tol_ok && total.err * Xn <= tol * 1.000001 + 1e-300;
    return out;
}

double composite_log_power_integral(const QuadraticPolynomial& F, const BoxRegion& box, int r,
                                    int panels, int points) {
    if (box.dim() != F.n) throw DomainError("composite rule: dimension mismatch");
    int n = F.n;
    double X = to_double(box.X);
    DilatedPoly poly(F, X);
    std::vector<double> nodes, weights;
    gauss_legendre_nodes(points, nodes, weights);
    // flattened per-axis node/weight lists (panels x points)
    std::vector<std::vector<double>> xs(static_cast<std::size_t>(n)), ws(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double a = to_double(box.lo[static_cast<std::size_t>(i)]);
        double b = to_double(box.hi[static_cast<std::size_t>(i)]);
        double h = (b - a) / panels;
        for (int pnl = 0; pnl < panels; ++pnl) {
            double c0 = a + pnl * h, c1 = c0 + h;
            for (int j = 0; j < points; ++j) {
                xs[static_cast<std::size_t>(i)].push_back(0.5 * (c0 + c1) + 0.5 * h * nodes[static_cast<std::size_t>(j)]);
                ws[static_cast<std::size_t>(i)].push_back(0.5 * h * weights[static_cast<std::size_t>(j)]);
            }
        }
    }
    std::int64_t per_axis = static_cast<std::int64_t>(panels) * points;
    std::int64_t total = 1;
    for (int i = 0; i < n; ++i) total *= per_axis;
    double acc = 0.0, comp = 0.0;
    double u[kMaxDim];
    for (std::int64_t idx = 0; idx < total; ++idx) {
        std::int64_t t = idx;
        double w = 1.0;
        for (int i = 0; i < n; ++i) {
            int j = static_cast<int>(t % per_axis);
            t /= per_axis;
            u[i] = xs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            w *= ws[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        double f = poly.eval(u);
        double g = 1.0;
        if (r > 0) {
            double lf = std::log(f);
            g = lf;
            for (int i = 1; i < r; ++i) g *= lf;
        }
        double y = w * g - comp;
        double tt = acc + y;
        comp = (tt - acc) - y;
        acc = tt;
    }
    double Xn = 1.0;
    for (int i = 0; i < n; ++i) Xn *= X;
    return acc * Xn;
}

SigmaPrediction predict_sigma(const QuadraticPolynomial& F, int k, const BoxRegion& box,
                              const TheoremCoefficients& coeffs, double tol,
                              const QuadratureOptions& opts) {
    if (static_cast<int>(coeffs.C.size()) != k)
        throw DomainError("predict_sigma: coefficient count must equal k");
    SigmaPrediction out;
    out.k = k;
    for (int r = 0; r < k; ++r) {
        BoxIntegral I = log_power_integral(F, box, r, tol, opts);
        double piece = coeffs.C[static_cast<std::size_t>(r)] * I.value;
        out.integrals.push_back(I);
        out.pieces.push_back(piece);
        out.total += piece;
    }
    return out;
}

}  // namespace qd
