// Named invariant checks spanning every module, runnable at two scales.
// Each check returns a machine-readable result; failures are results, not
// errors.

#pragma once

#include "quaddivisor/quad_poly.hpp"

#include <string>
#include <vector>

namespace qd {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

enum class VerifyLevel { quick, full };

// standard test polynomials
namespace test_forms {
QuadraticPolynomial three_squares();        // x1^2+x2^2+x3^2
QuadraticPolynomial non_diagonal();         // x1^2+2x1x2+2x2^2+x3^2
QuadraticPolynomial inhomogeneous();        // x1^2+x2^2+x3^2+x1+5
QuadraticPolynomial diagonal4();            // x1^2+x2^2+2x3^2+3x4^2
BoxRegion unit_box(int n, const Rat& X);    // [0,1]^n dilated by X
BoxRegion shifted_box(int n, const Rat& X); // [1,2]^n dilated by X
}  // namespace test_forms

// Individually callable checks (the acceptance suite drives several with its
// own parameters).  perturb injects a synthetic defect into the closed-form
// side so the comparison's sensitivity itself can be tested.
CheckResult check_phi_mode_equivalence(int qmax, const std::vector<int>& ks, int order,
                                       double tol, double perturb = 0.0, unsigned threads = 0);
CheckResult check_independence_of_a(int qmax, const std::vector<int>& ks, double tol);
CheckResult check_m1_identity(const std::vector<std::int64_t>& ps, int kmax, double tol);
CheckResult check_residue_contour(int kmax, int wmax, double tol);
CheckResult check_telescoping(const QuadraticPolynomial& F, const std::vector<std::int64_t>& ps,
                              int mmax, std::uint64_t op_cap = 1ull << 27);
CheckResult check_euler_vs_dirichlet(const QuadraticPolynomial& F, int k, std::int64_t qmax,
                                     std::int64_t pmax, double tol, unsigned threads = 0);
CheckResult check_ap_main_term(int k, const Int& h, const Int& q, double x_small, double x_large,
                               double tol);
CheckResult check_quadrature_oracle(int rmax, double tol);
CheckResult check_exact_spot71();
CheckResult check_error_decay(int k, const std::vector<Rat>& ladder, double final_tol,
                              std::int64_t pmax, int lmax, double quad_tol, unsigned threads = 0);

std::vector<CheckResult> verify_suite(VerifyLevel level, unsigned threads = 0);

// one line per check: "PASS|FAIL name measured=... threshold=... detail"
std::string format_check(const CheckResult& c);

}  // namespace qd
