#pragma once

// Exact-rational machinery for the coefficient array of
// f(t,x) = |M(a+it,b,x)|^2 = sum v_{mn} t^m x^n / (m! n!): direct table
// construction from the Cauchy product, the two holonomic recursions the
// table satisfies, sign checks of the recursion coefficients, the
// nonnegativity theorem on the table, the implied monotonicity of
// |M(a+it,b,x)| in t, and an exploratory scan of the open
// quotient-monotonicity conjecture.

#include <array>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace cirmax {

struct CoeffTable {
    mpq_class a;
    mpq_class b;
    int depth;                              // table covers 0 <= n <= depth
    std::vector<std::vector<mpq_class>> v;  // v[n][m] for m <= n; odd m zero

    // Negative or out-of-range indices read as exact zero.
    mpq_class at(int m, int n) const;
    mpq_class d1(int m, int n) const;  // backward difference in n
    mpq_class d2(int m, int n) const;
    mpq_class d3(int m, int n) const;
};

// Exact v_{mn} for n <= N by expanding (a+w)_k (a-w)_{n-k} in w = it with
// integer-coefficient convolutions; odd-w coefficients must cancel exactly.
CoeffTable v_table_direct(const mpq_class& a, const mpq_class& b, int N, int depth_cap = 80);

// Row-n coefficients of the four-term recursion in n at fixed m.
std::array<mpq_class, 4> rec_a_coeffs(const mpq_class& a, const mpq_class& b, long n);

struct GCoeffs {
    long n;
    std::array<mpq_class, 5> g;  // G_{-1}, G_0, G_1, G_2, G_3
};

// Row-n coefficients of the differenced recursion driving the induction.
GCoeffs rec_g_coeffs(const mpq_class& a, const mpq_class& b, long n);

// lhs - rhs of a single recursion instance on the table exactly as stored;
// zero on every table built by v_table_direct. The differenced residual
// telescopes: rec_g_residual(m,n) == rec_a_residual(m,n) - rec_a_residual(m,n-1)
// for any table contents, not just valid ones.
mpq_class rec_a_residual(const CoeffTable& t, int m, int n);  // n >= 0
mpq_class rec_g_residual(const CoeffTable& t, int m, int n);  // n >= 1

struct RecReport {
    bool ok = true;
    long checked = 0;
    std::vector<std::pair<int, int>> violations;  // (m,n) with nonzero residual
};

RecReport recA_check(const CoeffTable& t);
RecReport recG_check(const CoeffTable& t);

struct GViolation {
    mpq_class a, b;
    long n;
    int index;  // 0 -> G_{-1} ... 4 -> G_3
    mpq_class value;
};

struct GPosReport {
    bool ok = true;
    int n_max = 0;
    long evaluations = 0;
    std::vector<GViolation> violations;
};

// Exact sign check of all five G coefficients for 2 <= n <= n_max at each
// sample (requires a >= b > 0), augmented with a built-in a = b boundary
// line and small-b edge points where positivity is tightest.
GPosReport g_positivity(int n_max, const std::vector<std::pair<mpq_class, mpq_class>>& samples);

struct NonnegViolation {
    int m, n;
    int diff_order;  // 0: v, 1: v', 2: v'', 3: v'''
    mpq_class value;
};

struct NonnegReport {
    bool region_verified = false;  // hypothesis a >= b > 0 holds
    bool ok = false;               // no violations beyond the lone exemption
    bool base_cases_ok = false;    // v_{00}, v_{01}, v_{02}, v'''_{01} closed forms
    mpq_class exemption_value;     // v'''_{0,1} = 2a/b - 3, any sign allowed
    std::vector<NonnegViolation> violations;
};

// v, v', v'' >= 0 and v''' >= 0 away from (m,n) = (0,1), checked exactly for
// n <= N, m <= min(M, n). Outside a >= b the table is still checked but the
// report marks the region unverified (the theorem claims nothing there).
NonnegReport verify_nonneg(const mpq_class& a, const mpq_class& b, int M, int N);

// Relative residual of the fourth-order ODE in x satisfied by f(t,x),
// evaluated from the truncated series; |t|, |x| <= 2. Throws when depth N
// leaves a non-negligible tail at (t,x).
double ode_residual_f(const mpq_class& a, const mpq_class& b, double t, double x, int N = 60);

struct MonotonicityReport {
    bool ok = true;
    double min_forward_diff = 0.0;  // of log|M| along the grid
    long violations = 0;
};

// |M(a+it,b,x)| along an ascending t-grid, asserted non-decreasing within
// evaluation tolerance; a >= b > 0 required.
MonotonicityReport monotonicity_scan(double a, double b, double x,
                                     const std::vector<double>& t_grid);

struct ConjectureReport {
    bool quotient_decreasing = true;
    double worst_quotient_jump = 0.0;  // largest increase of the log-quotient
    double worst_quotient_v = 0.0;
    bool denominator_increasing = true;
    double worst_denominator_drop = 0.0;
    double worst_denominator_v = 0.0;
};

// |M((u0+iv)x,b,y)| / |M((u0+iv)x,b,x)| along an ascending v-grid, with the
// conjectured decrease (and the proven denominator increase) reported but
// never asserted; the conjecture is open.
ConjectureReport conjecture_scan(double u0, double b, double x, double y,
                                 const std::vector<double>& v_grid);

} // namespace cirmax
