#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "cirmax/positivity.hpp"

using namespace cirmax;

namespace {

std::vector<double> ramp(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
    return g;
}

} // namespace

TEST_CASE("coefficient table base entries in closed form") {
    const mpq_class a = 2, b(1, 2);
    const auto t = v_table_direct(a, b, 8);
    CHECK(t.at(0, 0) == 1);
    CHECK(t.at(0, 1) == 2 * a / b);
    CHECK(t.at(0, 2) == 2 * a * (2 * a * b + a + b) / (b * b * (b + 1)));
    CHECK(t.at(0, 1) == 8);
    CHECK(t.at(0, 2) == 48);
}

TEST_CASE("odd powers of t cancel exactly") {
    const auto t = v_table_direct(mpq_class(7, 3), mpq_class(4, 3), 9);
    for (int n = 0; n <= 9; ++n)
        for (int m = 1; m <= n; m += 2) CHECK(t.at(m, n) == 0);
}

TEST_CASE("out-of-range reads are exact zero") {
    const auto t = v_table_direct(1, 1, 4);
    CHECK(t.at(0, -1) == 0);
    CHECK(t.at(-2, 0) == 0);
    CHECK(t.at(0, 5) == 0);
    CHECK(t.at(6, 4) == 0);
}

TEST_CASE("difference operators expand as alternating sums") {
    const auto t = v_table_direct(mpq_class(3, 2), 1, 8);
    for (int n : {3, 5, 8}) {
        CHECK(t.d1(2, n) == t.at(2, n) - t.at(2, n - 1));
        CHECK(t.d2(2, n) == t.at(2, n) - 2 * t.at(2, n - 1) + t.at(2, n - 2));
        CHECK(t.d3(2, n) ==
              t.at(2, n) - 3 * t.at(2, n - 1) + 3 * t.at(2, n - 2) - t.at(2, n - 3));
    }
    CHECK(t.d3(0, 1) == 2 * t.a / t.b - 3);
}

TEST_CASE("both recursions annihilate a directly built table") {
    for (auto [a, b] : {std::pair<mpq_class, mpq_class>{1, 1}, {mpq_class(3, 2), 1}}) {
        const auto t = v_table_direct(a, b, 12);
        const auto ra = recA_check(t);
        CHECK(ra.ok);
        CHECK(ra.checked > 0);
        CHECK(ra.violations.empty());
        const auto rg = recG_check(t);
        CHECK(rg.ok);
        CHECK(rg.checked > 0);
    }
}

TEST_CASE("a corrupted entry trips both recursion checks") {
    auto t = v_table_direct(1, 1, 10);
    t.v[6][2] += 1;
    CHECK_FALSE(recA_check(t).ok);
    CHECK_FALSE(recG_check(t).ok);
    // the telescoping identity between the two residuals is structural and
    // survives arbitrary table contents
    for (int m = 0; m <= 4; m += 2)
        for (int n = 1; n <= 9; ++n)
            CHECK(rec_g_residual(t, m, n) ==
                  rec_a_residual(t, m, n) - rec_a_residual(t, m, n - 1));
}

TEST_CASE("recursion coefficient values at unit parameters") {
    const auto g = rec_g_coeffs(1, 1, 2);
    CHECK(g.g[0] == 18);
    CHECK(g.g[3] == 12);
    CHECK(g.g[4] == 1);
    const auto a = rec_a_coeffs(1, 1, 0);
    CHECK(a[0] == 0);
    CHECK(a[1] == 0);
}

TEST_CASE("nonnegativity holds on the verified region") {
    const auto r = verify_nonneg(1, 1, 16, 16);
    CHECK(r.region_verified);
    CHECK(r.ok);
    CHECK(r.base_cases_ok);
    CHECK(r.exemption_value == -1);
    CHECK(r.violations.empty());

    const auto r2 = verify_nonneg(2, mpq_class(1, 2), 10, 10);
    CHECK(r2.region_verified);
    CHECK(r2.ok);
    CHECK(r2.exemption_value == 5);
}

TEST_CASE("outside the region the second difference goes negative") {
    const auto r = verify_nonneg(mpq_class(1, 2), 1, 12, 12);
    CHECK_FALSE(r.region_verified);
    CHECK_FALSE(r.ok);
    CHECK(r.base_cases_ok);
    CHECK(r.exemption_value == -2);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].m == 0);
    CHECK(r.violations[0].n == 1);
    CHECK(r.violations[0].diff_order == 2);
    CHECK(r.violations[0].value == -1);
}

TEST_CASE("recursion coefficients stay positive over a sample grid") {
    const auto r = g_positivity(10, {{3, 2}});
    CHECK(r.ok);
    CHECK(r.evaluations > 0);
    CHECK(r.violations.empty());
    CHECK_THROWS_AS((void)g_positivity(10, {{1, 2}}), std::invalid_argument);
    CHECK_THROWS_AS((void)g_positivity(1, {}), std::invalid_argument);
}

TEST_CASE("squared-modulus series satisfies the fourth-order equation") {
    CHECK(ode_residual_f(1, 1, 0.5, 1.0) < 1e-12);
    CHECK(ode_residual_f(mpq_class(3, 2), mpq_class(1, 2), 1.5, -2.0) < 1e-10);
    CHECK(ode_residual_f(2, 1, 0.0, 0.0) == 0.0);
    CHECK_THROWS_AS((void)ode_residual_f(1, 1, 2.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)ode_residual_f(1, 1, 1.9, 1.9, 8), std::runtime_error);
}

TEST_CASE("modulus grows with t on the verified region") {
    const auto grid = ramp(0.0, 4.0, 41);
    const auto r = monotonicity_scan(2, 1, 5, grid);
    CHECK(r.ok);
    CHECK(r.violations == 0);
    CHECK(r.min_forward_diff > 0);
    CHECK_THROWS_AS((void)monotonicity_scan(1, 2, 5, grid), std::invalid_argument);
    CHECK_THROWS_AS((void)monotonicity_scan(2, 1, 5, {3.0, 1.0}), std::invalid_argument);
}

TEST_CASE("quotient scan reports a clean decrease at a benign point") {
    const auto grid = ramp(0.0, 4.0, 41);
    const auto r = conjecture_scan(0.7, 1.0, 8.0, 2.0, grid);
    CHECK(r.quotient_decreasing);
    CHECK(r.worst_quotient_jump == 0.0);
    CHECK(r.denominator_increasing);
    CHECK(r.worst_denominator_drop == 0.0);
    CHECK_THROWS_AS((void)conjecture_scan(0.0, 1, 8, 2, grid), std::invalid_argument);
    CHECK_THROWS_AS((void)conjecture_scan(0.7, 1, 2, 8, grid), std::invalid_argument);
    CHECK_THROWS_AS((void)conjecture_scan(0.7, 1, 8, 2, {0.0}), std::invalid_argument);
}

TEST_CASE("table construction rejects bad arguments") {
    CHECK_THROWS_AS((void)v_table_direct(1, 0, 4), std::invalid_argument);
    CHECK_THROWS_AS((void)v_table_direct(1, 1, -1), std::invalid_argument);
    CHECK_THROWS_AS((void)v_table_direct(1, 1, 90), std::invalid_argument);
}
