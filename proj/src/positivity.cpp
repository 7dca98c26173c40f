#include "cirmax/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cirmax/kummer.hpp"

namespace cirmax {
namespace {

mpq_class q(long v) { return mpq_class(v); }

// coefficient vectors of (a+w)_k in w, k = 0..N
std::vector<std::vector<mpq_class>> pochhammer_coeffs(const mpq_class& a, int N) {
    std::vector<std::vector<mpq_class>> poch(N + 1);
    poch[0] = {mpq_class(1)};
    for (int k = 0; k < N; ++k) {
        const auto& prev = poch[k];
        std::vector<mpq_class> next(prev.size() + 1, mpq_class(0));
        const mpq_class ak = a + k;
        for (size_t i = 0; i < prev.size(); ++i) {
            next[i] += prev[i] * ak;
            next[i + 1] += prev[i];
        }
        poch[k + 1] = std::move(next);
    }
    return poch;
}

void guard_growth(const mpq_class& v) {
    if (mpz_sizeinbase(v.get_num().get_mpz_t(), 2) > (1u << 22) ||
        mpz_sizeinbase(v.get_den().get_mpz_t(), 2) > (1u << 22))
        throw std::overflow_error("v_table_direct: coefficient growth exceeded the bigint budget");
}

} // namespace

mpq_class CoeffTable::at(int m, int n) const {
    if (m < 0 || n < 0 || n > depth || m >= static_cast<int>(v[n].size())) return mpq_class(0);
    return v[n][m];
}

mpq_class CoeffTable::d1(int m, int n) const { return at(m, n) - at(m, n - 1); }
mpq_class CoeffTable::d2(int m, int n) const { return d1(m, n) - d1(m, n - 1); }
mpq_class CoeffTable::d3(int m, int n) const { return d2(m, n) - d2(m, n - 1); }

CoeffTable v_table_direct(const mpq_class& a, const mpq_class& b, int N, int depth_cap) {
    if (sgn(b) <= 0) throw std::invalid_argument("v_table_direct: b must be positive");
    if (N < 0) throw std::invalid_argument("v_table_direct: N must be >= 0");
    if (N > depth_cap)
        throw std::invalid_argument("v_table_direct: depth exceeds the configured cap");

    const auto poch = pochhammer_coeffs(a, N);
    std::vector<mpq_class> pb(N + 1);  // (b)_k
    pb[0] = 1;
    for (int k = 1; k <= N; ++k) pb[k] = pb[k - 1] * (b + (k - 1));

    CoeffTable t{a, b, N, {}};
    t.v.resize(N + 1);
    mpz_class binom, fact;
    for (int n = 0; n <= N; ++n) {
        std::vector<mpq_class> inner(n + 1, mpq_class(0));
        for (int k = 0; k <= n; ++k) {
            mpz_bin_uiui(binom.get_mpz_t(), n, k);
            const mpq_class c = mpq_class(binom) / (pb[k] * pb[n - k]);
            const auto& pk = poch[k];       // (a+w)_k
            const auto& pnk = poch[n - k];  // (a+w)_{n-k}; odd signs flip for (a-w)
            for (size_t i = 0; i < pk.size(); ++i) {
                const mpq_class ci = c * pk[i];
                for (size_t j = 0; j < pnk.size(); ++j) {
                    if (j % 2)
                        inner[i + j] -= ci * pnk[j];
                    else
                        inner[i + j] += ci * pnk[j];
                }
            }
        }
        t.v[n].assign(n + 1, mpq_class(0));
        for (int m = 0; m <= n; ++m) {
            if (m % 2 == 1) {
                if (inner[m] != 0)
                    throw std::logic_error("v_table_direct: odd-power coefficient failed to cancel");
                continue;
            }
            mpz_fac_ui(fact.get_mpz_t(), m);
            t.v[n][m] = mpq_class(fact) * inner[m];
            if ((m / 2) % 2) t.v[n][m] = -t.v[n][m];
            guard_growth(t.v[n][m]);
        }
    }
    return t;
}

std::array<mpq_class, 4> rec_a_coeffs(const mpq_class& a, const mpq_class& b, long n) {
    const mpq_class n1 = q(n), n2 = n1 * n1, n3 = n2 * n1;
    const mpq_class b2 = b * b, b3 = b2 * b;
    return {
        b - 3 * b2 + 2 * b3 + (1 - 5 * b + 5 * b2) * n1 + (-2 + 4 * b) * n2 + n3,
        6 * a * b - 4 * a * b2 - 2 * a + (6 * a + 11 * b - 5 - 8 * a * b - 6 * b2) * n1 +
            (9 - 4 * a - 10 * b) * n2 - 4 * n3,
        (8 - 10 * a - 6 * b + 8 * a * b) * n1 + (-13 + 8 * a + 6 * b) * n2 + 5 * n3,
        (-4 + 4 * a) * n1 + (6 - 4 * a) * n2 - 2 * n3,
    };
}

GCoeffs rec_g_coeffs(const mpq_class& a, const mpq_class& b, long n) {
    const mpq_class n1 = q(n), n2 = n1 * n1, n3 = n2 * n1;
    const mpq_class b2 = b * b, b3 = b2 * b;
    GCoeffs g;
    g.n = n;
    g.g = {
        b - 3 * b2 + 2 * b3 + (1 - 5 * b + 5 * b2) * n1 + (-2 + 4 * b) * n2 + n3,
        2 * a + 7 * b - 4 - 6 * a * b + b2 + 4 * a * b2 - 4 * b3 +
            (10 - 6 * a - 9 * b + 8 * a * b - 4 * b2) * n1 + (4 * a + 2 * b - 8) * n2 + 2 * n3,
        6 - 6 * a + 3 * b - 4 * a * b + 8 * a * b2 - 6 * b3 +
            (6 * a - 5 * b + 8 * a * b - 3 * b2 - 10) * n1 + (4 + 2 * b) * n2,
        -2 - 4 * b + 2 * a * b + 4 * a * b2 - 2 * b3 + (2 + 4 * b + b2) * n1,
        b2,
    };
    return g;
}

mpq_class rec_a_residual(const CoeffTable& t, int m, int n) {
    if (n < 0) throw std::invalid_argument("rec_a_residual: n must be >= 0");
    const auto A = rec_a_coeffs(t.a, t.b, n);
    const mpq_class lhs =
        A[0] * t.at(m, n + 1) + A[1] * t.at(m, n) + A[2] * t.at(m, n - 1) + A[3] * t.at(m, n - 2);
    const mpq_class rhs = q(4L * n) * q(m) * q(m - 1) * t.at(m - 2, n - 1);
    return lhs - rhs;
}

mpq_class rec_g_residual(const CoeffTable& t, int m, int n) {
    if (n < 1) throw std::invalid_argument("rec_g_residual: n must be >= 1");
    const auto G = rec_g_coeffs(t.a, t.b, n).g;
    const mpq_class up =
        q(4L * n) * q(m) * q(m - 1) * t.at(m - 2, n - 1) -
        q(4L * (n - 1)) * q(m) * q(m - 1) * t.at(m - 2, n - 2);
    const mpq_class lhs = G[0] * t.d3(m, n + 1);
    const mpq_class rhs =
        G[1] * t.d3(m, n) + G[2] * t.d2(m, n - 1) + G[3] * t.d1(m, n - 2) + G[4] * t.at(m, n - 3) + up;
    return lhs - rhs;
}

RecReport recA_check(const CoeffTable& t) {
    RecReport r;
    for (int m = 0; m <= t.depth; ++m)
        for (int n = 0; n < t.depth; ++n) {
            ++r.checked;
            if (rec_a_residual(t, m, n) != 0) {
                r.ok = false;
                r.violations.emplace_back(m, n);
            }
        }
    return r;
}

RecReport recG_check(const CoeffTable& t) {
    RecReport r;
    for (int m = 0; m <= t.depth; ++m)
        for (int n = 1; n < t.depth; ++n) {
            ++r.checked;
            if (rec_g_residual(t, m, n) != 0) {
                r.ok = false;
                r.violations.emplace_back(m, n);
            }
        }
    return r;
}

GPosReport g_positivity(int n_max,
                        const std::vector<std::pair<mpq_class, mpq_class>>& samples) {
    if (n_max < 2) throw std::invalid_argument("g_positivity: n_max must be >= 2");
    std::vector<std::pair<mpq_class, mpq_class>> pts = samples;
    for (long num : {1L, 3L, 5L, 7L}) pts.emplace_back(mpq_class(num, 10), mpq_class(num, 10));
    for (long w : {1L, 2L, 3L, 5L, 8L, 12L, 20L, 35L, 50L}) pts.emplace_back(q(w), q(w));
    pts.emplace_back(q(1), mpq_class(1, 100));
    pts.emplace_back(q(3), mpq_class(1, 50));
    pts.emplace_back(mpq_class(1, 2), mpq_class(1, 30));
    pts.emplace_back(q(10), mpq_class(1, 1000));
    pts.emplace_back(mpq_class(1, 5), mpq_class(1, 200));

    GPosReport rep;
    rep.n_max = n_max;
    for (const auto& [a, b] : pts) {
        if (sgn(b) <= 0 || a < b)
            throw std::invalid_argument("g_positivity: samples must satisfy a >= b > 0");
        for (long n = 2; n <= n_max; ++n) {
            const auto g = rec_g_coeffs(a, b, n).g;
            for (int i = 0; i < 5; ++i) {
                ++rep.evaluations;
                if (sgn(g[i]) < 0) {
                    rep.ok = false;
                    rep.violations.push_back(GViolation{a, b, n, i, g[i]});
                }
            }
        }
    }
    return rep;
}

NonnegReport verify_nonneg(const mpq_class& a, const mpq_class& b, int M, int N) {
    const CoeffTable t = v_table_direct(a, b, N);
    NonnegReport rep;
    rep.region_verified = (sgn(b) > 0 && a >= b);
    rep.exemption_value = t.d3(0, 1);
    rep.base_cases_ok = (t.at(0, 0) == 1 && t.at(0, 1) == 2 * a / b &&
                         t.at(0, 2) == 2 * a * (2 * a * b + a + b) / (b * b * (b + 1)) &&
                         rep.exemption_value == 2 * a / b - 3);
    for (int n = 0; n <= N; ++n)
        for (int m = 0; m <= std::min(M, n); m += 2) {
            const mpq_class vals[4] = {t.at(m, n), t.d1(m, n), t.d2(m, n), t.d3(m, n)};
            for (int order = 0; order < 4; ++order) {
                if (order == 3 && m == 0 && n == 1) continue;  // the lone allowed negative
                if (sgn(vals[order]) < 0)
                    rep.violations.push_back(NonnegViolation{m, n, order, vals[order]});
            }
        }
    rep.ok = rep.violations.empty() && rep.base_cases_ok;
    return rep;
}

double ode_residual_f(const mpq_class& a, const mpq_class& b, double t, double x, int N) {
    if (!(std::abs(t) <= 2.0) || !(std::abs(x) <= 2.0))
        throw std::invalid_argument("ode_residual_f: need |t| <= 2 and |x| <= 2");
    const CoeffTable tbl = v_table_direct(a, b, N);

    // f^{(0,j)}(t,x), truncated at x-order N-j-1; the shallower variant
    // exposes whether the truncation tail still moves the value
    auto partial = [&](int j, int depth) {
        double sum = 0.0, comp = 0.0;
        double xp = 1.0, nfact = 1.0;
        for (int n = 0; n < depth - j; ++n) {
            double tm = 1.0, mfact = 1.0;
            for (int m = 0; m <= n + j; m += 2) {
                const double coef = tbl.at(m, n + j).get_d();
                if (coef != 0.0) {
                    const double term = coef * tm * xp / (mfact * nfact);
                    const double yk = term - comp;
                    const double sk = sum + yk;
                    comp = (sk - sum) - yk;
                    sum = sk;
                }
                tm *= t * t;
                mfact *= (m + 1.0) * (m + 2.0);
            }
            xp *= x;
            nfact *= n + 1.0;
        }
        return sum;
    };

    double f[5], f_shallow[5];
    for (int j = 0; j <= 4; ++j) {
        f[j] = partial(j, N);
        f_shallow[j] = partial(j, N - 4);
    }

    const double ad = a.get_d(), bd = b.get_d();
    const double p0 = -2 * ad * (1 - 3 * bd + 2 * bd * bd) - 2 * ad * (1 - 4 * bd) * x -
                      4 * ad * x * x;
    const double p1 = bd - 3 * bd * bd + 2 * bd * bd * bd +
                      (2 * ad + bd - 8 * ad * bd - 6 * bd * bd) * x +
                      (2 + 8 * ad + 6 * bd) * x * x - 2 * x * x * x;
    const double p2 = (5 * bd * bd - bd) * x + (-3 - 4 * ad - 10 * bd) * x * x + 5 * x * x * x;
    const double p3 = (1 + 4 * bd) * x * x - 4 * x * x * x;
    const double p4 = x * x * x;
    const double pk[5] = {p0, p1, p2, p3, p4};

    double resid = -4 * t * t * x * f[0];
    double scale = std::abs(resid);
    for (int j = 0; j <= 4; ++j) {
        const double c = pk[j] * f[j];
        resid += c;
        scale = std::max(scale, std::abs(c));
        if (std::abs(f[j] - f_shallow[j]) > 1e-10 * (std::abs(f[j]) + 1.0))
            throw std::runtime_error("ode_residual_f: series depth insufficient at this (t,x)");
    }
    return std::abs(resid) / std::max(scale, 1e-300);
}

MonotonicityReport monotonicity_scan(double a, double b, double x,
                                     const std::vector<double>& t_grid) {
    if (!(b > 0) || !(a >= b)) throw std::invalid_argument("monotonicity_scan: need a >= b > 0");
    if (!(x > 0)) throw std::invalid_argument("monotonicity_scan: need x > 0");
    if (t_grid.size() < 2 || !std::is_sorted(t_grid.begin(), t_grid.end()))
        throw std::invalid_argument("monotonicity_scan: t_grid must be ascending with >= 2 points");

    MonotonicityReport rep;
    rep.min_forward_diff = std::numeric_limits<double>::infinity();
    double prev = kummer_m_log(KummerArgs{{a, t_grid[0]}, b, x}).log_magnitude;
    for (size_t i = 1; i < t_grid.size(); ++i) {
        const double cur = kummer_m_log(KummerArgs{{a, t_grid[i]}, b, x}).log_magnitude;
        const double diff = cur - prev;
        rep.min_forward_diff = std::min(rep.min_forward_diff, diff);
        if (diff < -1e-11) {
            rep.ok = false;
            ++rep.violations;
        }
        prev = cur;
    }
    return rep;
}

ConjectureReport conjecture_scan(double u0, double b, double x, double y,
                                 const std::vector<double>& v_grid) {
    if (!(u0 > 0) || !(b > 0)) throw std::invalid_argument("conjecture_scan: need u0, b > 0");
    if (!(x > y) || !(y > 0)) throw std::invalid_argument("conjecture_scan: need x > y > 0");
    if (v_grid.size() < 2 || !std::is_sorted(v_grid.begin(), v_grid.end()))
        throw std::invalid_argument("conjecture_scan: v_grid must be ascending with >= 2 points");

    ConjectureReport rep;
    double prev_q = 0.0, prev_d = 0.0;
    for (size_t i = 0; i < v_grid.size(); ++i) {
        const std::complex<double> av(u0 * x, v_grid[i] * x);
        const double ln = kummer_m_log(KummerArgs{av, b, y}).log_magnitude;
        const double ld = kummer_m_log(KummerArgs{av, b, x}).log_magnitude;
        const double quot = ln - ld;
        if (i > 0) {
            const double jump = quot - prev_q;  // conjecture: <= 0
            if (jump > rep.worst_quotient_jump) {
                rep.worst_quotient_jump = jump;
                rep.worst_quotient_v = v_grid[i];
            }
            if (jump > 1e-11) rep.quotient_decreasing = false;
            const double drop = prev_d - ld;  // proven: <= 0
            if (drop > rep.worst_denominator_drop) {
                rep.worst_denominator_drop = drop;
                rep.worst_denominator_v = v_grid[i];
            }
            if (drop > 1e-11) rep.denominator_increasing = false;
        }
        prev_q = quot;
        prev_d = ld;
    }
    return rep;
}

} // namespace cirmax
