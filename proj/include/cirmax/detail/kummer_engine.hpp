#pragma once

// Series engine shared by the confluent hypergeometric entry points.
//
// Sums t_0 + t_1 + ... with t_0 = 1 and t_{n+1} = t_n * (a+n) x / ((b+n)(n+1)),
// i.e. M(a,b,x), and the companion pole-free derivative series for dM/da.
// The accumulator is rescaled by powers of two whenever it threatens the
// carrier's exponent range, so the magnitude of the true sum is unrestricted;
// only relative accuracy is limited, by eps_carrier * cancellation.

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "../types.hpp"

namespace cirmax::detail {

template <typename C, typename R>
struct SeriesResult {
    C sum;              // true value = sum * 2^scale2
    long scale2 = 0;
    R max_term{0};      // scaled consistently with sum
    long n_terms = 0;

    R cancellation() const {
        using std::abs;
        const R as = abs(sum);
        if (as == 0) return std::numeric_limits<R>::infinity();
        return max_term / as;
    }
};

inline long series_budget(double abs_a, double x) {
    return static_cast<long>(10.0 * (abs_a + x + 50.0)) + 16;
}

template <typename R>
struct ScaleGuard {
    const R up, down;
    long scale2 = 0;
    ScaleGuard() : up(ldexp(R(1), 600)), down(ldexp(R(1), -600)) {}

    template <typename... Cs>
    void rescale(const R& lead, Cs&... vals) {
        if (lead > up) {
            ((vals *= down), ...);
            scale2 += 600;
        } else if (lead < down && lead > 0) {
            ((vals *= up), ...);
            scale2 -= 600;
        }
    }
};

// Kahan-compensated accumulator.
template <typename C>
struct Kahan {
    C sum{0}, comp{0};
    void add(const C& v) {
        const C y = v - comp;
        const C t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    void scale(const C& f) { sum *= f; comp *= f; }
};

template <typename C, typename R>
SeriesResult<C, R> kummer_sum(const C& a, const R& b, const R& x, const R& rel_stop)
{
    using std::abs;
    const long budget = series_budget(static_cast<double>(abs(a)), static_cast<double>(x));
    const R eps = std::numeric_limits<R>::epsilon();

    C term(1);
    Kahan<C> acc;
    R max_term(0), prev_at = std::numeric_limits<R>::infinity();
    ScaleGuard<R> sg;
    int quiet = 0;

    for (long n = 0; n <= budget; ++n) {
        acc.add(term);
        const R at = abs(term);
        if (at > max_term) max_term = at;

        const R as = abs(acc.sum);
        const R thresh = rel_stop * R(0.01) * (as + max_term * eps);
        if (n > 0 && (at < prev_at || at == 0) && at <= thresh)
            ++quiet;
        else
            quiet = 0;
        if (quiet >= 3)
            return {acc.sum, sg.scale2, max_term, n + 1};

        prev_at = at;
        term *= (a + R(n)) * x / ((b + R(n)) * R(n + 1));

        const R lead = std::max(abs(term), as);
        if (lead > sg.up || lead < sg.down) {
            const long before = sg.scale2;
            sg.rescale(lead, term, acc.sum, acc.comp, max_term);
            if (sg.scale2 != before) prev_at = abs(term);
        }
    }
    std::ostringstream os;
    os << "kummer series did not settle within " << budget << " terms (|a|=" << abs(a)
       << ", b=" << b << ", x=" << x << ")";
    throw NonConvergence(os.str());
}

// d/da of the series above, with the Pochhammer derivative carried as a
// polynomial pair so no digamma poles appear at nonpositive integer a:
//   P_r = (a)_r,  S_r = d/da (a)_r,  P_{r+1} = P_r (a+r),  S_{r+1} = S_r (a+r) + P_r.
// Both are folded with the x^r/((b)_r r!) weight on the fly.
template <typename C, typename R>
SeriesResult<C, R> kummer_sum_da(const C& a, const R& b, const R& x, const R& rel_stop)
{
    using std::abs;
    const long budget = series_budget(static_cast<double>(abs(a)), static_cast<double>(x));
    const R eps = std::numeric_limits<R>::epsilon();

    C pterm(1), sterm(0);
    Kahan<C> acc;
    R max_term(0), prev_at = std::numeric_limits<R>::infinity();
    ScaleGuard<R> sg;
    int quiet = 0;

    for (long n = 0; n <= budget; ++n) {
        acc.add(sterm);
        const R at = abs(sterm);
        if (at > max_term) max_term = at;

        const R as = abs(acc.sum);
        const R thresh = rel_stop * R(0.01) * (as + max_term * eps);
        if (n > 0 && (at < prev_at || at == 0) && at <= thresh && abs(pterm) <= thresh)
            ++quiet;
        else
            quiet = 0;
        if (quiet >= 3)
            return {acc.sum, sg.scale2, max_term, n + 1};

        prev_at = at;
        const R d = x / ((b + R(n)) * R(n + 1));
        sterm = (sterm * (a + R(n)) + pterm) * d;
        pterm *= (a + R(n)) * d;

        const R lead = std::max({abs(sterm), abs(pterm), as});
        if (lead > sg.up || lead < sg.down) {
            const long before = sg.scale2;
            sg.rescale(lead, sterm, pterm, acc.sum, acc.comp, max_term);
            if (sg.scale2 != before) prev_at = abs(sterm);
        }
    }
    std::ostringstream os;
    os << "kummer da series did not settle within " << budget << " terms (|a|=" << abs(a)
       << ", b=" << b << ", x=" << x << ")";
    throw NonConvergence(os.str());
}

} // namespace cirmax::detail
