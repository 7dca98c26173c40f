#include "cirmax/kummer.hpp"

#include <limits>

#include "cirmax/detail/kummer_engine.hpp"
#include "cirmax/detail/kummer_wide.hpp"

namespace cirmax {
namespace {

using detail::cwide;
using detail::wide;

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kLogMaxTerm = 644.7;   // ln(1e280)
constexpr double kLogDblMax = 709.78;

// Magnitude/phase plus the linear value when it fits a double.
struct MEval {
    double log_mag;
    double phase;
    std::complex<double> value;
};

template <typename C>
bool needs_wide(const detail::SeriesResult<C, double>& r, double tol) {
    using std::abs;
    const double as = abs(r.sum);
    if (!(as > 0) || !std::isfinite(as)) return true;
    const double max_log = std::log(r.max_term) + static_cast<double>(r.scale2) * kLn2;
    const double cancel = r.max_term / as;
    return max_log > kLogMaxTerm || cancel > 1e10 ||
           cancel * std::numeric_limits<double>::epsilon() > tol;
}

MEval pack_double(const std::complex<double>& sum, long scale2) {
    const double am = std::abs(sum);
    const double log_mag = std::log(am) + static_cast<double>(scale2) * kLn2;
    std::complex<double> v(0.0, 0.0);
    if (log_mag < kLogDblMax)
        v = {std::ldexp(sum.real(), static_cast<int>(scale2)),
             std::ldexp(sum.imag(), static_cast<int>(scale2))};
    return {log_mag, std::arg(sum), v};
}

MEval pack_double(double sum, long scale2) {
    return pack_double(std::complex<double>(sum, 0.0), scale2);
}

MEval pack_wide(const cwide& sum, long scale2) {
    using std::atan2;
    using std::log;
    const wide am = abs(sum);
    if (am == 0) return {-std::numeric_limits<double>::infinity(), 0.0, {0.0, 0.0}};
    const double log_mag = static_cast<double>(log(am)) + static_cast<double>(scale2) * kLn2;
    const double phase = static_cast<double>(atan2(sum.imag(), sum.real()));
    std::complex<double> v(0.0, 0.0);
    if (log_mag < kLogDblMax) {
        const int s = static_cast<int>(scale2);
        v = {static_cast<double>(ldexp(sum.real(), s)), static_cast<double>(ldexp(sum.imag(), s))};
    }
    return {log_mag, phase, v};
}

MEval pack_wide(const wide& sum, long scale2) {
    return pack_wide(cwide(sum, wide(0)), scale2);
}

MEval eval_m(const KummerArgs& args, double tol, bool derivative) {
    args.validate();
    check_tol(tol);
    const wide wb(args.b), wx(args.x), wtol(tol);

    if (args.a.imag() == 0.0) {
        const double a = args.a.real();
        auto r = derivative ? detail::kummer_sum_da<double, double>(a, args.b, args.x, tol)
                            : detail::kummer_sum<double, double>(a, args.b, args.x, tol);
        if (!needs_wide(r, tol)) return pack_double(r.sum, r.scale2);
        auto rw = derivative ? detail::kummer_sum_da<wide, wide>(wide(a), wb, wx, wtol)
                             : detail::kummer_sum<wide, wide>(wide(a), wb, wx, wtol);
        return pack_wide(rw.sum, rw.scale2);
    }

    auto r = derivative
                 ? detail::kummer_sum_da<std::complex<double>, double>(args.a, args.b, args.x, tol)
                 : detail::kummer_sum<std::complex<double>, double>(args.a, args.b, args.x, tol);
    if (!needs_wide(r, tol)) return pack_double(r.sum, r.scale2);
    const cwide wa(wide(args.a.real()), wide(args.a.imag()));
    auto rw = derivative ? detail::kummer_sum_da<cwide, wide>(wa, wb, wx, wtol)
                         : detail::kummer_sum<cwide, wide>(wa, wb, wx, wtol);
    return pack_wide(rw.sum, rw.scale2);
}

} // namespace

std::complex<double> kummer_m(const KummerArgs& args, double tol) {
    const MEval e = eval_m(args, tol, false);
    if (e.log_mag >= kLogDblMax)
        throw std::overflow_error("kummer_m: |M| exceeds double range, use kummer_m_log");
    return e.value;
}

LogComplex kummer_m_log(const KummerArgs& args, double tol) {
    const MEval e = eval_m(args, tol, false);
    return LogComplex{e.log_mag, LogComplex::normalize_phase(e.phase)};
}

std::complex<double> kummer_m_da(const KummerArgs& args, double tol) {
    const MEval e = eval_m(args, tol, true);
    if (e.log_mag >= kLogDblMax)
        throw std::overflow_error("kummer_m_da: |dM/da| exceeds double range");
    return e.value;
}

std::complex<double> digamma_diff(std::complex<double> a, int r) {
    if (r < 0) throw std::invalid_argument("digamma_diff: r must be nonnegative");
    detail::Kahan<std::complex<double>> acc;
    for (int j = 0; j < r; ++j) {
        const std::complex<double> d = a + static_cast<double>(j);
        if (d == std::complex<double>(0.0, 0.0))
            throw std::domain_error("digamma_diff: pole at nonpositive integer a");
        acc.add(1.0 / d);
    }
    return acc.sum;
}

SaddlePhase saddle_phase(std::complex<double> u) {
    if (u == std::complex<double>(0.0, 0.0))
        throw std::domain_error("saddle_phase: u must be nonzero");
    const std::complex<double> root = std::sqrt(1.0 + 4.0 * u);
    const std::complex<double> t0 = 0.5 * (1.0 + root);
    const std::complex<double> psi = t0 + u * std::log(t0 / (t0 - 1.0));
    return {t0, psi, u};
}

LogComplex kummer_asymp_prop_a(std::complex<double> u, double b, double x, double eps) {
    if (!(eps > 0) || !(eps < M_PI / 2))
        throw std::invalid_argument("kummer_asymp_prop_a: eps must lie in (0, pi/2)");
    if (!(x >= 1))
        throw std::invalid_argument("kummer_asymp_prop_a: x must be >= 1");
    if (!(b > 0))
        throw std::invalid_argument("kummer_asymp_prop_a: b must be positive");
    if (!(u.real() > 0) || std::abs(std::arg(u)) > M_PI / 2 - eps)
        throw std::domain_error("kummer_asymp_prop_a: need Re u > 0 with |arg u| <= pi/2 - eps");

    const SaddlePhase sp = saddle_phase(u);
    const std::complex<double> root = 2.0 * sp.t0 - 1.0;
    const std::complex<double> log_m =
        std::lgamma(b) - 0.5 * std::log(2.0 * M_PI) - 0.25 * std::log(1.0 + 4.0 * u) +
        b * std::log(0.5 * (root - 1.0)) + (0.5 - b) * std::log(u * x) + x * sp.psi_t0;
    return LogComplex::from_log(log_m);
}

BesselRegimeResult kummer_bessel_regime(std::complex<double> a, double b, double y) {
    if (!(b > 0) || !std::isfinite(b))
        throw std::invalid_argument("kummer_bessel_regime: b must be positive and finite");
    if (!(y >= 0) || !std::isfinite(y))
        throw std::invalid_argument("kummer_bessel_regime: y must be nonnegative and finite");

    const std::complex<double> w = (a - 0.5 * b) * y;
    const std::complex<double> z = 2.0 * std::sqrt(w);
    const double az = std::abs(z);

    if (az <= 30.0 || (z.real() < 15.0 && az <= 250.0)) {
        // 0F1(;b;w) summed outright; entire in w, so this branch is exact up
        // to roundoff and the only asymptotic error is the regime itself.
        const cwide ww(wide(w.real()), wide(w.imag()));
        const wide wb(b);
        cwide term(1), sum(0);
        for (int k = 0; k < 100000; ++k) {
            sum += term;
            term *= ww / ((wb + k) * wide(k + 1));
            if (abs(term) < wide(1e-40) * abs(sum) && k > az) break;
        }
        sum *= exp(wide(y) / 2);
        const std::complex<double> value = detail::to_complex(sum);
        const wide am = abs(sum);
        LogComplex lv{-std::numeric_limits<double>::infinity(), 0.0};
        if (am > 0)
            lv = LogComplex{static_cast<double>(log(am)),
                            LogComplex::normalize_phase(
                                static_cast<double>(atan2(sum.imag(), sum.real())))};
        return {value, lv, "bessel"};
    }

    if (z.real() < 15.0)
        throw std::domain_error(
            "kummer_bessel_regime: oscillatory argument too large for the series branch");

    // Dominant exponential of I_{b-1}: Gamma(b)/(2 sqrt(pi)) e^{y/2 + 2 sqrt(w)} w^{1/4 - b/2}.
    const std::complex<double> log_v = std::lgamma(b) - std::log(2.0 * std::sqrt(M_PI)) +
                                       0.5 * y + z + (0.25 - 0.5 * b) * std::log(w);
    const LogComplex lv = LogComplex::from_log(log_v);
    return {lv.value(), lv, "exponential"};
}

double pfq_2f2(double b, int k, double x) {
    if (!(b > 0) || k < 0 || !(x >= 0) || !std::isfinite(x))
        throw std::invalid_argument("pfq_2f2: need b > 0, k >= 0, x >= 0");
    // 2F2(1,1; b+k+1, k+2; x): positive terms, ratio (r+1)x/((b+k+1+r)(k+2+r)).
    detail::Kahan<double> acc;
    double term = 1.0;
    const long budget = detail::series_budget(0.0, x);
    for (long r = 0; r <= budget; ++r) {
        acc.add(term);
        term *= (r + 1) * x / ((b + k + 1 + r) * (k + 2 + r));
        if (term < 1e-13 * acc.sum && r > x) return acc.sum;
    }
    throw NonConvergence("pfq_2f2: series did not settle");
}

mpq_class harmonic(long n, int order) {
    if (n < 0 || order < 1)
        throw std::invalid_argument("harmonic: need n >= 0 and order >= 1");
    mpq_class h(0);
    for (long j = 1; j <= n; ++j) {
        mpz_class d;
        mpz_ui_pow_ui(d.get_mpz_t(), static_cast<unsigned long>(j),
                      static_cast<unsigned long>(order));
        h += mpq_class(1) / mpq_class(d);
    }
    return h;
}

namespace detail {

wide kummer_m_wide(const wide& a, const wide& b, const wide& x, const wide& rel_stop) {
    auto r = kummer_sum<wide, wide>(a, b, x, rel_stop);
    return ldexp(r.sum, static_cast<int>(r.scale2));
}

cwide kummer_m_wide(const cwide& a, const wide& b, const wide& x, const wide& rel_stop) {
    auto r = kummer_sum<cwide, wide>(a, b, x, rel_stop);
    return cwide(ldexp(r.sum.real(), static_cast<int>(r.scale2)),
                 ldexp(r.sum.imag(), static_cast<int>(r.scale2)));
}

wide kummer_m_da_wide(const wide& a, const wide& b, const wide& x, const wide& rel_stop) {
    auto r = kummer_sum_da<wide, wide>(a, b, x, rel_stop);
    return ldexp(r.sum, static_cast<int>(r.scale2));
}

} // namespace detail

} // namespace cirmax
