#pragma once

// Confluent hypergeometric kernel M(a,b,x) = 1F1(a;b;x) and the companions
// the transform routes need: a log-space evaluation that cannot overflow,
// the derivative in the first parameter, the large-argument asymptotic with
// a = u*x, the large-|a| Bessel regime, and two small auxiliary sums.

#include <complex>
#include <string>

#include <gmpxx.h>

#include "types.hpp"

namespace cirmax {

struct KummerArgs {
    std::complex<double> a;
    double b;
    double x;

    void validate() const {
        if (!(b > 0) || !std::isfinite(b))
            throw std::invalid_argument("KummerArgs: b must be positive and finite");
        if (!(x >= 0) || !std::isfinite(x))
            throw std::invalid_argument("KummerArgs: x must be nonnegative and finite");
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw std::invalid_argument("KummerArgs: a must be finite");
    }
};

inline void check_tol(double tol) {
    if (!(tol > 0) || !(tol <= 1e-3))
        throw std::invalid_argument("tol must lie in (0, 1e-3]");
}

// M(a,b,x) as a double complex. Throws std::overflow_error when the result
// magnitude exceeds the double range; callers expecting growth like e^x
// should use kummer_m_log instead.
std::complex<double> kummer_m(const KummerArgs& args, double tol = 1e-12);

// log M(a,b,x), safe for x up to 1e4 and |a| up to 1e5.
LogComplex kummer_m_log(const KummerArgs& args, double tol = 1e-12);

// dM/da at fixed (b,x). Finite for every complex a, including nonpositive
// integers where the digamma representation has poles.
std::complex<double> kummer_m_da(const KummerArgs& args, double tol = 1e-12);

// psi(a+r) - psi(a) summed directly as 1/a + 1/(a+1) + ... + 1/(a+r-1).
std::complex<double> digamma_diff(std::complex<double> a, int r);

// Phase data of the integrand maximum governing M(u*x, b, x) at large x:
// t0 solves t(t-1) = u with Re t > 1/2, psi(t0) = t0 + u*log(t0/(t0-1)).
struct SaddlePhase {
    std::complex<double> t0;
    std::complex<double> psi_t0;
    std::complex<double> u;
};

SaddlePhase saddle_phase(std::complex<double> u);

// Leading-order approximation of M(u*x, b, x) for large x at fixed u with
// Re(u) > 0 and |arg u| <= pi/2 - eps. Relative error decays like 1/x.
LogComplex kummer_asymp_prop_a(std::complex<double> u, double b, double x, double eps = 0.01);

// M(a,b,y) for |a|*y large at moderate y, via the limit toward
// e^{y/2} 0F1(;b;(a-b/2)y). Mode "bessel" keeps the full entire series;
// "exponential" switches to the leading exponential growth of I_{b-1} once
// the effective Bessel argument is large.
struct BesselRegimeResult {
    std::complex<double> value;
    LogComplex log_value;
    std::string mode;
};

BesselRegimeResult kummer_bessel_regime(std::complex<double> a, double b, double y);

// 2F2(1,1; b+k+1, k+2; x), absolute/relative accuracy 1e-10 or better.
double pfq_2f2(double b, int k, double x);

// Exact generalized harmonic number sum_{j=1}^n 1/j^order.
mpq_class harmonic(long n, int order = 1);

} // namespace cirmax
