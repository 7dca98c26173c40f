#include "cirmax/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cirmax/asymptotics.hpp"
#include "cirmax/detail/kummer_wide.hpp"
#include "cirmax/kummer.hpp"

namespace cirmax {
namespace {

using detail::cwide;
using detail::to_double;
using detail::wide;

// Sign probe of M(-s,b,x). The double engine escalates internally once the
// alternating series cancels badly, so the sign is trustworthy everywhere.
double m_at(double s, double b, double x) {
    return kummer_m(KummerArgs{{-s, 0.0}, b, x}, 1e-3).real();
}

// Local zero spacing is ~1 while s is below 4x/pi^2 and pi*sqrt(s/x) beyond;
// 0.4*pi*sqrt((s+1)/x) stays under 0.8 in the first regime and under half a
// gap in the second, so single steps cannot straddle two sign changes.
double scan_step(double s, double x) {
    return 0.4 * M_PI * std::sqrt((s + 1.0) / x);
}

struct PolishedZero {
    wide s;
    wide mda;        // dM/da at a = -s
    double residual; // |M(-s,b,x)| / (|dM/da| * s)
};

// Safeguarded Newton in extended precision inside a sign-change bracket.
// F(s) = M(-s,b,x), F'(s) = -dM/da; steps leaving the bracket fall back to
// bisection, and every iterate tightens the bracket.
PolishedZero refine_wide(wide lo, wide hi, wide flo, wide start, double b, double x) {
    const wide wb = b, wx = x;
    const wide rel = wide("1e-45");
    wide s = start, m = 0, md = 1;
    bool converged = false;
    for (int it = 0; it < 80; ++it) {
        m = detail::kummer_m_wide(-s, wb, wx, rel);
        md = detail::kummer_m_da_wide(-s, wb, wx, rel);
        if ((m > 0) == (flo > 0)) {
            lo = s;
            flo = m;
        } else {
            hi = s;
        }
        if (md != 0) {
            const wide cand = s + m / md;
            if (cand > lo && cand < hi) {
                const wide move = abs(cand - s);
                s = cand;
                if (move <= abs(s) * wide("1e-35") + wide("1e-300")) {
                    converged = true;
                    break;
                }
                continue;
            }
        }
        s = (lo + hi) / 2;
        if (hi - lo <= abs(s) * wide("1e-35") + wide("1e-300")) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NonConvergence("zero refinement stalled: derivative too small for a simple zero");
    m = detail::kummer_m_wide(-s, wb, wx, rel);
    md = detail::kummer_m_da_wide(-s, wb, wx, rel);
    if (md == 0)
        throw NonConvergence("zero refinement: vanishing dM/da, zero not simple");
    PolishedZero z;
    z.s = s;
    z.mda = md;
    z.residual = to_double(abs(m) / (abs(md) * s));
    return z;
}

// Produces consecutive zeros, drawing seeds from a prebuilt table while it
// lasts and extending by a fresh sign-change scan afterwards.
struct ZeroStream {
    double b, x;
    const ZeroTable* pre = nullptr;
    size_t pre_idx = 0;
    double scan_s = 0.0;
    double scan_f = 1.0; // M(0,b,x) = 1
    bool scan_fresh = true;
    double last_zero = 0.0;

    PolishedZero next(double s_budget) {
        if (pre && pre_idx < pre->zeros.size()) {
            const double seed = pre->zeros[pre_idx++];
            const double w = scan_step(seed, x);
            const wide lo = wide(seed) - w, hi = wide(seed) + w;
            const wide flo = detail::kummer_m_wide(-lo, wide(b), wide(x), wide("1e-45"));
            PolishedZero z = refine_wide(lo, hi, flo, wide(seed), b, x);
            after_zero(z);
            return z;
        }
        if (!scan_fresh) {
            scan_s = last_zero + 0.05 * scan_step(last_zero, x);
            scan_f = m_at(scan_s, b, x);
            scan_fresh = true;
        }
        // march to the next sign change
        double lo = scan_s, flo = scan_f, hi = lo, fhi = flo;
        for (;;) {
            hi = lo + scan_step(lo, x);
            if (hi > s_budget)
                throw NonConvergence("zero bracketing exhausted its grid budget");
            fhi = m_at(hi, b, x);
            if (fhi == 0.0 || (fhi > 0) != (flo > 0)) break;
            lo = hi;
            flo = fhi;
        }
        scan_s = hi;
        scan_f = fhi;
        // cheap double bisection before the extended-precision polish
        for (int i = 0; i < 20 && hi - lo > 1e-9 * (hi + 1.0); ++i) {
            const double mid = 0.5 * (lo + hi);
            const double fm = m_at(mid, b, x);
            if (fm == 0.0) {
                lo = std::nextafter(mid, 0.0);
                hi = std::nextafter(mid, hi);
                flo = m_at(lo, b, x);
                break;
            }
            if ((fm > 0) == (flo > 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        PolishedZero z = refine_wide(wide(lo), wide(hi), wide(flo), wide(0.5 * (lo + hi)), b, x);
        after_zero(z);
        return z;
    }

    void after_zero(const PolishedZero& z) {
        const double zs = to_double(z.s);
        if (zs <= last_zero && last_zero > 0.0)
            throw NonConvergence("zero stream not strictly increasing: duplicate or missed zero");
        last_zero = zs;
        if (zs >= scan_s) scan_fresh = false;
    }
};

void check_refine_tol(double tol) {
    if (!(tol > 0) || !(tol <= 1e-3))
        throw std::invalid_argument("refine_tol must lie in (0, 1e-3]");
}

struct ResidueAccum {
    wide sum = 0;                    // sum of residue terms; I = 1 + sum
    std::vector<ResidueTerm> terms;
};

// Shared driver for eigen_I / eigen_terms / eigen_net_k0.
ResidueAccum accumulate_residues(const DimensionlessArgs& d, int K, double tol,
                                 const ZeroTable* table, bool keep_terms) {
    d.validate();
    check_tol(tol);
    if (table && (table->b != d.b || table->x != d.x))
        throw std::invalid_argument("eigen: ZeroTable built for different (b,x)");

    // Magnitude scale of the answer, from the saddle asymptote, bounds how
    // deep the pole ladder must be mined: contributions past s_stop are below
    // tol * scale * e^{-5}.
    double iscale_log = 0.0;
    try {
        const double lv = tail_asymp_small_y(d.lambda, d.b, d.x).log_value;
        if (std::isfinite(lv)) iscale_log = std::clamp(lv, std::log(1e-250), 0.0);
    } catch (const std::exception&) {
    }
    const double s_stop = (-(std::log(tol) + iscale_log) + 5.0) / d.lambda + 2.0;
    const double s_budget = 2.0 * s_stop + 50.0;

    ZeroStream stream{d.b, d.x, table};
    const wide wlam = d.lambda, wy = d.y, wb = d.b;
    ResidueAccum acc;
    const long kmax = (K > 0) ? K : std::numeric_limits<long>::max();
    double prev_at = std::numeric_limits<double>::infinity();
    int quiet = 0;
    for (long k = 0; k < kmax; ++k) {
        const PolishedZero z = stream.next(s_budget);
        if (to_double(z.s) > s_stop) break;
        const wide num = (d.y > 0) ? detail::kummer_m_wide(-z.s, wb, wy, wide("1e-45"))
                                   : wide(1);
        const wide term = -exp(-wlam * z.s) * num / (z.s * z.mda);
        acc.sum += term;
        if (keep_terms)
            acc.terms.push_back(ResidueTerm{static_cast<int>(k), to_double(z.s), to_double(num),
                                            to_double(z.mda), to_double(term)});
        const double at = to_double(abs(term));
        const double partial = to_double(abs(wide(1) + acc.sum));
        if (at < tol * std::max(1.0, partial) && (at < prev_at || at == 0.0)) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
        prev_at = at;
    }
    return acc;
}

} // namespace

ZeroTable find_zeros(double b, double x, int K, double refine_tol) {
    if (!(b > 0) || !std::isfinite(b) || !(x > 0) || !std::isfinite(x))
        throw std::invalid_argument("find_zeros: b and x must be positive and finite");
    if (K < 1) throw std::invalid_argument("find_zeros: K must be >= 1");
    check_refine_tol(refine_tol);

    const double sk = static_cast<double>(K) + 2.0;
    const double s_budget = 4.0 * std::max(sk, M_PI * M_PI * sk * sk / (4.0 * x)) + 10.0;

    ZeroTable t{b, x, {}, {}, refine_tol};
    ZeroStream stream{b, x, nullptr};
    for (int k = 0; k < K; ++k) {
        const PolishedZero z = stream.next(s_budget);
        if (z.residual > refine_tol)
            throw NonConvergence("find_zeros: scaled residual above refine_tol after polish");
        t.zeros.push_back(to_double(z.s));
        t.residuals.push_back(z.residual);
    }
    return t;
}

double eigen_I(const DimensionlessArgs& d, int K, double tol, const ZeroTable* table) {
    const ResidueAccum acc = accumulate_residues(d, K, tol, table, false);
    const double raw = to_double(wide(1) + acc.sum);
    const double clamped = std::clamp(raw, 0.0, 1.0);
    if (std::abs(raw - clamped) > tol)
        std::cerr << "eigen_I: clamped by " << std::abs(raw - clamped) << " (tol " << tol << ")\n";
    return clamped;
}

std::vector<ResidueTerm> eigen_terms(const DimensionlessArgs& d, int K, double tol,
                                     const ZeroTable* table) {
    return accumulate_residues(d, K, tol, table, true).terms;
}

double eigen_net_k0(const DimensionlessArgs& d) {
    const ResidueAccum acc = accumulate_residues(d, 1, 1e-9, nullptr, false);
    return to_double(wide(1) + acc.sum);
}

double zero_asymp_large_x(int k, double b, double x) {
    if (k < 0) throw std::invalid_argument("zero_asymp_large_x: k must be >= 0");
    if (!(b > 0) || !(x > 0))
        throw std::invalid_argument("zero_asymp_large_x: b and x must be positive");
    return k + std::exp((b + 2.0 * k) * std::log(x) - x - std::lgamma(k + 1.0) -
                        std::lgamma(b + k));
}

double mprime_asymp(int k, double b, double x, bool refine_k0) {
    if (k < 0) throw std::invalid_argument("mprime_asymp: k must be >= 0");
    if (!(b > 0) || !(x > 0))
        throw std::invalid_argument("mprime_asymp: b and x must be positive");
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double log_lead = (k + 1.0) * std::log(x) -
                            (std::lgamma(b + k + 1.0) - std::lgamma(b)) - std::log(k + 1.0);
    double v = sign * std::exp(log_lead) * pfq_2f2(b, k, x);
    if (k == 0 && refine_k0) {
        // 2 s_0 sum_{r>=1} H_{r-1} x^r/((b)_r r), with e^{-x} folded into the
        // summand so neither factor overflows on its own
        double sw = 0.0, comp = 0.0;
        double u = std::exp(std::log(x) - std::log(b) - x); // r = 1 term, H_0 = 0
        double h = 0.0;
        for (int r = 1; r < 400000; ++r) {
            const double add = h * u; // h = H_{r-1}
            const double yk = add - comp;
            const double tk = sw + yk;
            comp = (tk - sw) - yk;
            sw = tk;
            if (r > x + 10 && std::abs(add) < 1e-17 * std::abs(sw)) break;
            h += 1.0 / r;
            u *= x * r / ((b + r) * (r + 1.0));
        }
        v -= 2.0 * std::exp(b * std::log(x) - std::lgamma(b)) * sw;
    }
    return v;
}

double summand_asymp(int k, const DimensionlessArgs& d) {
    d.validate();
    if (k < 0) throw std::invalid_argument("summand_asymp: k must be >= 0");
    if (k == 0) return 1.0;
    const double mky = (d.y > 0) ? kummer_m(KummerArgs{{-static_cast<double>(k), 0.0}, d.b, d.y}).real()
                                 : 1.0;
    // the derivative at the k-th zero alternates sign starting positive, and
    // the residue carries a leading minus, so the k-th summand has sign
    // (-1)^(k+1) times the sign of M(-k, b, y)
    const double sign = (k % 2 == 0) ? -1.0 : 1.0;
    const double logmag = (k + d.b) * std::log(d.x) - d.x - d.lambda * k - std::log(double(k)) -
                          std::lgamma(k + 1.0) - std::lgamma(d.b);
    return sign * mky * std::exp(logmag);
}

double net_k0_contribution(const DimensionlessArgs& d) {
    d.validate();
    const double s0 = std::exp(d.b * std::log(d.x) - d.x - std::lgamma(d.b));
    const double ay = (d.y > 0) ? (d.y / d.b) * pfq_2f2(d.b, 0, d.y) : 0.0;
    return s0 * (d.lambda + ay);
}

double wronskian_residual(std::complex<double> a, double b, double x) {
    if (a.imag() == 0.0)
        throw std::invalid_argument("wronskian_residual: a must have nonzero imaginary part");
    if (!(b > 0) || !(x > 0))
        throw std::invalid_argument("wronskian_residual: b and x must be positive");

    const std::complex<double> ma = kummer_m(KummerArgs{a, b, x});
    const std::complex<double> dma =
        (a / b) * kummer_m(KummerArgs{a + 1.0, b + 1.0, x}); // termwise d/dx
    const std::complex<double> mb = std::conj(ma), dmb = std::conj(dma);
    const std::complex<double> rhs_c =
        std::exp(b * std::log(x) - x) * (ma * dmb - mb * dma) / (std::conj(a) - a);
    const double rhs = rhs_c.real();

    using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;
    double lhs;
    if (b >= 1.0) {
        auto f = [&](double t) {
            if (t <= 0.0) return 0.0;
            const std::complex<double> m = kummer_m(KummerArgs{a, b, t});
            return std::pow(t, b - 1.0) * std::exp(-t) * std::norm(m);
        };
        lhs = Quad::integrate(f, 0.0, x, 15, 1e-11);
    } else {
        // t = tau^{1/b} absorbs the t^{b-1} endpoint singularity exactly
        auto f = [&](double tau) {
            if (tau <= 0.0) return 0.0;
            const double t = std::pow(tau, 1.0 / b);
            const std::complex<double> m = kummer_m(KummerArgs{a, b, t});
            return std::exp(-t) * std::norm(m) / b;
        };
        lhs = Quad::integrate(f, 0.0, std::pow(x, b), 15, 1e-11);
    }
    return std::abs(lhs - rhs) / std::abs(lhs);
}

std::string zero_table_csv(const ZeroTable& t) {
    std::string out = "k,s_k,residual\n";
    char buf[96];
    for (size_t k = 0; k < t.zeros.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", k, t.zeros[k], t.residuals[k]);
        out += buf;
    }
    return out;
}

} // namespace cirmax
