#include "cirmax/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <iostream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cirmax/asymptotics.hpp"
#include "cirmax/eigen.hpp"
#include "cirmax/kummer.hpp"

namespace cirmax {
namespace {

using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;

struct Integrand {
    DimensionlessArgs d;
    double c;
    double kum_tol;

    std::complex<double> log_F(double v) const {
        const std::complex<double> s(c, v);
        std::complex<double> lf = d.lambda * s - std::log(s);
        lf -= kummer_m_log({s, d.b, d.x}, kum_tol).log();
        if (d.y > 0) lf += kummer_m_log({s, d.b, d.y}, kum_tol).log();
        return lf;
    }
};

double peak_width(const DimensionlessArgs& d) {
    const SaddleData sd = saddle_data(d.lambda, d.b);
    return std::sqrt(d.x / sd.phi2_u0);
}

} // namespace

ContourSpec ContourSpec::defaults(const DimensionlessArgs& d, double tol) {
    d.validate();
    const SaddleData sd = saddle_data(d.lambda, d.b);
    const double lo = std::min(1.0, 1.0 / d.lambda);
    const double hi = 650.0 / d.lambda;
    const double c = std::clamp(sd.u0 * d.x, lo, hi);
    const double sigma = peak_width(d);
    const double im_cut = std::min(50.0 * (1.0 + d.x / d.lambda), 25.0 * sigma);
    return ContourSpec{c, std::max(im_cut, 4.0 * sigma), 4.0 * sigma, tol};
}

BromwichResult bromwich_I_full(const DimensionlessArgs& d, const ContourSpec& c) {
    d.validate();
    c.validate();

    Integrand f{d, c.abscissa, std::max(1e-15, std::min(1e-12, c.tol * 1e-3))};
    const double L0 = f.log_F(0.0).real();
    const double sigma = peak_width(d);

    auto h = [&](double v) {
        const std::complex<double> lf = f.log_F(v);
        return std::exp(lf.real() - L0) * std::cos(lf.imag());
    };

    // Panels of width c.step, each integrated adaptively; the peak region is
    // oscillation-free (the abscissa sits near the saddle, where the phase is
    // stationary), and outer panels get bisected as the phase speeds up.
    double Q = 0.0, err = 0.0;
    double v = 0.0;
    const double panel_tol = c.tol * 1e-3;

    // Remaining tail mass past v: the M-ratio decays like
    // exp(-sqrt(2 v)(sqrt(x)-sqrt(y))) far out, so it is about
    // |h(v)| * 2 sqrt(v)/a_dec, plus a peak width for the near region.
    const double a_dec = std::sqrt(2.0) * (std::sqrt(d.x) - std::sqrt(d.y));
    auto tail_est = [&] {
        const double tail_width = 2.0 * std::sqrt(v) / a_dec + sigma;
        return std::abs(h(v)) * tail_width;
    };
    auto tail_done = [&] { return tail_est() <= 0.1 * c.tol * std::max(std::abs(Q), 1e-8); };

    // Far panels carry 20+ digits of series cancellation per point, which
    // forces the Kummer evaluation onto its slow extended-precision path, so
    // a panel whose mass is far below the target gets a looser relative
    // tolerance (capped so its error estimate still has to mean something).
    auto add_panel = [&](double a, double b) {
        const double mass = std::abs(h(a)) * (b - a);
        const double need = 0.02 * c.tol * std::max(std::abs(Q), 1e-8);
        const double ptol =
            (mass > 0 && need > mass * panel_tol) ? std::min(need / mass, 1e-4) : panel_tol;
        double e = 0.0;
        Q += Quad::integrate(h, a, b, 12, ptol, &e);
        err += e;
    };

    // The envelope of h decays monotonically in v, so once two consecutive
    // panel ends clear the tail bar (two, to dodge a cosine node) the rest of
    // the initial window is dead and the sweep can stop early.
    int clear = 0;
    while (v < c.im_cut) {
        const double next = std::min(v + c.step, c.im_cut);
        add_panel(v, next);
        v = next;
        if (tail_done()) {
            if (++clear >= 2) break;
        } else {
            clear = 0;
        }
    }

    // Project how far out the tail stays relevant. Each doubling round also
    // raises the cost of every Kummer evaluation (series length grows like
    // sqrt(|s| x)), so a slowly decaying tail has to be rejected up front
    // rather than ground through.
    const double need = -std::log(0.1 * c.tol * std::max(std::abs(Q), 1e-8));
    const double v_need = std::pow((need + 10.0) / a_dec, 2);
    if (v_need > 4e6 && !tail_done())
        throw std::runtime_error("bromwich_I: contour tail decays too slowly (y too close to x)");

    // Extend past im_cut, doubling, until the remaining tail cannot matter.
    int rounds = 0;
    while (!tail_done()) {
        if (++rounds > 40) {
            std::cerr << "bromwich_I: tail estimate still " << tail_est()
                      << " after extending to v=" << v << "\n";
            break;
        }
        const double stop = 2.0 * v;
        while (v < stop) {
            const double next = std::min(v + std::max(c.step, v * 0.25), stop);
            add_panel(v, next);
            v = next;
        }
    }

    BromwichResult r{};
    const double raw_log = L0 + std::log(std::abs(Q)) - std::log(M_PI);
    r.log_value = (Q > 0) ? raw_log : -std::numeric_limits<double>::infinity();
    const double raw = std::exp(L0) * Q / M_PI;
    r.quad_error = err / std::max(std::abs(Q), 1e-300);
    r.clamp_excess = 0.0;
    if (raw < 0.0) {
        r.clamp_excess = -raw;
        r.value = 0.0;
    } else if (raw > 1.0) {
        r.clamp_excess = raw - 1.0;
        r.value = 1.0;
    } else {
        r.value = raw;
    }
    if (r.clamp_excess > c.tol)
        std::cerr << "bromwich_I: clamped by " << r.clamp_excess << " (tol " << c.tol << ")\n";
    return r;
}

double bromwich_I(const DimensionlessArgs& d, const ContourSpec& c) {
    return bromwich_I_full(d, c).value;
}

double bromwich_I(const DimensionlessArgs& d) {
    return bromwich_I_full(d, ContourSpec::defaults(d)).value;
}

double bromwich_fold_residual(const DimensionlessArgs& d, const ContourSpec& c) {
    d.validate();
    c.validate();
    Integrand f{d, c.abscissa, 1e-12};
    const double L0 = f.log_F(0.0).real();
    const double sigma = peak_width(d);
    double worst = 0.0;
    for (double v : {0.5 * sigma, sigma, 2.0 * sigma}) {
        const std::complex<double> up = std::exp(f.log_F(v) - L0);
        const std::complex<double> dn = std::exp(f.log_F(-v) - L0);
        worst = std::max(worst, std::abs(dn - std::conj(up)) /
                                    std::max(std::abs(up), 1e-300));
    }
    return worst;
}

double cir_running_max_cdf(const CirParams& p, CdfMethod method) {
    const DimensionlessArgs d = to_dimensionless(p);
    switch (method) {
        case CdfMethod::bromwich:
            return bromwich_I(d);
        case CdfMethod::eigen:
            return eigen_I(d);
        case CdfMethod::asymp_small_y:
            return std::clamp(tail_asymp_small_y(d.lambda, d.b, d.x).value, 0.0, 1.0);
        case CdfMethod::asymp_fixed_y:
            return std::clamp(tail_asymp_fixed_y(d.lambda, d.b, d.x, d.y).value, 0.0, 1.0);
    }
    throw std::logic_error("cir_running_max_cdf: unknown method");
}

} // namespace cirmax
