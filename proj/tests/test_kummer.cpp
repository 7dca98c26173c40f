#include <doctest.h>

#include <cmath>
#include <complex>

#include "cirmax/detail/kummer_wide.hpp"
#include "cirmax/kummer.hpp"

using namespace cirmax;
using cplx = std::complex<double>;

namespace {

double rel(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }

} // namespace

TEST_CASE("series values match 60-digit references") {
    CHECK(rel(kummer_m({{0.5, 0.5}, 1.5, 2.0}),
              {2.022759507839857855, 1.643577980921326483}) < 1e-14);
    CHECK(rel(kummer_m({{-2.5, 0}, 2, 7.5}), {1.972105950617349193, 0}) < 1e-13);
    CHECK(rel(kummer_m({{3, 4}, 0.7, 12.3}),
              {307782586.6996138146, 105242669.9971970355}) < 1e-13);
    CHECK(kummer_m({{2, 0}, 3, 1}).real() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(rel(kummer_m({{-1, 0}, 2, 0.5}), {1 - 0.5 / 2, 0}) < 1e-15);
}

TEST_CASE("log form matches the linear form and survives large arguments") {
    {
        const auto lin = kummer_m({{1.5, -0.7}, 2.0, 9.0});
        const auto lg = kummer_m_log({{1.5, -0.7}, 2.0, 9.0});
        CHECK(rel(lg.value(), lin) < 1e-12);
    }
    {
        const auto lg = kummer_m_log({{100, 50}, 1, 200});
        CHECK(lg.log_magnitude == doctest::Approx(407.2388012409252241).epsilon(1e-13));
        CHECK(lg.phase == doctest::Approx(1.588454428699983298).epsilon(1e-12));
    }
    {
        // far past double overflow: M(1,1,x) = e^x exactly
        const auto lg = kummer_m_log({{1, 0}, 1, 900});
        CHECK(lg.log_magnitude == doctest::Approx(900.0).epsilon(1e-12));
        CHECK(std::abs(lg.phase) < 1e-12);
    }
}

TEST_CASE("overflow raises in the linear form only") {
    CHECK_THROWS_AS((void)kummer_m({{1, 0}, 1, 800}), std::overflow_error);
    CHECK_NOTHROW((void)kummer_m_log({{1, 0}, 1, 800}));
}

TEST_CASE("reflection identity M(a,b,x) = e^x M(b-a,b,-x)") {
    using detail::cwide;
    using detail::wide;
    const struct {
        cplx a;
        double b, x;
    } probes[] = {{{0.7, 1.3}, 1.5, 3.0}, {{-1.2, 0.4}, 0.8, 7.0}, {{2.5, 0}, 2.5, 12.0}};
    for (const auto& p : probes) {
        const cplx lhs = kummer_m({p.a, p.b, p.x});
        const cwide refl = detail::kummer_m_wide(
            cwide(wide(p.b) - cwide(p.a.real(), p.a.imag())), wide(p.b), wide(-p.x),
            wide("1e-30"));
        const cplx rhs = std::exp(p.x) * cplx(static_cast<double>(refl.real()),
                                              static_cast<double>(refl.imag()));
        CHECK(rel(lhs, rhs) < 1e-9);
    }
}

TEST_CASE("differential equation residual vanishes") {
    // x M'' + (b - x) M' - a M = 0 with M' = (a/b) M(a+1,b+1,x)
    const struct {
        cplx a;
        double b, x;
    } probes[] = {{{1.2, 0.9}, 1.4, 5.0}, {{-0.8, 2.1}, 0.6, 11.0}, {{3.0, 0}, 2.0, 0.7}};
    for (const auto& p : probes) {
        const cplx m = kummer_m({p.a, p.b, p.x});
        const cplx m1 = p.a / p.b * kummer_m({p.a + 1.0, p.b + 1, p.x});
        const cplx m2 = p.a * (p.a + 1.0) / (p.b * (p.b + 1)) *
                        kummer_m({p.a + 2.0, p.b + 2, p.x});
        const cplx resid = p.x * m2 + (p.b - p.x) * m1 - p.a * m;
        const double scale = std::abs(p.a * m) + std::abs(p.x * m2);
        CHECK(std::abs(resid) / scale < 1e-6);
    }
}

TEST_CASE("value is increasing in real a") {
    const double b = 1.3, x = 6.0;
    double prev = kummer_m({{0.0, 0}, b, x}).real();
    for (double a : {0.5, 1.0, 2.0, 4.0}) {
        const double cur = kummer_m({{a, 0}, b, x}).real();
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("parameter derivative matches central differences") {
    const struct {
        cplx a;
        double b, x;
    } probes[] = {{{0.9, 1.1}, 1.5, 4.0}, {{-1.7, 0.3}, 0.9, 2.5}, {{2.0, 0}, 2.0, 8.0}};
    for (const auto& p : probes) {
        const double h = 1e-6 * (1.0 + std::abs(p.a));
        const cplx fd =
            (kummer_m({p.a + h, p.b, p.x}) - kummer_m({p.a - h, p.b, p.x})) / (2 * h);
        const cplx da = kummer_m_da({p.a, p.b, p.x});
        CHECK(rel(da, fd) < 1e-5);
    }
}

TEST_CASE("parameter derivative references, including digamma poles") {
    CHECK(kummer_m_da({{0, 0}, 1, 1}).real() ==
          doctest::Approx(1.317902151454403895).epsilon(1e-13));
    CHECK(kummer_m_da({{1, 0}, 1, 1}).real() ==
          doctest::Approx(2.165382215326936359).epsilon(1e-13));
    CHECK(rel(kummer_m_da({{2, 1}, 1.3, 4.2}),
              {133.2651196099028897, 251.5468140705273413}) < 1e-13);
    CHECK(kummer_m_da({{-0.5, 0}, 2, 3}).real() ==
          doctest::Approx(1.405702431615281360).epsilon(1e-13));
    CHECK_NOTHROW((void)kummer_m_da({{-3, 0}, 1, 2}));
}

TEST_CASE("digamma difference telescopes") {
    const cplx a{0.7, 0.4};
    cplx direct = 0.0;
    for (int j = 0; j < 6; ++j) direct += 1.0 / (a + double(j));
    CHECK(rel(digamma_diff(a, 6), direct) < 1e-14);
    CHECK(std::abs(digamma_diff(a, 0)) == 0.0);
}

TEST_CASE("auxiliary 2F2 sums") {
    CHECK(pfq_2f2(1, 0, 1.0) == doctest::Approx(1.317902151454403891).epsilon(1e-12));
    CHECK(pfq_2f2(1, 0, 20.0) == doctest::Approx(1280782.454555432518).epsilon(1e-12));
    CHECK(pfq_2f2(2, 1, 5.5) == doctest::Approx(1.985081357001051564).epsilon(1e-12));
}

TEST_CASE("generalized harmonic numbers are exact rationals") {
    CHECK(harmonic(5) == mpq_class(137, 60));
    CHECK(harmonic(3, 2) == mpq_class(49, 36));
    CHECK(harmonic(0) == 0);
}

TEST_CASE("saddle phase solves t(t-1) = u on the right branch") {
    for (const cplx u : {cplx{1, 0}, cplx{0.5, 2}, cplx{3, -1}}) {
        const auto sp = saddle_phase(u);
        CHECK(std::abs(sp.t0 * (sp.t0 - 1.0) - u) < 1e-12 * (1 + std::abs(u)));
        CHECK(sp.t0.real() > 0.5);
        const cplx psi = sp.t0 + u * std::log(sp.t0 / (sp.t0 - 1.0));
        CHECK(std::abs(sp.psi_t0 - psi) < 1e-12 * std::abs(psi));
    }
}

TEST_CASE("large-x approximation with a proportional to x tracks the series") {
    const struct {
        double u, b, x, bound;
    } probes[] = {{1.0, 1.0, 100.0, 0.01}, {2.0, 0.5, 200.0, 0.001},
                  {0.5, 2.0, 150.0, 0.01}};
    for (const auto& p : probes) {
        const auto approx = kummer_asymp_prop_a({p.u, 0}, p.b, p.x);
        const auto truth = kummer_m_log({{p.u * p.x, 0}, p.b, p.x});
        const double err = std::abs(std::exp(approx.log_magnitude - truth.log_magnitude) - 1.0);
        CHECK(err < p.bound);
    }
}

TEST_CASE("large-a Bessel regime matches the series at moderate argument") {
    {
        const auto r = kummer_bessel_regime({400, 0}, 2, 0.5);
        const auto truth = kummer_m({{400, 0}, 2, 0.5});
        CHECK(rel(r.value, truth) < 0.01);
        CHECK(r.mode == "bessel");
    }
    {
        const auto r = kummer_bessel_regime({1e4, 0}, 1, 1);
        const auto truth = kummer_m_log({{1e4, 0}, 1, 1});
        CHECK(std::abs(std::exp(r.log_value.log_magnitude - truth.log_magnitude) - 1.0) <
              0.01);
        CHECK(r.mode == "exponential");
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS((void)kummer_m({{1, 0}, 0.0, 1}), std::invalid_argument);
    CHECK_THROWS_AS((void)kummer_m({{1, 0}, 1, -1}), std::invalid_argument);
    CHECK_THROWS_AS((void)kummer_m({{1, 0}, 1, 1}, 0.1), std::invalid_argument);
    CHECK_THROWS_AS((void)kummer_m({{1, 0}, 1, 1}, 0.0), std::invalid_argument);
}
