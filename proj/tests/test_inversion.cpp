#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cirmax/asymptotics.hpp"
#include "cirmax/eigen.hpp"
#include "cirmax/inversion.hpp"

using namespace cirmax;

namespace {

double relerr(double got, double want) { return std::abs(got - want) / std::abs(want); }

} // namespace

TEST_CASE("inversion matches 60-digit references across regimes") {
    const struct {
        DimensionlessArgs d;
        double want;
    } cases[] = {
        {{0.5, 0.5, 5, 0}, 1.192724508252215321e-6},
        {{0.5, 1, 20, 0}, 2.197299370722660549e-22},
        {{1, 1, 10, 1}, 2.752819199455746848e-5},
        {{2, 2.5, 20, 1}, 1.982251841047471629e-7},
        {{2, 1, 5, 0.1}, 0.01756497876272859790},
        {{1, 1, 20, 1}, 3.606382159227187331e-11},
        {{0.5, 2.5, 20, 0.1}, 5.808099565292414457e-19},
        {{1, 2, 4, 1}, 0.1278931633367115372},
        {{1, 2, 6, 1}, 0.01498409876100363637},
        {{1, 2, 8, 1}, 0.001438081801428944989},
        {{1, 2, 6, 0}, 0.002378725429091037619},
    };
    for (const auto& c : cases) CHECK(relerr(bromwich_I(c.d), c.want) < 5e-9);
}

TEST_CASE("full result carries a finite log for deep tails") {
    const DimensionlessArgs d{1, 1, 160, 1};
    const auto r = bromwich_I_full(d, ContourSpec::defaults(d));
    CHECK(std::isfinite(r.log_value));
    CHECK(r.value == doctest::Approx(7.74281872707e-101).epsilon(1e-6));
    CHECK(r.quad_error < 1e-9);
    CHECK(r.clamp_excess == 0.0);
}

TEST_CASE("contour fold residual sits at roundoff") {
    for (const DimensionlessArgs d :
         {DimensionlessArgs{1, 2, 6, 1}, DimensionlessArgs{0.5, 1, 20, 0},
          DimensionlessArgs{2, 2.5, 20, 1}}) {
        CHECK(bromwich_fold_residual(d, ContourSpec::defaults(d)) < 1e-10);
    }
}

TEST_CASE("probability is monotone in barrier, horizon, and start") {
    auto tail = [](double x0, double t, double z) {
        return cir_running_max_cdf({1, 1, 1, x0, t, z}, CdfMethod::bromwich);
    };
    CHECK(tail(0.5, 1, 2.0) > tail(0.5, 1, 2.5));
    CHECK(tail(0.5, 1, 2.5) > tail(0.5, 1, 3.0));
    CHECK(tail(0.5, 0.5, 3) < tail(0.5, 1, 3));
    CHECK(tail(0.5, 1, 3) < tail(0.5, 2, 3));
    CHECK(tail(0.3, 1, 3) < tail(0.5, 1, 3));
    CHECK(tail(0.5, 1, 3) < tail(0.8, 1, 3));
}

TEST_CASE("barrier at the start point is hit immediately") {
    const CirParams grazing{1, 1, 1, 0.5, 1, 0.5000001};
    CHECK(cir_running_max_cdf(grazing, CdfMethod::eigen) > 0.999);
    // the contour route refuses this regime instead of grinding forever
    CHECK_THROWS_AS((void)cir_running_max_cdf(grazing, CdfMethod::bromwich),
                    std::runtime_error);
}

TEST_CASE("method dispatch agrees with the direct entry points") {
    const CirParams p{1, 1, 1, 0.5, 1, 3};
    const auto d = to_dimensionless(p);
    CHECK(cir_running_max_cdf(p, CdfMethod::bromwich) == bromwich_I(d));
    CHECK(cir_running_max_cdf(p, CdfMethod::eigen) == eigen_I(d));
    const double want_small =
        std::clamp(tail_asymp_small_y(d.lambda, d.b, d.x).value, 0.0, 1.0);
    CHECK(cir_running_max_cdf(p, CdfMethod::asymp_small_y) == want_small);
    const double want_fixed =
        std::clamp(tail_asymp_fixed_y(d.lambda, d.b, d.x, d.y).value, 0.0, 1.0);
    CHECK(cir_running_max_cdf(p, CdfMethod::asymp_fixed_y) == want_fixed);
}

TEST_CASE("contour spec validation") {
    CHECK_THROWS_AS(ContourSpec({1, -1, 1, 1e-9}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(ContourSpec({1, 10, 1, 0.5}).validate(), std::invalid_argument);
    CHECK_NOTHROW(ContourSpec::defaults({1, 1, 10, 0}).validate());
    CHECK_THROWS_AS((void)bromwich_I({1, 1, 10, 12}), std::invalid_argument);
    CHECK_THROWS_AS((void)bromwich_I({0, 1, 10, 1}), std::invalid_argument);
}
