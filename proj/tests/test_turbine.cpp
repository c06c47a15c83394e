#include <doctest.h>

#include "windatc/power_curve.hpp"

using namespace windatc::turbine;

namespace {
const TurbineCurve kCurve(3.0, 13.0, 25.0, 5.0);
}

TEST_CASE("curve is zero outside the operating band") {
    CHECK(turbine_output(0.0, kCurve) == 0.0);
    CHECK(turbine_output(2.0, kCurve) == 0.0);
    CHECK(turbine_output(25.0001, kCurve) == 0.0);
    CHECK(turbine_output(40.0, kCurve) == 0.0);
}

TEST_CASE("curve breakpoints") {
    // cut-in produces nothing; rated speed produces rated power; cut-out is
    // the last speed still at rated power.
    CHECK(turbine_output(3.0, kCurve) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(turbine_output(13.0, kCurve) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(turbine_output(25.0, kCurve) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("linear ramp between cut-in and rated") {
    CHECK(turbine_output(8.0, kCurve) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(turbine_output(5.5, kCurve) == doctest::Approx(1.25).epsilon(1e-12));
    // halfway in speed is halfway in power, everywhere on the ramp
    for (double v = 3.0; v <= 13.0; v += 0.5)
        CHECK(turbine_output(v, kCurve) ==
              doctest::Approx(5.0 * (v - 3.0) / 10.0).epsilon(1e-12));
}

TEST_CASE("rated band is flat") {
    CHECK(turbine_output(13.5, kCurve) == 5.0);
    CHECK(turbine_output(20.0, kCurve) == 5.0);
}

TEST_CASE("farm output scales with turbine count") {
    FarmSpec farm(16, 60, kCurve);
    CHECK(farm.capacity_mw() == doctest::Approx(300.0));
    CHECK(farm_output(8.0, farm) == doctest::Approx(60 * 2.5));
    CHECK(farm_output(2.0, farm) == 0.0);
}

TEST_CASE("curve parameter validation") {
    CHECK_THROWS_AS(TurbineCurve(0.0, 13.0, 25.0, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(TurbineCurve(13.0, 3.0, 25.0, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(TurbineCurve(3.0, 13.0, 13.0, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(TurbineCurve(3.0, 13.0, 25.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(FarmSpec(1, 0, kCurve), std::invalid_argument);
}
