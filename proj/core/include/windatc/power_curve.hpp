#pragma once

#include <stdexcept>

namespace windatc::turbine {

/// Piecewise-linear turbine power curve: zero below cut-in and above cut-out,
/// linear ramp between cut-in and rated speed, flat at rated power up to and
/// including cut-out.
struct TurbineCurve {
    double cut_in;       // m/s
    double rated_speed;  // m/s
    double cut_out;      // m/s
    double rated_power;  // MW

    TurbineCurve(double vi, double vr, double vo, double pr)
        : cut_in(vi), rated_speed(vr), cut_out(vo), rated_power(pr) {
        if (!(0.0 < vi && vi < vr && vr < vo))
            throw std::invalid_argument("TurbineCurve: need 0 < cut_in < rated_speed < cut_out");
        if (!(pr > 0.0))
            throw std::invalid_argument("TurbineCurve: rated_power must be positive");
    }
};

struct FarmSpec {
    int bus_id;
    int turbine_count;
    TurbineCurve curve;

    FarmSpec(int bus, int count, TurbineCurve c) : bus_id(bus), turbine_count(count), curve(c) {
        if (count < 1) throw std::invalid_argument("FarmSpec: turbine_count must be >= 1");
    }
    double capacity_mw() const { return turbine_count * curve.rated_power; }
};

/// Single-turbine output in MW for wind speed v >= 0.
double turbine_output(double v, const TurbineCurve& curve);

/// All turbines in the farm see the same speed.
double farm_output(double v, const FarmSpec& farm);

}  // namespace windatc::turbine
