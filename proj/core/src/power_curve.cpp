#include "windatc/power_curve.hpp"

namespace windatc::turbine {

double turbine_output(double v, const TurbineCurve& curve) {
    if (v < 0.0) throw std::invalid_argument("turbine_output: wind speed must be >= 0");
    if (v < curve.cut_in || v > curve.cut_out) return 0.0;
    if (v <= curve.rated_speed)
        return curve.rated_power * (v - curve.cut_in) / (curve.rated_speed - curve.cut_in);
    return curve.rated_power;
}

double farm_output(double v, const FarmSpec& farm) {
    return farm.turbine_count * turbine_output(v, farm.curve);
}

}  // namespace windatc::turbine
