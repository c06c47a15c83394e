#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "windatc/admittance.hpp"
#include "windatc/network.hpp"

namespace windatc::grid {

struct NetworkState {
    Eigen::VectorXd voltage_mag;  // pu, internal bus order
    Eigen::VectorXd voltage_ang;  // rad, slack fixed at 0
    Eigen::VectorXd gen_p;        // MW, generator order
    Eigen::VectorXd gen_q;        // MVAr
};

struct BaseState {
    NetworkState state;
    std::vector<double> tie_flows;  // MW, one per tie line, sending -> receiving
    double total_tie_flow_mw = 0.0;
    int iterations = 0;
};

class PowerFlowError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PowerFlowOptions {
    double tolerance = 1e-8;  // pu mismatch infinity norm
    int max_iterations = 20;
};

/// Newton-Raphson power flow in polar form, flat start. Loads are scaled by
/// load_scale (the load fluctuation coefficient); wind_mw maps external bus
/// id to a fixed active injection.
BaseState solve_base_power_flow(const PowerNetwork& net, double load_scale = 1.0,
                                const std::map<int, double>& wind_mw = {},
                                const PowerFlowOptions& opts = {});

/// From-side active branch flow in MW using the admittance-matrix entries:
/// P_L = U_i U_j (G_ij cos t_ij + B_ij sin t_ij) - U_i^2 G_ij, i = from side.
double branch_flow_mw(const NetworkState& state, const AdmittanceMatrix& Y,
                      const PowerNetwork& net, const Branch& branch);

/// Per-tie and total transfer across the partition, measured on the
/// sending-area side of each tie line.
std::pair<std::vector<double>, double> tie_transfer(const NetworkState& state,
                                                    const AdmittanceMatrix& Y,
                                                    const PowerNetwork& net);

}  // namespace windatc::grid
