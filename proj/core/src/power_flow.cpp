#include "windatc/power_flow.hpp"

#include <cmath>
#include <sstream>

namespace windatc::grid {

namespace {

void calc_injections(const Eigen::VectorXd& U, const Eigen::VectorXd& th,
                     const AdmittanceMatrix& Y, Eigen::VectorXd& P, Eigen::VectorXd& Q) {
    const int n = static_cast<int>(U.size());
    P.setZero(n);
    Q.setZero(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double g = Y(i, j).real(), b = Y(i, j).imag();
            if (g == 0.0 && b == 0.0) continue;
            double t = th(i) - th(j);
            double c = std::cos(t), s = std::sin(t);
            P(i) += U(i) * U(j) * (g * c + b * s);
            Q(i) += U(i) * U(j) * (g * s - b * c);
        }
    }
}

}  // namespace

BaseState solve_base_power_flow(const PowerNetwork& net, double load_scale,
                                const std::map<int, double>& wind_mw,
                                const PowerFlowOptions& opts) {
    const int n = net.n_buses();
    const double base = net.base_mva();
    const AdmittanceMatrix Y = build_admittance(net);

    for (const auto& [bus_id, mw] : wind_mw) {
        if (!net.has_bus(bus_id))
            throw PowerFlowError("wind injection at unknown bus " + std::to_string(bus_id));
        (void)mw;
    }

    // Specified injections in pu. Generator setpoints follow the load
    // coefficient so the slack only carries losses.
    Eigen::VectorXd p_spec = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd q_spec = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        const Bus& bus = net.buses()[i];
        p_spec(i) -= load_scale * bus.load_p / base;
        q_spec(i) -= load_scale * bus.load_q / base;
    }
    for (const Generator& g : net.generators())
        if (!g.is_slack) p_spec(net.bus_index(g.bus_id)) += load_scale * g.p_set / base;
    for (const auto& [bus_id, mw] : wind_mw) p_spec(net.bus_index(bus_id)) += mw / base;

    // Flat start; PV and slack magnitudes pinned to setpoints.
    Eigen::VectorXd U = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd th = Eigen::VectorXd::Zero(n);
    for (const Generator& g : net.generators()) U(net.bus_index(g.bus_id)) = g.v_set;

    std::vector<int> ang_buses, mag_buses;  // unknown sets
    for (int i = 0; i < n; ++i) {
        if (net.buses()[i].kind != BusKind::Slack) ang_buses.push_back(i);
        if (net.buses()[i].kind == BusKind::PQ) mag_buses.push_back(i);
    }
    const int na = static_cast<int>(ang_buses.size());
    const int nm = static_cast<int>(mag_buses.size());

    Eigen::VectorXd P, Q;
    int iter = 0;
    double norm = 0.0;
    for (;; ++iter) {
        calc_injections(U, th, Y, P, Q);
        Eigen::VectorXd f(na + nm);
        for (int k = 0; k < na; ++k) f(k) = p_spec(ang_buses[k]) - P(ang_buses[k]);
        for (int k = 0; k < nm; ++k) f(na + k) = q_spec(mag_buses[k]) - Q(mag_buses[k]);
        norm = f.lpNorm<Eigen::Infinity>();
        if (norm < opts.tolerance) break;
        if (iter >= opts.max_iterations) {
            std::ostringstream msg;
            msg << "power flow did not converge in " << opts.max_iterations
                << " iterations (mismatch " << norm << " pu)";
            throw PowerFlowError(msg.str());
        }

        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(na + nm, na + nm);
        for (int r = 0; r < na; ++r) {
            int i = ang_buses[r];
            for (int c = 0; c < na; ++c) {
                int j = ang_buses[c];
                if (i == j)
                    J(r, c) = -Q(i) - Y(i, i).imag() * U(i) * U(i);
                else {
                    double t = th(i) - th(j);
                    J(r, c) = U(i) * U(j) *
                              (Y(i, j).real() * std::sin(t) - Y(i, j).imag() * std::cos(t));
                }
            }
            for (int c = 0; c < nm; ++c) {
                int j = mag_buses[c];
                if (i == j)
                    J(r, na + c) = P(i) / U(i) + Y(i, i).real() * U(i);
                else {
                    double t = th(i) - th(j);
                    J(r, na + c) =
                        U(i) * (Y(i, j).real() * std::cos(t) + Y(i, j).imag() * std::sin(t));
                }
            }
        }
        for (int r = 0; r < nm; ++r) {
            int i = mag_buses[r];
            for (int c = 0; c < na; ++c) {
                int j = ang_buses[c];
                if (i == j)
                    J(na + r, c) = P(i) - Y(i, i).real() * U(i) * U(i);
                else {
                    double t = th(i) - th(j);
                    J(na + r, c) = -U(i) * U(j) *
                                   (Y(i, j).real() * std::cos(t) + Y(i, j).imag() * std::sin(t));
                }
            }
            for (int c = 0; c < nm; ++c) {
                int j = mag_buses[c];
                if (i == j)
                    J(na + r, na + c) = Q(i) / U(i) - Y(i, i).imag() * U(i);
                else {
                    double t = th(i) - th(j);
                    J(na + r, na + c) =
                        U(i) * (Y(i, j).real() * std::sin(t) - Y(i, j).imag() * std::cos(t));
                }
            }
        }

        Eigen::VectorXd dx = J.partialPivLu().solve(f);
        if (!dx.allFinite()) throw PowerFlowError("singular power flow Jacobian");
        for (int k = 0; k < na; ++k) th(ang_buses[k]) += dx(k);
        for (int k = 0; k < nm; ++k) U(mag_buses[k]) += dx(na + k);
    }

    BaseState result;
    result.iterations = iter;
    result.state.voltage_mag = U;
    result.state.voltage_ang = th;

    const int ng = static_cast<int>(net.generators().size());
    result.state.gen_p.resize(ng);
    result.state.gen_q.resize(ng);
    calc_injections(U, th, Y, P, Q);
    for (int g = 0; g < ng; ++g) {
        const Generator& gen = net.generators()[g];
        int i = net.bus_index(gen.bus_id);
        double wind = 0.0;
        if (auto it = wind_mw.find(gen.bus_id); it != wind_mw.end()) wind = it->second;
        if (gen.is_slack)
            result.state.gen_p(g) =
                P(i) * base + load_scale * net.buses()[i].load_p - wind;
        else
            result.state.gen_p(g) = load_scale * gen.p_set;
        result.state.gen_q(g) = Q(i) * base + load_scale * net.buses()[i].load_q;
    }

    auto [flows, total] = tie_transfer(result.state, Y, net);
    result.tie_flows = std::move(flows);
    result.total_tie_flow_mw = total;
    return result;
}

double branch_flow_mw(const NetworkState& state, const AdmittanceMatrix& Y,
                      const PowerNetwork& net, const Branch& branch) {
    int i = net.bus_index(branch.from);
    int j = net.bus_index(branch.to);
    double g = Y(i, j).real(), b = Y(i, j).imag();
    double ui = state.voltage_mag(i), uj = state.voltage_mag(j);
    double t = state.voltage_ang(i) - state.voltage_ang(j);
    double p = ui * uj * (g * std::cos(t) + b * std::sin(t)) - ui * ui * g;
    return p * net.base_mva();
}

std::pair<std::vector<double>, double> tie_transfer(const NetworkState& state,
                                                    const AdmittanceMatrix& Y,
                                                    const PowerNetwork& net) {
    std::vector<double> flows;
    double total = 0.0;
    for (const TieLine& tie : net.tie_lines()) {
        Branch br = net.branches()[tie.branch_index];
        if (!tie.aligned) std::swap(br.from, br.to);
        double f = branch_flow_mw(state, Y, net, br);
        flows.push_back(f);
        total += f;
    }
    return {flows, total};
}

}  // namespace windatc::grid
