#pragma once

#include <map>

#include "windatc/admittance.hpp"
#include "windatc/network.hpp"
#include "windatc/nlp.hpp"
#include "windatc/power_flow.hpp"

namespace windatc::opf {

/// One-hour ATC maximization: objective is the incremental tie-line transfer
/// above the base state, equalities are the AC power balance with fixed wind
/// injections and load coefficient, inequalities are generator, branch-flow
/// and voltage bounds.
///
/// Variable vector layout: [theta (non-slack buses), U (all buses),
/// P_G (all generators), Q_G (all generators)], everything per-unit/radians.
/// Inequality layout: [P_G, Q_G, branch flows, U].
class AtcProblem : public opt::NlpProblem {
public:
    AtcProblem(const grid::PowerNetwork& net, const std::map<int, double>& wind_mw,
               double load_coeff, const grid::BaseState& base);

    int num_vars() const override { return nx_; }
    int num_eq() const override { return 2 * n_; }
    int num_ineq() const override { return static_cast<int>(ineq_lower_.size()); }
    Eigen::VectorXd ineq_lower() const override { return ineq_lower_; }
    Eigen::VectorXd ineq_upper() const override { return ineq_upper_; }
    Eigen::VectorXd initial_point() const override { return x0_; }

    double objective(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const override;
    void equalities(const Eigen::VectorXd& x, Eigen::VectorXd& g,
                    Eigen::MatrixXd* jac) const override;
    void inequalities(const Eigen::VectorXd& x, Eigen::VectorXd& h,
                      Eigen::MatrixXd* jac) const override;
    Eigen::MatrixXd lagrangian_hessian(const Eigen::VectorXd& x, double obj_weight,
                                       const Eigen::VectorXd& eq_mult,
                                       const Eigen::VectorXd& ineq_mult) const override;

    const grid::PowerNetwork& network() const { return net_; }
    double load_coeff() const { return load_coeff_; }
    double base_transfer_mw() const { return base_transfer_mw_; }
    double base_mva() const { return net_.base_mva(); }

    /// Variable positions, for tests and result extraction.
    int angle_position(int bus_idx) const { return ang_pos_[bus_idx]; }  // -1 for slack
    int voltage_position(int bus_idx) const { return n_ - 1 + bus_idx; }
    int gen_p_position(int gen_idx) const { return n_ - 1 + n_ + gen_idx; }
    int gen_q_position(int gen_idx) const { return n_ - 1 + n_ + ng_ + gen_idx; }
    int flow_row(int branch_idx) const { return 2 * ng_ + branch_idx; }

    grid::NetworkState state_from(const Eigen::VectorXd& x) const;

private:
    // Full-space (theta all buses, U all buses) index helpers used by the
    // derivative accumulators.
    int th_full(int bus) const { return bus; }
    int vm_full(int bus) const { return n_ + bus; }
    void unpack(const Eigen::VectorXd& x, Eigen::VectorXd& U, Eigen::VectorXd& th) const;
    Eigen::MatrixXd reduce(const Eigen::MatrixXd& full) const;

    const grid::PowerNetwork& net_;
    grid::AdmittanceMatrix Y_;
    double load_coeff_;
    double base_transfer_mw_;
    Eigen::VectorXd wind_pu_;  // per internal bus
    int n_ = 0, ng_ = 0, nl_ = 0, nx_ = 0;
    std::vector<int> ang_pos_;
    Eigen::VectorXd ineq_lower_, ineq_upper_;
    Eigen::VectorXd x0_;
};

}  // namespace windatc::opf
