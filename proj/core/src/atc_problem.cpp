#include "windatc/atc_problem.hpp"

#include <cmath>

namespace windatc::opf {

using grid::Branch;
using grid::Bus;
using grid::Generator;

namespace {

double clamp_inset(double v, double lo, double hi) {
    double inset = 1e-3 * (hi - lo);
    return std::clamp(v, lo + inset, hi - inset);
}

}  // namespace

AtcProblem::AtcProblem(const grid::PowerNetwork& net, const std::map<int, double>& wind_mw,
                       double load_coeff, const grid::BaseState& base)
    : net_(net), Y_(grid::build_admittance(net)), load_coeff_(load_coeff),
      base_transfer_mw_(base.total_tie_flow_mw) {
    if (!(load_coeff_ > 0.0))
        throw std::invalid_argument("AtcProblem: load coefficient must be positive");

    n_ = net_.n_buses();
    ng_ = static_cast<int>(net_.generators().size());
    nl_ = static_cast<int>(net_.branches().size());
    nx_ = (n_ - 1) + n_ + 2 * ng_;

    wind_pu_ = Eigen::VectorXd::Zero(n_);
    for (const auto& [bus_id, mw] : wind_mw) {
        if (!net_.has_bus(bus_id))
            throw std::invalid_argument("AtcProblem: wind injection at unknown bus " +
                                        std::to_string(bus_id));
        if (mw < 0.0)
            throw std::invalid_argument("AtcProblem: negative wind injection at bus " +
                                        std::to_string(bus_id));
        wind_pu_(net_.bus_index(bus_id)) += mw / net_.base_mva();
    }

    ang_pos_.assign(n_, -1);
    int pos = 0;
    for (int i = 0; i < n_; ++i)
        if (i != net_.slack_index()) ang_pos_[i] = pos++;

    const double mva = net_.base_mva();
    const int ni = 2 * ng_ + nl_ + n_;
    ineq_lower_.resize(ni);
    ineq_upper_.resize(ni);
    for (int k = 0; k < ng_; ++k) {
        const Generator& g = net_.generators()[k];
        ineq_lower_(k) = g.p_min / mva;
        ineq_upper_(k) = g.p_max / mva;
        ineq_lower_(ng_ + k) = g.q_min / mva;
        ineq_upper_(ng_ + k) = g.q_max / mva;
    }
    for (int l = 0; l < nl_; ++l) {
        double r = net_.branches()[l].rate_mw / mva;
        ineq_lower_(2 * ng_ + l) = -r;
        ineq_upper_(2 * ng_ + l) = r;
    }
    for (int i = 0; i < n_; ++i) {
        ineq_lower_(2 * ng_ + nl_ + i) = net_.buses()[i].voltage_min;
        ineq_upper_(2 * ng_ + nl_ + i) = net_.buses()[i].voltage_max;
    }

    // Start from the base operating point with dispatch pulled strictly
    // inside the generator boxes.
    x0_.resize(nx_);
    for (int i = 0; i < n_; ++i) {
        if (ang_pos_[i] >= 0) x0_(ang_pos_[i]) = base.state.voltage_ang(i);
        x0_(voltage_position(i)) =
            std::clamp(base.state.voltage_mag(i), net_.buses()[i].voltage_min,
                       net_.buses()[i].voltage_max);
    }
    for (int k = 0; k < ng_; ++k) {
        const Generator& g = net_.generators()[k];
        x0_(gen_p_position(k)) = clamp_inset(base.state.gen_p(k) / mva,
                                             g.p_min / mva, g.p_max / mva);
        x0_(gen_q_position(k)) = clamp_inset(base.state.gen_q(k) / mva,
                                             g.q_min / mva, g.q_max / mva);
    }
}

void AtcProblem::unpack(const Eigen::VectorXd& x, Eigen::VectorXd& U, Eigen::VectorXd& th) const {
    U.resize(n_);
    th.resize(n_);
    for (int i = 0; i < n_; ++i) {
        th(i) = ang_pos_[i] >= 0 ? x(ang_pos_[i]) : 0.0;
        U(i) = x(voltage_position(i));
    }
}

grid::NetworkState AtcProblem::state_from(const Eigen::VectorXd& x) const {
    grid::NetworkState s;
    unpack(x, s.voltage_mag, s.voltage_ang);
    s.gen_p.resize(ng_);
    s.gen_q.resize(ng_);
    for (int k = 0; k < ng_; ++k) {
        s.gen_p(k) = x(gen_p_position(k)) * net_.base_mva();
        s.gen_q(k) = x(gen_q_position(k)) * net_.base_mva();
    }
    return s;
}

double AtcProblem::objective(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const {
    Eigen::VectorXd U, th;
    unpack(x, U, th);
    if (grad) grad->setZero(nx_);

    double total = 0.0;
    for (const grid::TieLine& tie : net_.tie_lines()) {
        const Branch& br = net_.branches()[tie.branch_index];
        int i = net_.bus_index(tie.from_bus);  // sending-area endpoint
        int j = net_.bus_index(tie.to_bus);
        double g = Y_(i, j).real(), b = Y_(i, j).imag();
        double t = th(i) - th(j);
        double c = std::cos(t), sn = std::sin(t);
        double a = g * c + b * sn;
        double ap = -g * sn + b * c;
        total += U(i) * U(j) * a - U(i) * U(i) * g;
        if (grad) {
            double dthi = U(i) * U(j) * ap;
            if (ang_pos_[i] >= 0) (*grad)(ang_pos_[i]) += dthi;
            if (ang_pos_[j] >= 0) (*grad)(ang_pos_[j]) -= dthi;
            (*grad)(voltage_position(i)) += U(j) * a - 2.0 * U(i) * g;
            (*grad)(voltage_position(j)) += U(i) * a;
        }
    }
    return total - base_transfer_mw_ / net_.base_mva();
}

void AtcProblem::equalities(const Eigen::VectorXd& x, Eigen::VectorXd& g,
                            Eigen::MatrixXd* jac) const {
    Eigen::VectorXd U, th;
    unpack(x, U, th);
    const double base = net_.base_mva();

    Eigen::VectorXd P = Eigen::VectorXd::Zero(n_);
    Eigen::VectorXd Q = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            double gij = Y_(i, j).real(), bij = Y_(i, j).imag();
            if (gij == 0.0 && bij == 0.0) continue;
            double t = th(i) - th(j);
            double c = std::cos(t), sn = std::sin(t);
            P(i) += U(i) * U(j) * (gij * c + bij * sn);
            Q(i) += U(i) * U(j) * (gij * sn - bij * c);
        }
    }

    g.resize(2 * n_);
    for (int i = 0; i < n_; ++i) {
        const Bus& bus = net_.buses()[i];
        double pg = 0.0, qg = 0.0;
        if (int k = net_.generator_at(i); k >= 0) {
            pg = x(gen_p_position(k));
            qg = x(gen_q_position(k));
        }
        g(i) = wind_pu_(i) + pg - load_coeff_ * bus.load_p / base - P(i);
        g(n_ + i) = qg - load_coeff_ * bus.load_q / base - Q(i);
    }

    if (!jac) return;
    jac->setZero(2 * n_, nx_);
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            double gij = Y_(i, j).real(), bij = Y_(i, j).imag();
            if (i != j && gij == 0.0 && bij == 0.0) continue;
            double dp_dth, dp_dv, dq_dth, dq_dv;
            if (i == j) {
                dp_dth = -Q(i) - bij * U(i) * U(i);
                dp_dv = P(i) / U(i) + gij * U(i);
                dq_dth = P(i) - gij * U(i) * U(i);
                dq_dv = Q(i) / U(i) - bij * U(i);
            } else {
                double t = th(i) - th(j);
                double c = std::cos(t), sn = std::sin(t);
                dp_dth = U(i) * U(j) * (gij * sn - bij * c);
                dp_dv = U(i) * (gij * c + bij * sn);
                dq_dth = -U(i) * U(j) * (gij * c + bij * sn);
                dq_dv = U(i) * (gij * sn - bij * c);
            }
            if (ang_pos_[j] >= 0) {
                (*jac)(i, ang_pos_[j]) -= dp_dth;
                (*jac)(n_ + i, ang_pos_[j]) -= dq_dth;
            }
            (*jac)(i, voltage_position(j)) -= dp_dv;
            (*jac)(n_ + i, voltage_position(j)) -= dq_dv;
        }
        if (int k = net_.generator_at(i); k >= 0) {
            (*jac)(i, gen_p_position(k)) = 1.0;
            (*jac)(n_ + i, gen_q_position(k)) = 1.0;
        }
    }
}

void AtcProblem::inequalities(const Eigen::VectorXd& x, Eigen::VectorXd& h,
                              Eigen::MatrixXd* jac) const {
    Eigen::VectorXd U, th;
    unpack(x, U, th);
    h.resize(num_ineq());
    if (jac) jac->setZero(num_ineq(), nx_);

    for (int k = 0; k < ng_; ++k) {
        h(k) = x(gen_p_position(k));
        h(ng_ + k) = x(gen_q_position(k));
        if (jac) {
            (*jac)(k, gen_p_position(k)) = 1.0;
            (*jac)(ng_ + k, gen_q_position(k)) = 1.0;
        }
    }
    for (int l = 0; l < nl_; ++l) {
        const Branch& br = net_.branches()[l];
        int i = net_.bus_index(br.from);
        int j = net_.bus_index(br.to);
        double g = Y_(i, j).real(), b = Y_(i, j).imag();
        double t = th(i) - th(j);
        double c = std::cos(t), sn = std::sin(t);
        double a = g * c + b * sn;
        double ap = -g * sn + b * c;
        int row = flow_row(l);
        h(row) = U(i) * U(j) * a - U(i) * U(i) * g;
        if (jac) {
            double dth = U(i) * U(j) * ap;
            if (ang_pos_[i] >= 0) (*jac)(row, ang_pos_[i]) += dth;
            if (ang_pos_[j] >= 0) (*jac)(row, ang_pos_[j]) -= dth;
            (*jac)(row, voltage_position(i)) = U(j) * a - 2.0 * U(i) * g;
            (*jac)(row, voltage_position(j)) = U(i) * a;
        }
    }
    for (int i = 0; i < n_; ++i) {
        int row = 2 * ng_ + nl_ + i;
        h(row) = U(i);
        if (jac) (*jac)(row, voltage_position(i)) = 1.0;
    }
}

Eigen::MatrixXd AtcProblem::reduce(const Eigen::MatrixXd& full) const {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(nx_, nx_);
    auto xpos = [&](int full_idx) -> int {
        if (full_idx < n_) return ang_pos_[full_idx];
        return voltage_position(full_idx - n_);
    };
    for (int a = 0; a < 2 * n_; ++a) {
        int pa = xpos(a);
        if (pa < 0) continue;
        for (int b = 0; b < 2 * n_; ++b) {
            int pb = xpos(b);
            if (pb < 0) continue;
            H(pa, pb) = full(a, b);
        }
    }
    return H;
}

Eigen::MatrixXd AtcProblem::lagrangian_hessian(const Eigen::VectorXd& x, double obj_weight,
                                               const Eigen::VectorXd& eq_mult,
                                               const Eigen::VectorXd& ineq_mult) const {
    Eigen::VectorXd U, th;
    unpack(x, U, th);
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(2 * n_, 2 * n_);

    auto sym_add = [&](int p, int q, double v) {
        if (p == q)
            full(p, p) += v;
        else {
            full(p, q) += v;
            full(q, p) += v;
        }
    };
    // Second derivatives of weight * U_i U_j * s(th_i - th_j) where s'' = -s.
    auto pair_term = [&](int i, int j, double sval, double sprime, double weight) {
        double v = weight * U(i) * U(j) * sval;
        sym_add(th_full(i), th_full(i), -v);
        sym_add(th_full(j), th_full(j), -v);
        sym_add(th_full(i), th_full(j), v);
        sym_add(vm_full(i), vm_full(j), weight * sval);
        sym_add(vm_full(i), th_full(i), weight * U(j) * sprime);
        sym_add(vm_full(i), th_full(j), -weight * U(j) * sprime);
        sym_add(vm_full(j), th_full(i), weight * U(i) * sprime);
        sym_add(vm_full(j), th_full(j), -weight * U(i) * sprime);
    };
    // weight * (U_i U_j a - U_i^2 g): the branch-flow expression.
    auto flow_term = [&](int i, int j, double weight) {
        double g = Y_(i, j).real(), b = Y_(i, j).imag();
        double t = th(i) - th(j);
        double c = std::cos(t), sn = std::sin(t);
        pair_term(i, j, g * c + b * sn, -g * sn + b * c, weight);
        sym_add(vm_full(i), vm_full(i), -2.0 * g * weight);
    };

    // Objective: tie-line flows.
    if (obj_weight != 0.0) {
        for (const grid::TieLine& tie : net_.tie_lines())
            flow_term(net_.bus_index(tie.from_bus), net_.bus_index(tie.to_bus), obj_weight);
    }

    // Equality rows carry -P_calc_i and -Q_calc_i.
    for (int i = 0; i < n_; ++i) {
        double wp = -eq_mult(i);
        double wq = -eq_mult(n_ + i);
        if (wp == 0.0 && wq == 0.0) continue;
        for (int j = 0; j < n_; ++j) {
            double g = Y_(i, j).real(), b = Y_(i, j).imag();
            if (g == 0.0 && b == 0.0) continue;
            if (i == j) {
                sym_add(vm_full(i), vm_full(i), 2.0 * g * wp - 2.0 * b * wq);
                continue;
            }
            double t = th(i) - th(j);
            double c = std::cos(t), sn = std::sin(t);
            double a = g * c + b * sn;   // P kernel; also d/dth of the Q kernel
            double q = g * sn - b * c;   // Q kernel; -d/dth of the P kernel... (q' = a)
            if (wp != 0.0) pair_term(i, j, a, -q, wp);
            if (wq != 0.0) pair_term(i, j, q, a, wq);
        }
    }

    // Inequality flow rows.
    for (int l = 0; l < nl_; ++l) {
        double w = ineq_mult(flow_row(l));
        if (w == 0.0) continue;
        const Branch& br = net_.branches()[l];
        flow_term(net_.bus_index(br.from), net_.bus_index(br.to), w);
    }

    return reduce(full);
}

}  // namespace windatc::opf
