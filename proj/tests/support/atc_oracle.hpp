#pragma once

// Brute-force transfer-capability oracle for small all-generator networks.
// Enumerates the dispatch degrees of freedom (non-slack active power and all
// generator voltage setpoints) on a shrinking grid, solves each candidate with
// the independent reference power flow, keeps the best operating point that
// satisfies every limit, and reports the maximum tie-line transfer. Shares no
// code with the optimizer beyond the case structures.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "reference_pf.hpp"
#include "windatc/network.hpp"

namespace atc_oracle {

struct OracleResult {
    double max_transfer_mw = -1e300;  // best feasible tie transfer found
    Eigen::VectorXd best_point;       // [P non-slack gens (MW), V all gens (pu)]
    long evaluations = 0;
    long feasible = 0;
};

namespace detail {

struct Setup {
    const windatc::grid::PowerNetwork& net;
    double load_coeff;
    std::map<int, double> wind_mw;  // external bus id -> MW

    std::vector<int> free_gens;  // generator indices with free P (non-slack)
    int slack_gen = -1;
    Eigen::VectorXd lo, hi;  // box for [P free gens, V all gens]
};

inline Setup make_setup(const windatc::grid::PowerNetwork& net, double load_coeff,
                        const std::map<int, double>& wind_mw) {
    using namespace windatc::grid;
    for (int i = 0; i < net.n_buses(); ++i)
        if (net.generator_at(i) < 0)
            throw std::invalid_argument("oracle requires a generator at every bus");

    Setup s{net, load_coeff, wind_mw, {}, -1, {}, {}};
    const auto& gens = net.generators();
    for (int k = 0; k < static_cast<int>(gens.size()); ++k) {
        if (gens[k].is_slack)
            s.slack_gen = k;
        else
            s.free_gens.push_back(k);
    }
    const int np = static_cast<int>(s.free_gens.size());
    const int ng = static_cast<int>(gens.size());
    s.lo.resize(np + ng);
    s.hi.resize(np + ng);
    for (int d = 0; d < np; ++d) {
        s.lo(d) = gens[s.free_gens[d]].p_min;
        s.hi(d) = gens[s.free_gens[d]].p_max;
    }
    for (int k = 0; k < ng; ++k) {
        const Bus& b = net.buses()[net.bus_index(gens[k].bus_id)];
        s.lo(np + k) = b.voltage_min;
        s.hi(np + k) = b.voltage_max;
    }
    return s;
}

/// Tie transfer at a candidate point, or -infinity when the power flow fails
/// or any limit is violated.
inline double evaluate(const Setup& s, const Eigen::VectorXd& point) {
    using namespace windatc::grid;
    const PowerNetwork& net = s.net;
    const int n = net.n_buses();
    const int np = static_cast<int>(s.free_gens.size());
    const auto& gens = net.generators();
    const double mva = net.base_mva();
    constexpr double kInfeasible = -1e300;
    constexpr double kTol = 1e-7;  // limit slack in MW / MVAr / pu

    Eigen::VectorXd p_sched(n), q_sched(n);
    Eigen::VectorXd vm = Eigen::VectorXd::Ones(n);
    for (int i = 0; i < n; ++i) {
        const Bus& b = net.buses()[i];
        p_sched(i) = -s.load_coeff * b.load_p / mva;
        q_sched(i) = -s.load_coeff * b.load_q / mva;
        if (auto it = s.wind_mw.find(b.id); it != s.wind_mw.end()) p_sched(i) += it->second / mva;
    }
    for (int k = 0; k < static_cast<int>(gens.size()); ++k)
        vm(net.bus_index(gens[k].bus_id)) = point(np + k);
    for (int d = 0; d < np; ++d)
        p_sched(net.bus_index(gens[s.free_gens[d]].bus_id)) += point(d) / mva;

    refpf::ReferenceState st;
    try {
        st = refpf::solve_reference_pf(net, p_sched, q_sched, vm);
    } catch (const std::exception&) {
        return kInfeasible;
    }

    // Generator outputs recovered from the solved injections.
    for (int k = 0; k < static_cast<int>(gens.size()); ++k) {
        int i = net.bus_index(gens[k].bus_id);
        const Bus& b = net.buses()[i];
        double wind = 0.0;
        if (auto it = s.wind_mw.find(b.id); it != s.wind_mw.end()) wind = it->second;
        double pg = st.s_calc(i).real() * mva + s.load_coeff * b.load_p - wind;
        double qg = st.s_calc(i).imag() * mva + s.load_coeff * b.load_q;
        if (pg < gens[k].p_min - kTol || pg > gens[k].p_max + kTol) return kInfeasible;
        if (qg < gens[k].q_min - kTol || qg > gens[k].q_max + kTol) return kInfeasible;
    }
    for (const Branch& br : net.branches()) {
        double f = refpf::branch_flow_from_side_mw(net, br, st.vm, st.va);
        if (std::abs(f) > br.rate_mw + kTol) return kInfeasible;
    }

    double transfer = 0.0;
    for (const TieLine& tie : net.tie_lines()) {
        const Branch& br = net.branches()[tie.branch_index];
        if (tie.aligned) {
            transfer += refpf::branch_flow_from_side_mw(net, br, st.vm, st.va);
        } else {
            Branch rev = br;
            std::swap(rev.from, rev.to);
            rev.tap = 1.0;  // oracle networks use nominal taps
            transfer += refpf::branch_flow_from_side_mw(net, rev, st.vm, st.va);
        }
    }
    return transfer;
}

}  // namespace detail

/// Grid search with iterative window refinement around the incumbent.
inline OracleResult brute_force_atc(const windatc::grid::PowerNetwork& net, double load_coeff,
                                    const std::map<int, double>& wind_mw,
                                    int points_per_dim = 5, int rounds = 24,
                                    double shrink = 0.5) {
    detail::Setup s = detail::make_setup(net, load_coeff, wind_mw);
    const int dims = static_cast<int>(s.lo.size());

    OracleResult res;
    // Seed with the scaled base dispatch so at least one point is feasible.
    {
        Eigen::VectorXd seed(dims);
        const int np = static_cast<int>(s.free_gens.size());
        for (int d = 0; d < np; ++d) {
            const auto& g = net.generators()[s.free_gens[d]];
            seed(d) = std::clamp(load_coeff * g.p_set, g.p_min, g.p_max);
        }
        for (int k = 0; k < static_cast<int>(net.generators().size()); ++k)
            seed(np + k) = std::clamp(net.generators()[k].v_set, s.lo(np + k), s.hi(np + k));
        double v = detail::evaluate(s, seed);
        ++res.evaluations;
        if (v > res.max_transfer_mw) {
            res.max_transfer_mw = v;
            res.best_point = seed;
            ++res.feasible;
        }
    }

    Eigen::VectorXd center = 0.5 * (s.lo + s.hi);
    Eigen::VectorXd halfwidth = 0.5 * (s.hi - s.lo);
    if (res.best_point.size() == dims) center = res.best_point;

    std::vector<int> idx(dims, 0);
    Eigen::VectorXd point(dims);
    for (int round = 0; round < rounds; ++round) {
        std::fill(idx.begin(), idx.end(), 0);
        bool done = false;
        while (!done) {
            for (int d = 0; d < dims; ++d) {
                double a = std::max(s.lo(d), center(d) - halfwidth(d));
                double b = std::min(s.hi(d), center(d) + halfwidth(d));
                point(d) = points_per_dim == 1
                               ? 0.5 * (a + b)
                               : a + (b - a) * idx[d] / (points_per_dim - 1);
            }
            double v = detail::evaluate(s, point);
            ++res.evaluations;
            if (v > -1e299) ++res.feasible;
            if (v > res.max_transfer_mw) {
                res.max_transfer_mw = v;
                res.best_point = point;
            }
            // odometer increment over the grid
            int d = 0;
            while (d < dims && ++idx[d] == points_per_dim) idx[d++] = 0;
            done = d == dims;
        }
        if (res.best_point.size() == dims) center = res.best_point;
        halfwidth *= shrink;
    }
    if (res.best_point.size() != dims)
        throw std::runtime_error("brute-force search found no feasible point");
    return res;
}

}  // namespace atc_oracle
