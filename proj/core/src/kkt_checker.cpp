#include "windatc/kkt_checker.hpp"

#include <algorithm>
#include <cmath>

namespace windatc::opt {

KktReport check_kkt(const NlpProblem& problem, const PdipmSolution& sol) {
    KktReport rep;
    const Eigen::VectorXd& x = sol.x;

    Eigen::VectorXd grad_f;
    problem.objective(x, &grad_f);

    Eigen::VectorXd g, h;
    Eigen::MatrixXd jg, jh;
    problem.equalities(x, g, &jg);
    problem.inequalities(x, h, &jh);

    // Stationarity of the minimization form -f + y'g - (z+w)'h.
    Eigen::VectorXd r = -grad_f;
    if (g.size() > 0) r += jg.transpose() * sol.eq_mult;
    if (h.size() > 0) r -= jh.transpose() * (sol.mult_lower + sol.mult_upper);
    rep.stationarity = r.size() > 0 ? r.lpNorm<Eigen::Infinity>() : 0.0;

    rep.eq_feasibility = g.size() > 0 ? g.lpNorm<Eigen::Infinity>() : 0.0;

    const Eigen::VectorXd lo = problem.ineq_lower();
    const Eigen::VectorXd hi = problem.ineq_upper();
    for (Eigen::Index i = 0; i < h.size(); ++i) {
        rep.ineq_feasibility = std::max(rep.ineq_feasibility, lo(i) - h(i));
        rep.ineq_feasibility = std::max(rep.ineq_feasibility, h(i) - hi(i));
        // Complementarity against the actual distance to each bound, not the
        // solver's slack variables.
        rep.complementarity =
            std::max(rep.complementarity, std::abs((h(i) - lo(i)) * sol.mult_lower(i)));
        rep.complementarity =
            std::max(rep.complementarity, std::abs((hi(i) - h(i)) * sol.mult_upper(i)));
        rep.sign_violation = std::max(rep.sign_violation, -sol.mult_lower(i));
        rep.sign_violation = std::max(rep.sign_violation, sol.mult_upper(i));
    }
    rep.ineq_feasibility = std::max(rep.ineq_feasibility, 0.0);
    rep.sign_violation = std::max(rep.sign_violation, 0.0);
    return rep;
}

}  // namespace windatc::opt
