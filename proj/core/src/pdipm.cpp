#include "windatc/pdipm.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace windatc::opt {

namespace {

// The solver works on the minimization form phi = -f; signs are flipped back
// at the reporting boundary.

struct Evaluation {
    double f = 0.0;               // maximized objective
    Eigen::VectorXd grad_phi;     // gradient of -f
    Eigen::VectorXd g;
    Eigen::MatrixXd jg;
    Eigen::VectorXd h;
    Eigen::MatrixXd jh;
};

Evaluation evaluate(const NlpProblem& p, const Eigen::VectorXd& x) {
    Evaluation ev;
    Eigen::VectorXd grad_f;
    ev.f = p.objective(x, &grad_f);
    ev.grad_phi = -grad_f;
    p.equalities(x, ev.g, &ev.jg);
    p.inequalities(x, ev.h, &ev.jh);
    return ev;
}

Eigen::VectorXd stationarity_residual(const Evaluation& ev, const IterationState& s) {
    Eigen::VectorXd r = ev.grad_phi;
    if (ev.g.size() > 0) r += ev.jg.transpose() * s.eq_mult;
    if (ev.h.size() > 0) r -= ev.jh.transpose() * (s.mult_lower + s.mult_upper);
    return r;
}

double ineq_violation(const Eigen::VectorXd& h, const Eigen::VectorXd& lo,
                      const Eigen::VectorXd& hi) {
    if (h.size() == 0) return 0.0;
    double v = 0.0;
    v = std::max(v, (lo - h).maxCoeff());
    v = std::max(v, (h - hi).maxCoeff());
    return std::max(v, 0.0);
}

NewtonDirection newton_step_impl(const IterationState& s, const NlpProblem& p,
                                 const Evaluation& ev) {
    const int nx = p.num_vars();
    const int ne = p.num_eq();
    const int ni = p.num_ineq();

    Eigen::MatrixXd hess =
        p.lagrangian_hessian(s.x, -1.0, s.eq_mult, -(s.mult_lower + s.mult_upper));

    const Eigen::VectorXd lo = p.ineq_lower();
    const Eigen::VectorXd hi = p.ineq_upper();
    Eigen::VectorXd r_x = stationarity_residual(ev, s);
    Eigen::VectorXd r_l = ev.h - s.slack_lower - lo;
    Eigen::VectorXd r_u = ev.h + s.slack_upper - hi;

    Eigen::VectorXd zl = s.mult_lower.cwiseQuotient(s.slack_lower);
    Eigen::VectorXd wu = s.mult_upper.cwiseQuotient(s.slack_upper);
    Eigen::VectorXd d = zl - wu;  // > 0 at interior points

    Eigen::VectorXd corr(ni);
    for (int i = 0; i < ni; ++i) {
        corr(i) = -zl(i) * r_l(i) + wu(i) * r_u(i) -
                  (s.mult_lower(i) + s.mult_upper(i)) +
                  s.mu * (1.0 / s.slack_lower(i) - 1.0 / s.slack_upper(i));
    }

    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nx + ne, nx + ne);
    kkt.topLeftCorner(nx, nx) = hess;
    if (ni > 0) kkt.topLeftCorner(nx, nx) += ev.jh.transpose() * d.asDiagonal() * ev.jh;
    if (ne > 0) {
        kkt.topRightCorner(nx, ne) = ev.jg.transpose();
        kkt.bottomLeftCorner(ne, nx) = ev.jg;
    }

    Eigen::VectorXd rhs(nx + ne);
    rhs.head(nx) = -r_x;
    if (ni > 0) rhs.head(nx) += ev.jh.transpose() * corr;
    if (ne > 0) rhs.tail(ne) = -ev.g;

    // Inertia-corrected solve. On a nonconvex problem the iterates can be
    // drawn to a saddle of the barrier subproblem, where the reduced KKT
    // matrix loses its (nx positive, ne negative) inertia and the Newton
    // direction degenerates into large moves along the flat direction.
    // Shifting the primal diagonal until the inertia is restored turns the
    // direction back into a descent direction for the barrier problem.
    // Eigenvalues are classified by sign alone: near the solution the matrix
    // legitimately carries tiny but meaningful eigenvalues, and a relative
    // zero threshold would misread them as rank deficiency and trigger
    // enormous shifts.
    const double rhs_scale = 1.0 + rhs.norm();
    Eigen::VectorXd sol;
    bool ok = false;
    double shift = 0.0;
    double shift_used = 0.0;
    for (int attempt = 0; attempt < 14 && !ok; ++attempt) {
        Eigen::MatrixXd m = kkt;
        for (int i = 0; i < nx; ++i) m(i, i) += shift;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
        const Eigen::VectorXd& lam = es.eigenvalues();
        int pos = 0;
        for (int i = 0; i < lam.size(); ++i)
            if (lam(i) > 0.0) ++pos;
        if (pos == nx && lam.size() - pos == ne) {
            sol = m.partialPivLu().solve(rhs);
            ok = sol.allFinite() && (m * sol - rhs).norm() <= 1e-6 * rhs_scale;
            shift_used = shift;
        }
        if (!ok) shift = shift == 0.0 ? 1e-8 : shift * 10.0;
    }
    if (!ok) {
        std::ostringstream msg;
        msg << "singular KKT system (dim " << nx + ne << ", rhs norm " << rhs.norm() << ")";
        throw std::runtime_error(msg.str());
    }

    NewtonDirection dir;
    dir.regularization = shift_used;
    dir.dx = sol.head(nx);
    dir.dy = ne > 0 ? Eigen::VectorXd(sol.tail(ne)) : Eigen::VectorXd();
    dir.dl = (ni > 0 ? Eigen::VectorXd(ev.jh * dir.dx + r_l) : Eigen::VectorXd());
    dir.du = (ni > 0 ? Eigen::VectorXd(-ev.jh * dir.dx - r_u) : Eigen::VectorXd());
    if (ni > 0) {
        dir.dz = -s.mult_lower + (s.mu * s.slack_lower.cwiseInverse()) -
                 zl.cwiseProduct(dir.dl);
        dir.dw = -s.mult_upper - (s.mu * s.slack_upper.cwiseInverse()) -
                 wu.cwiseProduct(dir.du);
    }
    return dir;
}

}  // namespace

NewtonDirection newton_step(const IterationState& state, const NlpProblem& problem) {
    return newton_step_impl(state, problem, evaluate(problem, state.x));
}

std::pair<double, double> step_lengths(const IterationState& state,
                                       const NewtonDirection& direction, double step_fraction) {
    double ap = 1.0, ad = 1.0;
    const int ni = static_cast<int>(state.slack_lower.size());
    for (int i = 0; i < ni; ++i) {
        if (direction.dl(i) < 0.0)
            ap = std::min(ap, -step_fraction * state.slack_lower(i) / direction.dl(i));
        if (direction.du(i) < 0.0)
            ap = std::min(ap, -step_fraction * state.slack_upper(i) / direction.du(i));
        if (direction.dz(i) < 0.0)
            ad = std::min(ad, -step_fraction * state.mult_lower(i) / direction.dz(i));
        if (direction.dw(i) > 0.0)
            ad = std::min(ad, -step_fraction * state.mult_upper(i) / direction.dw(i));
    }
    return {ap, ad};
}

double update_barrier(const IterationState& state, double centering_sigma) {
    const int ni = static_cast<int>(state.slack_lower.size());
    if (ni == 0) return 0.0;
    return centering_sigma * state.complementarity_gap() / (2.0 * ni);
}

PdipmSolution solve(const NlpProblem& problem, const SolverOptions& options) {
    const int ni = problem.num_ineq();
    const Eigen::VectorXd lo = problem.ineq_lower();
    const Eigen::VectorXd hi = problem.ineq_upper();

    IterationState s;
    s.x = problem.initial_point();
    Evaluation ev = evaluate(problem, s.x);

    s.slack_lower.resize(ni);
    s.slack_upper.resize(ni);
    for (int i = 0; i < ni; ++i) {
        s.slack_lower(i) = std::max(options.initial_slack_margin, ev.h(i) - lo(i));
        s.slack_upper(i) = std::max(options.initial_slack_margin, hi(i) - ev.h(i));
    }
    s.eq_mult = Eigen::VectorXd::Zero(problem.num_eq());
    s.mult_lower = Eigen::VectorXd::Ones(ni);
    s.mult_upper = -Eigen::VectorXd::Ones(ni);
    s.mu = update_barrier(s, options.centering_sigma);

    PdipmSolution out;
    auto snapshot = [&](SolveStatus status, int iters) {
        out.x = s.x;
        out.objective = ev.f;
        out.eq_mult = s.eq_mult;
        out.mult_lower = s.mult_lower;
        out.mult_upper = s.mult_upper;
        out.slack_lower = s.slack_lower;
        out.slack_upper = s.slack_upper;
        out.status = status;
        out.iterations = iters;
    };

    for (int iter = 0; iter <= options.max_iters; ++iter) {
        double gap = s.complementarity_gap();
        double eq_res = ev.g.size() > 0 ? ev.g.lpNorm<Eigen::Infinity>() : 0.0;
        double viol = ineq_violation(ev.h, lo, hi);
        double stat = stationarity_residual(ev, s).lpNorm<Eigen::Infinity>();
        if (options.record_trace) out.trace.push_back({iter, gap, eq_res, viol, stat, ev.f});

        if (gap < options.gap_tol && eq_res < options.feas_tol && viol < options.feas_tol &&
            stat < options.feas_tol) {
            snapshot(SolveStatus::Converged, iter);
            return out;
        }
        if (iter == options.max_iters) break;

        NewtonDirection dir;
        try {
            dir = newton_step_impl(s, problem, ev);
        } catch (const std::exception& e) {
            snapshot(SolveStatus::NumericalFailure, iter);
            out.failure_detail = std::string("iteration ") + std::to_string(iter) + ": " + e.what();
            return out;
        }

        auto [ap, ad] = step_lengths(s, dir, options.step_fraction);

        auto advance = [&](double primal, double dual) {
            IterationState n = s;
            n.x += primal * dir.dx;
            if (ni > 0) {
                n.slack_lower += primal * dir.dl;
                n.slack_upper += primal * dir.du;
                n.mult_lower += dual * dir.dz;
                n.mult_upper += dual * dir.dw;
            }
            if (dir.dy.size() > 0) n.eq_mult += dual * dir.dy;
            return n;
        };
        auto merit = [&](const IterationState& st, const Evaluation& e) {
            double m = stationarity_residual(e, st).squaredNorm();
            if (e.g.size() > 0) m += e.g.squaredNorm();
            for (int i = 0; i < ni; ++i) {
                m += std::pow(st.slack_lower(i) * st.mult_lower(i) - st.mu, 2);
                m += std::pow(st.slack_upper(i) * st.mult_upper(i) + st.mu, 2);
                m += std::pow(e.h(i) - st.slack_lower(i) - lo(i), 2);
                m += std::pow(e.h(i) + st.slack_upper(i) - hi(i), 2);
            }
            return std::sqrt(m);
        };
        const double merit0 = merit(s, ev);

        // Exact-penalty barrier merit, used to safeguard regularized steps:
        // a shifted direction is a descent direction for the barrier
        // subproblem, not for the KKT residual.
        auto barrier_merit = [&](const IterationState& st, const Evaluation& e, double nu) {
            double m = -e.f;
            double infeas = e.g.size() > 0 ? e.g.lpNorm<1>() : 0.0;
            for (int i = 0; i < ni; ++i) {
                m -= st.mu * (std::log(st.slack_lower(i)) + std::log(st.slack_upper(i)));
                infeas += std::abs(e.h(i) - st.slack_lower(i) - lo(i));
                infeas += std::abs(e.h(i) + st.slack_upper(i) - hi(i));
            }
            return m + nu * infeas;
        };

        IterationState next = advance(ap, ad);
        Evaluation ev_next = evaluate(problem, next.x);
        if (dir.regularization > 0.0) {
            // Escaping a saddle point legitimately increases the KKT
            // residual at first, so damp the step with the penalty merit
            // instead. The penalty weight must dominate the multipliers for
            // feasibility progress to register.
            double nu = 1.0;
            if (s.eq_mult.size() > 0) nu = std::max(nu, s.eq_mult.lpNorm<Eigen::Infinity>());
            if (ni > 0)
                nu = std::max({nu, s.mult_lower.lpNorm<Eigen::Infinity>(),
                               s.mult_upper.lpNorm<Eigen::Infinity>()});
            nu *= 2.0;
            const double m0 = barrier_merit(s, ev, nu);
            for (double t = 0.5; t >= 1.0 / 1024.0; t *= 0.5) {
                if (barrier_merit(next, ev_next, nu) <= m0) break;
                next = advance(t * ap, t * ad);
                ev_next = evaluate(problem, next.x);
            }
        } else if (merit(next, ev_next) > 0.9 * merit0) {
            // The full step failed to reduce the perturbed KKT residual; a
            // plain Newton step can enter a two-point limit cycle on
            // nonconvex problems. Backtrack along a common-length damped
            // step, which is a scaled Newton step and therefore guarantees
            // residual descent for small enough t.
            const double alpha = std::min(ap, ad);
            for (double t = 1.0; t >= 1.0 / 1024.0; t *= 0.5) {
                next = advance(t * alpha, t * alpha);
                ev_next = evaluate(problem, next.x);
                if (merit(next, ev_next) <= (1.0 - 1e-4) * merit0) break;
            }
        }
        s = std::move(next);
        ev = std::move(ev_next);
        s.mu = update_barrier(s, options.centering_sigma);
        if (ni > 0) {
            // Anti-jamming safeguards: when the fraction-to-boundary rule
            // collapses the step, re-center instead of letting the barrier
            // keep shrinking, and never let it fall far below the current
            // stationarity error.
            if (std::min(ap, ad) < 1e-2)
                s.mu = std::max(s.mu, s.complementarity_gap() / (2.0 * ni));
            double stat_now = stationarity_residual(ev, s).lpNorm<Eigen::Infinity>();
            s.mu = std::max(s.mu, 1e-2 * options.gap_tol * stat_now / options.feas_tol);
        }
    }

    snapshot(SolveStatus::IterationLimit, options.max_iters);
    return out;
}

}  // namespace windatc::opt
