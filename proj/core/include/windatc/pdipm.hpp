#pragma once

#include <Eigen/Dense>
#include <vector>

#include "windatc/nlp.hpp"

namespace windatc::opt {

struct SolverOptions {
    double gap_tol = 1e-6;
    double feas_tol = 1e-6;
    int max_iters = 100;
    double centering_sigma = 0.1;
    double step_fraction = 0.9995;
    double initial_slack_margin = 1.0;
    bool record_trace = true;
};

/// One interior-point iterate: primal variables, two-sided slacks, equality
/// multipliers y, bound multipliers z >= 0 (lower) and w <= 0 (upper).
struct IterationState {
    Eigen::VectorXd x;
    Eigen::VectorXd slack_lower;  // l > 0
    Eigen::VectorXd slack_upper;  // u > 0
    Eigen::VectorXd eq_mult;      // y
    Eigen::VectorXd mult_lower;   // z
    Eigen::VectorXd mult_upper;   // w
    double mu = 0.0;

    double complementarity_gap() const {
        return slack_lower.dot(mult_lower) - slack_upper.dot(mult_upper);
    }
};

struct NewtonDirection {
    Eigen::VectorXd dx, dl, du, dy, dz, dw;
    /// Diagonal shift applied to the primal block of the KKT matrix; zero
    /// when the unmodified system already had the correct inertia.
    double regularization = 0.0;
};

enum class SolveStatus { Converged, IterationLimit, NumericalFailure };

struct TraceRow {
    int iter;
    double gap;
    double eq_residual;
    double ineq_violation;
    double stationarity;
    double objective;
};

struct PdipmSolution {
    Eigen::VectorXd x;
    double objective = 0.0;  // value of the maximized f at x
    Eigen::VectorXd eq_mult, mult_lower, mult_upper;
    Eigen::VectorXd slack_lower, slack_upper;
    SolveStatus status = SolveStatus::NumericalFailure;
    int iterations = 0;
    std::string failure_detail;
    std::vector<TraceRow> trace;

    bool converged() const { return status == SolveStatus::Converged; }
};

PdipmSolution solve(const NlpProblem& problem, const SolverOptions& options = {});

/// Newton direction on the symmetrized KKT system at the current barrier mu.
/// Throws std::runtime_error if the system stays singular after one
/// regularization retry.
NewtonDirection newton_step(const IterationState& state, const NlpProblem& problem);

/// Fraction-to-boundary step lengths: primal for the slacks, dual for the
/// bound multipliers.
std::pair<double, double> step_lengths(const IterationState& state,
                                       const NewtonDirection& direction, double step_fraction);

/// Plain centering rule: mu = sigma * gap / (2 * n_ineq).
double update_barrier(const IterationState& state, double centering_sigma);

}  // namespace windatc::opt
