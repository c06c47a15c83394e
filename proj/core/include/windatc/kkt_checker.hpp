#pragma once

#include "windatc/nlp.hpp"
#include "windatc/pdipm.hpp"

namespace windatc::opt {

/// Verdict of the standalone KKT verification. All quantities are infinity
/// norms of the respective residuals.
struct KktReport {
    double stationarity = 0.0;
    double eq_feasibility = 0.0;
    double ineq_feasibility = 0.0;
    double complementarity = 0.0;
    double sign_violation = 0.0;

    bool passes(double tol) const {
        return stationarity < tol && eq_feasibility < tol && ineq_feasibility < tol &&
               complementarity < tol && sign_violation < tol;
    }
};

/// Re-derives every KKT residual from the problem callbacks and the returned
/// point/multipliers. Shares no state with the solver iteration.
KktReport check_kkt(const NlpProblem& problem, const PdipmSolution& solution);

}  // namespace windatc::opt
