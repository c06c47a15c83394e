#pragma once

#include <Eigen/Dense>

namespace windatc::opt {

/// A smooth nonlinear program in the form
///   maximize f(x)  s.t.  g(x) = 0,  lower <= h(x) <= upper.
/// Implementations supply values, first derivatives and the Hessian of the
/// weighted Lagrangian.
class NlpProblem {
public:
    virtual ~NlpProblem() = default;

    virtual int num_vars() const = 0;
    virtual int num_eq() const = 0;
    virtual int num_ineq() const = 0;

    virtual Eigen::VectorXd ineq_lower() const = 0;
    virtual Eigen::VectorXd ineq_upper() const = 0;
    virtual Eigen::VectorXd initial_point() const = 0;

    /// Objective value; gradient written if grad != nullptr.
    virtual double objective(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const = 0;

    /// Equality residuals g(x); Jacobian written if jac != nullptr.
    virtual void equalities(const Eigen::VectorXd& x, Eigen::VectorXd& g,
                            Eigen::MatrixXd* jac) const = 0;

    /// Constraint functions h(x); Jacobian written if jac != nullptr.
    virtual void inequalities(const Eigen::VectorXd& x, Eigen::VectorXd& h,
                              Eigen::MatrixXd* jac) const = 0;

    /// Hessian of obj_weight*f(x) + eq_mult'g(x) + ineq_mult'h(x).
    virtual Eigen::MatrixXd lagrangian_hessian(const Eigen::VectorXd& x, double obj_weight,
                                               const Eigen::VectorXd& eq_mult,
                                               const Eigen::VectorXd& ineq_mult) const = 0;
};

}  // namespace windatc::opt
