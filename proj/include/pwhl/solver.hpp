#pragma once

// Alternating solver for the PWHL problem.
//
// The beta-step minimizes  s * sum_i l_a(w_i (y_i - x_i' beta)) + lambda |beta|_1
// by proximal gradient with a backtracked quadratic majorizer; s is 1/n
// (LossScale::Mean) or 1 (LossScale::Sum). The w-step applies the closed-form
// rule  w_i = mu varpi_i / l_a(r_i)  when  l_a(r_i) > mu varpi_i,  else 1.

#include "pwhl/core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace pwhl {

enum class LossScale { Mean, Sum };

struct InnerSolverOptions {
    double step_init = 1.0;
    double backtrack_factor = 0.5;
    int max_backtracks = 50;
    double beta_tol = 1e-7;
    int max_iters = 20000;
    LossScale loss_scale = LossScale::Mean;

    void validate() const {
        detail::require(step_init > 0 && std::isfinite(step_init), "step_init must be positive");
        detail::require(backtrack_factor > 0 && backtrack_factor < 1, "backtrack_factor must be in (0,1)");
        detail::require(max_backtracks > 0 && max_iters > 0, "iteration caps must be positive");
        detail::require(beta_tol > 0, "beta_tol must be positive");
    }
};

namespace detail {

inline double huber_fast(double x, double t) {
    const double ax = std::abs(x);
    return ax <= t ? x * x : 2.0 * t * ax - t * t;
}

inline double psi_fast(double e, double t) { return std::clamp(e, -t, t); }

/// The weighted Huber-LASSO subproblem with the weights held fixed.
class BetaSubproblem {
public:
    BetaSubproblem(const Dataset& data, const Eigen::VectorXd& w, double alpha, double lambda, LossScale scale)
        : data_(data), w_(w), t_(1.0 / alpha), lambda_(lambda),
          s_(scale == LossScale::Mean ? 1.0 / static_cast<double>(data.rows()) : 1.0) {
        if (w.size() != data.rows()) throw ShapeError("beta step: weight length != row count");
        require(lambda >= 0 && std::isfinite(lambda), "lambda must be nonnegative");
    }

    Index cols() const { return data_.cols(); }
    double lambda() const { return lambda_; }

    void fitted(const Eigen::VectorXd& beta, Eigen::VectorXd& out) const {
        out.noalias() = data_.x() * beta;
    }

    /// Smooth part given the fitted values X beta.
    double smooth(const Eigen::VectorXd& fit) const {
        double acc = 0.0;
        const auto& y = data_.y();
        for (Index i = 0; i < fit.size(); ++i) acc += huber_fast(w_(i) * (y(i) - fit(i)), t_);
        return s_ * acc;
    }

    void gradient(const Eigen::VectorXd& fit, Eigen::VectorXd& g) const {
        Eigen::VectorXd v(fit.size());
        const auto& y = data_.y();
        for (Index i = 0; i < fit.size(); ++i) v(i) = -2.0 * s_ * w_(i) * psi_fast(w_(i) * (y(i) - fit(i)), t_);
        g.noalias() = data_.x().transpose() * v;
        if (!g.allFinite()) throw NumericError("beta step: non-finite gradient");
    }

    double penalty(const Eigen::VectorXd& beta) const { return lambda_ * beta.lpNorm<1>(); }

    double objective(const Eigen::VectorXd& beta) const {
        Eigen::VectorXd f;
        fitted(beta, f);
        return smooth(f) + penalty(beta);
    }

private:
    const Dataset& data_;
    const Eigen::VectorXd& w_;
    double t_;
    double lambda_;
    double s_;
};

struct StepState {
    Eigen::VectorXd beta;
    Eigen::VectorXd fit;
    Eigen::VectorXd grad;
    double smooth = 0.0;
};

inline void soft_threshold_into(const Eigen::VectorXd& z, double t, Eigen::VectorXd& out) {
    out.resize(z.size());
    for (Index j = 0; j < z.size(); ++j) out(j) = soft_threshold(z(j), t);
}

/// One backtracked proximal step from `cur`. On return `next` holds the accepted
/// iterate (fit and smooth value filled, gradient not) and `step` the accepted step.
inline int backtracked_step(const BetaSubproblem& prob, const StepState& cur, double& step,
                            const InnerSolverOptions& opts, StepState& next) {
    Eigen::VectorXd z;
    for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
        z = cur.beta - step * cur.grad;
        soft_threshold_into(z, step * prob.lambda(), next.beta);
        const Eigen::VectorXd d = next.beta - cur.beta;
        prob.fitted(next.beta, next.fit);
        next.smooth = prob.smooth(next.fit);
        if (!std::isfinite(next.smooth)) throw NumericError("beta step: non-finite loss");
        const double bound = cur.smooth + cur.grad.dot(d) + d.squaredNorm() / (2.0 * step);
        const double slack = 1e-13 * std::max(1.0, std::abs(cur.smooth));
        if (next.smooth <= bound + slack) return bt;
        step *= opts.backtrack_factor;
    }
    throw SolverError("beta step: backtracking exhausted after " + std::to_string(opts.max_backtracks) +
                          " reductions",
                      cur.beta);
}

} // namespace detail

/// Value of the beta-step objective at `beta` with weights held fixed.
inline double beta_subproblem_objective(const Dataset& data, const WeightVector& w, const Eigen::VectorXd& beta,
                                        const RobustificationParam& alpha, double lambda,
                                        LossScale scale = LossScale::Mean) {
    if (beta.size() != data.cols()) throw ShapeError("beta length != column count");
    detail::BetaSubproblem prob(data, w.values(), alpha.alpha(), lambda, scale);
    return prob.objective(beta);
}

struct ProxStep {
    Eigen::VectorXd beta;
    double step = 0.0;
    int backtracks = 0;
    double objective_before = 0.0;
    double objective_after = 0.0;
};

/// A single accepted proximal-gradient step, starting from trial step `step`.
inline ProxStep prox_gradient_step(const Dataset& data, const WeightVector& w, const Eigen::VectorXd& beta,
                                   const RobustificationParam& alpha, double lambda, double step,
                                   const InnerSolverOptions& opts = {}) {
    opts.validate();
    if (beta.size() != data.cols()) throw ShapeError("beta length != column count");
    detail::BetaSubproblem prob(data, w.values(), alpha.alpha(), lambda, opts.loss_scale);
    detail::StepState cur;
    cur.beta = beta;
    prob.fitted(beta, cur.fit);
    cur.smooth = prob.smooth(cur.fit);
    prob.gradient(cur.fit, cur.grad);
    detail::StepState next;
    ProxStep out;
    out.step = step;
    out.backtracks = detail::backtracked_step(prob, cur, out.step, opts, next);
    out.objective_before = cur.smooth + prob.penalty(cur.beta);
    out.objective_after = next.smooth + prob.penalty(next.beta);
    out.beta = std::move(next.beta);
    return out;
}

struct InnerSolveInfo {
    int iterations = 0;
    bool converged = false;
    double objective = 0.0;
};

/// Beta-step: minimize the weighted Huber-LASSO subproblem starting from beta_prev.
/// Never returns a point with a larger subproblem objective than beta_prev.
inline Coefficients update_beta(const Dataset& data, const WeightVector& w, const Coefficients& beta_prev,
                                const RobustificationParam& alpha, double lambda,
                                const InnerSolverOptions& opts = {}, InnerSolveInfo* info = nullptr) {
    opts.validate();
    if (beta_prev.size() != data.cols()) throw ShapeError("update_beta: beta length != column count");
    detail::BetaSubproblem prob(data, w.values(), alpha.alpha(), lambda, opts.loss_scale);

    detail::StepState cur, next;
    cur.beta = beta_prev.values();
    prob.fitted(cur.beta, cur.fit);
    cur.smooth = prob.smooth(cur.fit);
    prob.gradient(cur.fit, cur.grad);

    double step = opts.step_init;
    InnerSolveInfo local;
    for (local.iterations = 1; local.iterations <= opts.max_iters; ++local.iterations) {
        detail::backtracked_step(prob, cur, step, opts, next);
        const Eigen::VectorXd d = next.beta - cur.beta;
        const double change = d.size() ? d.lpNorm<Eigen::Infinity>() : 0.0;
        if (change == 0.0) {
            local.converged = true;
            break;
        }
        prob.gradient(next.fit, next.grad);

        // Barzilai-Borwein guess for the next trial step; backtracking keeps descent.
        const double sy = d.dot(next.grad - cur.grad);
        double trial = sy > 0 ? d.squaredNorm() / sy : 2.0 * step;
        if (!std::isfinite(trial) || trial <= 0) trial = step;
        step = std::min(trial, 1e12);

        std::swap(cur, next);
        if (change < opts.beta_tol) {
            local.converged = true;
            break;
        }
    }
    local.iterations = std::min(local.iterations, opts.max_iters);
    local.objective = cur.smooth + prob.penalty(cur.beta);
    if (info) *info = local;
    return Coefficients(std::move(cur.beta), beta_prev.zero_tolerance());
}

/// Weight step, applied literally per observation.
inline WeightVector update_weights(const Eigen::VectorXd& residuals, const PriorWeights& varpi, double mu,
                                   const RobustificationParam& alpha) {
    if (residuals.size() != varpi.size()) throw ShapeError("update_weights: residual length != prior weight length");
    detail::require(std::isfinite(mu) && mu > 0, "update_weights: mu must be positive");
    Eigen::VectorXd w(residuals.size());
    for (Index i = 0; i < residuals.size(); ++i) {
        if (!std::isfinite(residuals(i))) throw NumericError("update_weights: non-finite residual");
        const double mu_bar = mu * varpi[i];
        const double loss = huber_loss(residuals(i), alpha);
        w(i) = loss > mu_bar ? mu_bar / loss : 1.0;
    }
    return WeightVector(std::move(w));
}

/// Alternating minimization: beta-step, residuals, weight step, until the
/// weights move less than cfg.w_tol in sup-norm or max_outer_iters is hit.
/// `w_start` defaults to all ones.
inline FitResult fit_pwhl(const Dataset& data, const Coefficients& beta0, const PenaltyConfig& cfg,
                          const InnerSolverOptions& opts = {}, const std::optional<WeightVector>& w_start = {}) {
    cfg.validate();
    const Index n = data.rows();
    if (beta0.size() != data.cols()) throw ShapeError("fit_pwhl: beta0 length != column count");
    if (cfg.varpi.size() != n) throw ShapeError("fit_pwhl: prior weight length != row count");
    if (w_start && w_start->size() != n) throw ShapeError("fit_pwhl: start weight length != row count");

    InnerSolverOptions inner = opts;
    inner.beta_tol = cfg.beta_tol;
    inner.max_iters = cfg.max_inner_iters;

    FitResult res;
    res.config_used = cfg;
    WeightVector w = w_start ? *w_start : WeightVector::ones(n);
    Coefficients beta = beta0;
    for (int k = 1; k <= cfg.max_outer_iters; ++k) {
        try {
            beta = update_beta(data, w, beta, cfg.alpha, cfg.lambda, inner);
        } catch (const SolverError& e) {
            throw SolverError(std::string(e.what()) + " (outer iteration " + std::to_string(k) + ")",
                              e.last_iterate());
        } catch (const NumericError& e) {
            throw NumericError(std::string(e.what()) + " (outer iteration " + std::to_string(k) + ")");
        }
        const Eigen::VectorXd r = data.y() - data.x() * beta.values();
        WeightVector w_new = update_weights(r, cfg.varpi, cfg.mu, cfg.alpha);
        const double delta = (w_new.values() - w.values()).lpNorm<Eigen::Infinity>();
        w = std::move(w_new);
        res.objective_trace.push_back(pwhl_objective(data, beta, w, cfg));
        res.outer_iterations = k;
        if (delta < cfg.w_tol) {
            res.converged = true;
            break;
        }
    }
    res.beta = std::move(beta);
    res.outliers = w.outliers();
    res.w = std::move(w);
    return res;
}

/// Huber-LASSO baseline: the beta-step with all weights frozen at one, from zero.
inline Coefficients fit_huber_lasso(const Dataset& data, const RobustificationParam& alpha, double lambda,
                                    const InnerSolverOptions& opts = {}) {
    return update_beta(data, WeightVector::ones(data.rows()), Coefficients::zeros(data.cols()), alpha, lambda,
                       opts);
}

} // namespace pwhl
