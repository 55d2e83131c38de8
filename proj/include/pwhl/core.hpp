#pragma once

// Domain types and closed-form primitives of the penalized weighted
// Huber-LASSO (PWHL) estimator.
//
//   minimize over (beta, w):
//     1/2 sum_i l_a(w_i (y_i - x_i' beta)) + mu sum_i varpi_i |1 - w_i|
//                                          + lambda sum_j |beta_j|
//
// with l_a the Huber loss whose quadratic zone is |x| <= 1/alpha.

#include "pwhl/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <concepts>
#include <string>
#include <utility>
#include <vector>

namespace pwhl {

using Index = Eigen::Index;
using IndexSet = std::vector<Index>;  // sorted, 0-based

/// Entries with |beta_j| at or below this are treated as zero.
inline constexpr double kZeroTolerance = 1e-6;

namespace detail {

inline bool all_finite(const Eigen::Ref<const Eigen::MatrixXd>& m) {
    return m.allFinite();
}

inline void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

} // namespace detail

/// Design matrix and response. Immutable once built.
class Dataset {
public:
    Dataset(Eigen::MatrixXd x, Eigen::VectorXd y, std::vector<std::string> feature_names = {})
        : x_(std::move(x)), y_(std::move(y)), names_(std::move(feature_names)) {
        if (x_.rows() != y_.size())
            throw ShapeError("dataset: response length " + std::to_string(y_.size()) +
                             " does not match " + std::to_string(x_.rows()) + " design rows");
        if (x_.rows() < 2) throw DomainError("dataset: need at least two observations");
        if (x_.cols() < 1) throw DomainError("dataset: need at least one covariate");
        if (!detail::all_finite(x_) || !y_.allFinite())
            throw DomainError("dataset: non-finite entries");
        if (!names_.empty() && static_cast<Index>(names_.size()) != x_.cols())
            throw ShapeError("dataset: feature name count does not match column count");
    }

    const Eigen::MatrixXd& x() const noexcept { return x_; }
    const Eigen::VectorXd& y() const noexcept { return y_; }
    const std::vector<std::string>& feature_names() const noexcept { return names_; }
    Index rows() const noexcept { return x_.rows(); }
    Index cols() const noexcept { return x_.cols(); }

    /// Copy restricted to the given rows, in the given order.
    Dataset subset_rows(const IndexSet& rows) const {
        Eigen::MatrixXd xs(static_cast<Index>(rows.size()), x_.cols());
        Eigen::VectorXd ys(static_cast<Index>(rows.size()));
        for (Index k = 0; k < static_cast<Index>(rows.size()); ++k) {
            xs.row(k) = x_.row(rows[k]);
            ys(k) = y_(rows[k]);
        }
        return Dataset(std::move(xs), std::move(ys), names_);
    }

    /// Copy restricted to the given columns, in the given order.
    Dataset subset_cols(const IndexSet& cols) const {
        Eigen::MatrixXd xs(x_.rows(), static_cast<Index>(cols.size()));
        std::vector<std::string> names;
        for (Index k = 0; k < static_cast<Index>(cols.size()); ++k) {
            xs.col(k) = x_.col(cols[k]);
            if (!names_.empty()) names.push_back(names_[cols[k]]);
        }
        return Dataset(std::move(xs), y_, std::move(names));
    }

private:
    Eigen::MatrixXd x_;
    Eigen::VectorXd y_;
    std::vector<std::string> names_;
};

/// Huber tuning parameter alpha; residuals beyond 1/alpha are in the linear zone.
class RobustificationParam {
public:
    explicit RobustificationParam(double alpha) : alpha_(alpha) {
        detail::require(std::isfinite(alpha) && alpha > 0, "alpha must be positive and finite");
    }

    double alpha() const noexcept { return alpha_; }
    double threshold() const noexcept { return 1.0 / alpha_; }

    friend bool operator==(const RobustificationParam&, const RobustificationParam&) = default;

private:
    double alpha_;
};

/// Observation weights in (0, 1]. Entries below 1 mark detected outliers.
class WeightVector {
public:
    explicit WeightVector(Eigen::VectorXd w) : w_(std::move(w)) {
        for (Index i = 0; i < w_.size(); ++i)
            if (!(w_(i) > 0.0 && w_(i) <= 1.0))
                throw DomainError("weight " + std::to_string(i) + " outside (0, 1]");
    }

    static WeightVector ones(Index n) { return WeightVector(Eigen::VectorXd::Ones(n)); }

    const Eigen::VectorXd& values() const noexcept { return w_; }
    Index size() const noexcept { return w_.size(); }
    double operator[](Index i) const { return w_(i); }

    IndexSet outliers() const {
        IndexSet out;
        for (Index i = 0; i < w_.size(); ++i)
            if (w_(i) < 1.0) out.push_back(i);
        return out;
    }

private:
    Eigen::VectorXd w_;
};

/// Per-observation prior weights varpi_i > 0 scaling the weight penalty.
class PriorWeights {
public:
    explicit PriorWeights(Eigen::VectorXd varpi) : v_(std::move(varpi)) {
        for (Index i = 0; i < v_.size(); ++i)
            if (!(std::isfinite(v_(i)) && v_(i) > 0.0))
                throw DomainError("prior weight " + std::to_string(i) + " must be positive and finite");
    }

    static PriorWeights ones(Index n) { return PriorWeights(Eigen::VectorXd::Ones(n)); }

    const Eigen::VectorXd& values() const noexcept { return v_; }
    Index size() const noexcept { return v_.size(); }
    double operator[](Index i) const { return v_(i); }

private:
    Eigen::VectorXd v_;
};

/// Regression coefficients together with the zero threshold used for supports.
class Coefficients {
public:
    explicit Coefficients(Eigen::VectorXd beta, double zero_tolerance = kZeroTolerance)
        : beta_(std::move(beta)), tol_(zero_tolerance) {
        detail::require(beta_.allFinite(), "coefficients must be finite");
        detail::require(tol_ >= 0.0, "zero tolerance must be nonnegative");
    }

    static Coefficients zeros(Index p) { return Coefficients(Eigen::VectorXd::Zero(p)); }

    const Eigen::VectorXd& values() const noexcept { return beta_; }
    Index size() const noexcept { return beta_.size(); }
    double operator[](Index j) const { return beta_(j); }
    double zero_tolerance() const noexcept { return tol_; }

    bool is_nonzero(Index j) const { return std::abs(beta_(j)) > tol_; }

    IndexSet support() const {
        IndexSet s;
        for (Index j = 0; j < beta_.size(); ++j)
            if (is_nonzero(j)) s.push_back(j);
        return s;
    }

    Index nnz() const { return static_cast<Index>(support().size()); }

private:
    Eigen::VectorXd beta_;
    double tol_;
};

struct PenaltyConfig {
    RobustificationParam alpha{0.1};
    double mu = 0.1;
    double lambda = 0.1;
    PriorWeights varpi{Eigen::VectorXd()};
    int max_outer_iters = 100;
    int max_inner_iters = 20000;
    double w_tol = 1e-8;
    double beta_tol = 1e-7;

    void validate() const {
        detail::require(std::isfinite(mu) && mu > 0, "mu must be positive");
        detail::require(std::isfinite(lambda) && lambda > 0, "lambda must be positive");
        detail::require(max_outer_iters > 0 && max_inner_iters > 0, "iteration caps must be positive");
        detail::require(w_tol > 0 && beta_tol > 0, "tolerances must be positive");
    }
};

struct FitResult {
    Coefficients beta{Eigen::VectorXd()};
    WeightVector w{Eigen::VectorXd()};
    IndexSet outliers;
    std::vector<double> objective_trace;
    int outer_iterations = 0;
    bool converged = false;
    PenaltyConfig config_used;
};

// ---------------------------------------------------------------------------
// Closed-form primitives

/// Huber loss: x^2 inside [-1/alpha, 1/alpha], 2|x|/alpha - 1/alpha^2 outside.
template <std::floating_point T>
T huber_loss(T x, T alpha) {
    if (!std::isfinite(x) || !std::isfinite(alpha) || !(alpha > 0))
        throw DomainError("huber_loss: requires finite x and alpha > 0");
    const T t = T(1) / alpha;
    const T ax = std::abs(x);
    return ax <= t ? x * x : T(2) * t * ax - t * t;
}

inline double huber_loss(double x, const RobustificationParam& a) { return huber_loss(x, a.alpha()); }

/// Score of the Huber loss, clipped identity: e on [-1/alpha, 1/alpha], +-1/alpha outside.
/// This is half the derivative of huber_loss.
template <std::floating_point T>
T huber_psi(T e, T alpha) {
    if (!std::isfinite(e) || !std::isfinite(alpha) || !(alpha > 0))
        throw DomainError("huber_psi: requires finite e and alpha > 0");
    const T t = T(1) / alpha;
    if (e > t) return t;
    if (e < -t) return -t;
    return e;
}

inline double huber_psi(double e, const RobustificationParam& a) { return huber_psi(e, a.alpha()); }

/// sign(x) max(|x| - t, 0)
template <std::floating_point T>
T soft_threshold(T x, T t) {
    if (!(t >= 0)) throw DomainError("soft_threshold: threshold must be nonnegative");
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return T(0);
}

/// Full PWHL objective, with the 1/2 in front of the loss sum.
inline double pwhl_objective(const Dataset& data, const Coefficients& beta, const WeightVector& w,
                             const PenaltyConfig& cfg) {
    const Index n = data.rows();
    if (beta.size() != data.cols()) throw ShapeError("pwhl_objective: beta length != column count");
    if (w.size() != n) throw ShapeError("pwhl_objective: weight length != row count");
    if (cfg.varpi.size() != n) throw ShapeError("pwhl_objective: prior weight length != row count");

    const Eigen::VectorXd r = data.y() - data.x() * beta.values();
    const double a = cfg.alpha.alpha();
    double loss = 0.0;
    double wpen = 0.0;
    for (Index i = 0; i < n; ++i) {
        loss += huber_loss(w[i] * r(i), a);
        wpen += cfg.varpi[i] * std::abs(1.0 - w[i]);
    }
    return 0.5 * loss + cfg.mu * wpen + cfg.lambda * beta.values().lpNorm<1>();
}

} // namespace pwhl
