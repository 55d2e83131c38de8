#pragma once

// Robustness diagnostics on the joint parametrization
//
//   theta = (beta, (mu/lambda) nu),   nu_i = varpi_i (1 - w_i),
//   z_i   = (x_i, 0, ..., (lambda/mu) (y_i - x_i' beta)/varpi_i, ..., 0),
//
// under which  y_i - z_i' theta = w_i (y_i - x_i' beta)  and the PWHL
// objective reads  1/2 sum_i l_a(e_i) + lambda |theta|_1.
//
// The estimating function is  U = sum_i psi_a(e_i) D_i + p'(theta), with
// D_i = de_i/dtheta. Its smoothed version replaces the indicators in psi_a by
// a normal CDF with bandwidth h.

#include "pwhl/core.hpp"
#include "pwhl/init.hpp"
#include "pwhl/solver.hpp"
#include "pwhl/tuning.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

namespace pwhl {

class JointParam {
public:
    JointParam(Eigen::VectorXd theta, Index p, double mu, double lambda, PriorWeights varpi)
        : theta_(std::move(theta)), p_(p), mu_(mu), lambda_(lambda), varpi_(std::move(varpi)) {
        detail::require(mu > 0 && lambda > 0, "joint parameter: mu and lambda must be positive");
        if (theta_.size() != p_ + varpi_.size()) throw ShapeError("joint parameter: theta length != p + n");
    }

    /// theta from (beta, w).
    static JointParam from_fit(const Coefficients& beta, const WeightVector& w, const PriorWeights& varpi, double mu,
                               double lambda) {
        if (w.size() != varpi.size()) throw ShapeError("joint parameter: weight and prior length differ");
        const Index p = beta.size(), n = w.size();
        Eigen::VectorXd theta(p + n);
        theta.head(p) = beta.values();
        for (Index i = 0; i < n; ++i) theta(p + i) = (mu / lambda) * varpi[i] * (1.0 - w[i]);
        return JointParam(std::move(theta), p, mu, lambda, varpi);
    }

    const Eigen::VectorXd& theta() const noexcept { return theta_; }
    Index p() const noexcept { return p_; }
    Index n() const noexcept { return varpi_.size(); }
    double mu() const noexcept { return mu_; }
    double lambda() const noexcept { return lambda_; }
    const PriorWeights& varpi() const noexcept { return varpi_; }

    auto beta() const { return theta_.head(p_); }
    auto nu() const { return (lambda_ / mu_) * theta_.tail(n()); }

    /// w_i implied by theta.
    double weight(Index i) const { return 1.0 - lambda_ * theta_(p_ + i) / (mu_ * varpi_[i]); }

    JointParam with_theta(Eigen::VectorXd theta) const { return JointParam(std::move(theta), p_, mu_, lambda_, varpi_); }

private:
    Eigen::VectorXd theta_;
    Index p_;
    double mu_;
    double lambda_;
    PriorWeights varpi_;
};

struct JointEmbedding {
    JointParam param;
    Eigen::MatrixXd z;  // n x (p + n)
};

inline JointEmbedding joint_embedding(const Dataset& data, const Coefficients& beta, const WeightVector& w,
                                      const PriorWeights& varpi, double mu, double lambda) {
    const Index n = data.rows(), p = data.cols();
    if (beta.size() != p || w.size() != n || varpi.size() != n) throw ShapeError("joint_embedding: dimension mismatch");
    JointParam param = JointParam::from_fit(beta, w, varpi, mu, lambda);
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, p + n);
    z.leftCols(p) = data.x();
    const Eigen::VectorXd r = data.y() - data.x() * beta.values();
    for (Index i = 0; i < n; ++i) z(i, p + i) = (lambda / mu) * r(i) / varpi[i];
    return {std::move(param), std::move(z)};
}

/// A single observation, optionally replacing row `index` of the data.
struct Observation {
    Index index;
    std::optional<Eigen::VectorXd> x;
    std::optional<double> y;
};

namespace detail {

struct ObservationTerms {
    double e;              // residual at theta
    Eigen::VectorXd grad;  // de/dtheta, length p + n
    double cross;          // d2e / dbeta_j dtheta_{p+i} = cross * x_j
    Eigen::VectorXd x;
};

inline ObservationTerms observation_terms(const Dataset& data, const JointParam& param, const Observation& obs) {
    const Index p = param.p(), n = param.n(), i = obs.index;
    if (data.rows() != n || data.cols() != p) throw ShapeError("estimating function: data does not match theta");
    if (i < 0 || i >= n) throw DomainError("estimating function: observation index out of range");
    ObservationTerms t;
    t.x = obs.x ? *obs.x : Eigen::VectorXd(data.x().row(i).transpose());
    if (t.x.size() != p) throw ShapeError("estimating function: observation has wrong covariate count");
    const double y = obs.y ? *obs.y : data.y()(i);
    const double r = y - t.x.dot(param.beta());
    const double c = param.lambda() / (param.mu() * param.varpi()[i]);
    const double w = param.weight(i);
    t.e = w * r;
    t.grad = Eigen::VectorXd::Zero(p + n);
    t.grad.head(p) = -w * t.x;
    t.grad(p + i) = -c * r;
    t.cross = c;
    return t;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

} // namespace detail

/// p'(theta; lambda) with the subgradient 0 at exact zeros.
inline Eigen::VectorXd penalty_subgradient(const JointParam& param) {
    Eigen::VectorXd g(param.theta().size());
    for (Index j = 0; j < g.size(); ++j) {
        const double t = param.theta()(j);
        g(j) = t > 0 ? param.lambda() : (t < 0 ? -param.lambda() : 0.0);
    }
    return g;
}

/// Data term psi_a(e) D of a single observation.
inline Eigen::VectorXd estimating_data_term(const Dataset& data, const JointParam& param,
                                            const RobustificationParam& alpha, const Observation& obs) {
    const auto t = detail::observation_terms(data, param, obs);
    return huber_psi(t.e, alpha) * t.grad;
}

/// U(theta) over the full sample.
inline Eigen::VectorXd estimating_function(const Dataset& data, const JointParam& param,
                                           const RobustificationParam& alpha) {
    Eigen::VectorXd u = penalty_subgradient(param);
    for (Index i = 0; i < param.n(); ++i) u += estimating_data_term(data, param, alpha, {i, {}, {}});
    return u;
}

/// U(theta) for one observation.
inline Eigen::VectorXd estimating_function(const Dataset& data, const JointParam& param,
                                           const RobustificationParam& alpha, const Observation& obs) {
    return estimating_data_term(data, param, alpha, obs) + penalty_subgradient(param);
}

struct SmoothingParams {
    double h = 0.1;  // bandwidth; kernel is the standard normal CDF

    void validate() const {
        if (!(h > 0 && std::isfinite(h))) throw DomainError("smoothing bandwidth must be positive");
    }

    static SmoothingParams for_sample_size(Index n) { return {1.0 / std::sqrt(static_cast<double>(n))}; }
};

/// Smoothed score: e w(e) + (1 - w(e)) (1/alpha) (2 Phi(e/h) - 1),
/// w(e) = Phi((e + 1/alpha)/h) - Phi((e - 1/alpha)/h).
inline double smoothed_psi(double e, const RobustificationParam& alpha, const SmoothingParams& sm) {
    sm.validate();
    const double a = alpha.threshold(), h = sm.h;
    const double wbar = detail::normal_cdf((e + a) / h) - detail::normal_cdf((e - a) / h);
    return e * wbar + (1.0 - wbar) * a * (2.0 * detail::normal_cdf(e / h) - 1.0);
}

inline double smoothed_psi_derivative(double e, const RobustificationParam& alpha, const SmoothingParams& sm) {
    sm.validate();
    const double a = alpha.threshold(), h = sm.h;
    const double wbar = detail::normal_cdf((e + a) / h) - detail::normal_cdf((e - a) / h);
    const double dwbar = (detail::normal_pdf((e + a) / h) - detail::normal_pdf((e - a) / h)) / h;
    const double sgn = 2.0 * detail::normal_cdf(e / h) - 1.0;
    return wbar + e * dwbar - dwbar * a * sgn + (1.0 - wbar) * a * 2.0 * detail::normal_pdf(e / h) / h;
}

inline Eigen::VectorXd smoothed_data_term(const Dataset& data, const JointParam& param,
                                          const RobustificationParam& alpha, const SmoothingParams& sm,
                                          const Observation& obs) {
    const auto t = detail::observation_terms(data, param, obs);
    return smoothed_psi(t.e, alpha, sm) * t.grad;
}

/// Smoothed U over the full sample.
inline Eigen::VectorXd smoothed_estimating_function(const Dataset& data, const JointParam& param,
                                                    const RobustificationParam& alpha, const SmoothingParams& sm) {
    Eigen::VectorXd u = penalty_subgradient(param);
    for (Index i = 0; i < param.n(); ++i) u += smoothed_data_term(data, param, alpha, sm, {i, {}, {}});
    return u;
}

/// max over the grid of |psi_smoothed(e) - psi(e)|.
inline double smoothing_gap(const RobustificationParam& alpha, const SmoothingParams& sm,
                            const std::vector<double>& e_grid) {
    double gap = 0;
    for (double e : e_grid) gap = std::max(gap, std::abs(smoothed_psi(e, alpha, sm) - huber_psi(e, alpha)));
    return gap;
}

/// Evenly spaced grid on [lo, hi] with `points` entries.
inline std::vector<double> linear_grid(double lo, double hi, int points) {
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) g[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (points - 1);
    return g;
}

/// Coordinates with |beta_j| > tol or w_i < 1 (theta_{p+i} > 0).
inline IndexSet active_set(const JointParam& param, double zero_tolerance = kZeroTolerance) {
    IndexSet s;
    for (Index j = 0; j < param.p(); ++j)
        if (std::abs(param.theta()(j)) > zero_tolerance) s.push_back(j);
    for (Index i = 0; i < param.n(); ++i)
        if (param.weight(i) < 1.0) s.push_back(param.p() + i);
    return s;
}

struct InfluenceResult {
    Eigen::VectorXd values;  // length p + n, exactly zero outside the active set
    IndexSet active;
    double condition_number = 1.0;
    bool pseudo_inverse = false;  // set when M11 was numerically singular
};

/// Average Jacobian of the smoothed data term over the sample, restricted to `active`.
inline Eigen::MatrixXd smoothed_jacobian(const Dataset& data, const JointParam& param,
                                         const RobustificationParam& alpha, const SmoothingParams& sm,
                                         const IndexSet& active) {
    const Index k = static_cast<Index>(active.size()), p = param.p();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
    for (Index i = 0; i < param.n(); ++i) {
        const auto t = detail::observation_terms(data, param, {i, {}, {}});
        Eigen::VectorXd g(k);
        for (Index a = 0; a < k; ++a) g(a) = t.grad(active[a]);
        m.noalias() += smoothed_psi_derivative(t.e, alpha, sm) * g * g.transpose();
        // Bilinear term: d2 e_i / d beta_j d theta_{p+i} = c_i x_ij.
        const double s = smoothed_psi(t.e, alpha, sm) * t.cross;
        if (s == 0.0) continue;
        Index slot = -1;
        for (Index a = 0; a < k; ++a)
            if (active[a] == p + i) slot = a;
        if (slot < 0) continue;
        for (Index a = 0; a < k; ++a) {
            if (active[a] >= p) continue;
            m(a, slot) += s * t.x(active[a]);
            m(slot, a) += s * t.x(active[a]);
        }
    }
    return m / static_cast<double>(param.n());
}

/// Limiting influence function -M11^{-1} (U~_F(z) + p'(theta)) on the active
/// block, zero elsewhere. An empty `active` means the active set of theta.
inline InfluenceResult influence_function(const Dataset& data, const JointParam& param,
                                          const RobustificationParam& alpha, const SmoothingParams& sm,
                                          const Observation& obs, IndexSet active = {}) {
    sm.validate();
    if (active.empty()) active = active_set(param);
    InfluenceResult res;
    res.active = active;
    res.values = Eigen::VectorXd::Zero(param.theta().size());
    if (active.empty()) return res;

    const Eigen::MatrixXd m11 = smoothed_jacobian(data, param, alpha, sm, active);
    const Eigen::VectorXd full = smoothed_data_term(data, param, alpha, sm, obs) + penalty_subgradient(param);
    Eigen::VectorXd rhs(static_cast<Index>(active.size()));
    for (Index a = 0; a < rhs.size(); ++a) rhs(a) = full(active[a]);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m11, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0), smin = sv(sv.size() - 1);
    res.condition_number = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
    Eigen::VectorXd sol;
    if (res.condition_number > 1e12) {
        res.pseudo_inverse = true;
        svd.setThreshold(1e-12);
        sol = -svd.solve(rhs);
    } else {
        sol = -m11.partialPivLu().solve(rhs);
    }
    for (Index a = 0; a < sol.size(); ++a) res.values(active[a]) = sol(a);
    return res;
}

inline InfluenceResult influence_function(const Dataset& data, const FitResult& fit, const SmoothingParams& sm,
                                          const Observation& obs, IndexSet active = {}) {
    const auto& cfg = fit.config_used;
    const JointParam param = JointParam::from_fit(fit.beta, fit.w, cfg.varpi, cfg.mu, cfg.lambda);
    return influence_function(data, param, cfg.alpha, sm, obs, std::move(active));
}

// ---------------------------------------------------------------------------
// Breakdown probe

struct BreakdownPoint {
    double magnitude;
    double beta_norm;
    double max_abs_residual;
};

struct RefitSettings {
    InitOptions init;
    SolverSettings solver;
};

/// Full refit (warm start + alternating solver) on `data` with the given penalties.
inline FitResult refit(const Dataset& data, const PenaltyConfig& penalties, const RefitSettings& settings,
                       std::uint64_t seed) {
    const WarmStart ws = warm_start(data, settings.init, seed);
    PenaltyConfig cfg = penalties;
    cfg.varpi = ws.varpi;
    return fit_pwhl(data, ws.beta0, cfg, settings.solver.inner, ws.w0);
}

inline Dataset replace_row(const Dataset& data, Index row, const Eigen::VectorXd& x, double y) {
    if (row < 0 || row >= data.rows()) throw DomainError("replace_row: row out of range");
    if (x.size() != data.cols()) throw ShapeError("replace_row: covariate length mismatch");
    Eigen::MatrixXd xs = data.x();
    Eigen::VectorXd ys = data.y();
    xs.row(row) = x.transpose();
    ys(row) = y;
    return Dataset(std::move(xs), std::move(ys), data.feature_names());
}

/// For each magnitude tau, row `row` is replaced by x = (tau, 0, ..., 0),
/// y = gamma tau and the estimator is refitted. tau = 0 leaves the data as is.
/// The alpha, mu, lambda and tolerances of `cfg` are used; prior weights are
/// recomputed from each contaminated sample.
inline std::vector<BreakdownPoint> empirical_breakdown(const Dataset& data, const PenaltyConfig& cfg,
                                                       const std::vector<double>& magnitudes, std::uint64_t rng_seed,
                                                       double gamma = 2.0, Index row = 0,
                                                       const RefitSettings& settings = {}) {
    for (std::size_t k = 1; k < magnitudes.size(); ++k)
        if (magnitudes[k] < magnitudes[k - 1]) throw DomainError("empirical_breakdown: magnitudes must be ascending");
    std::vector<BreakdownPoint> curve;
    for (double tau : magnitudes) {
        Dataset probe = data;
        if (tau != 0.0) {
            Eigen::VectorXd x = Eigen::VectorXd::Zero(data.cols());
            x(0) = tau;
            probe = replace_row(data, row, x, gamma * tau);
        }
        const FitResult fit = refit(probe, cfg, settings, rng_seed);
        const Eigen::VectorXd r = probe.y() - probe.x() * fit.beta.values();
        curve.push_back({tau, fit.beta.values().norm(), r.cwiseAbs().maxCoeff()});
    }
    return curve;
}

} // namespace pwhl
