#pragma once

// Warm starts: a sparse least-trimmed-squares fit by concentration steps,
// residual-based initial weights, and prior weights varpi_i = 1/|log w0_i|.

#include "pwhl/core.hpp"
#include "pwhl/rng.hpp"
#include "pwhl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace pwhl {

struct SparseLtsOptions {
    double trim_fraction = 0.75;
    double lambda0 = 0.5;
    int n_starts = 20;
    int max_csteps = 20;
    int subset_size = 3;  // elemental start size
    /// Rows whose mean squared robust z-score exceeds this multiple of the
    /// median row are kept out of the trimmed subsets; 0 disables the screen.
    double leverage_cutoff = 3.0;
    /// Replace the winning coefficients by least squares on their support over
    /// the final h-subset (removes the L1 shrinkage). Skipped when the support
    /// is empty or not smaller than h.
    bool refit_support = false;
    InnerSolverOptions inner{.beta_tol = 1e-6, .max_iters = 5000};

    void validate() const {
        detail::require(trim_fraction > 0.5 && trim_fraction <= 1.0, "trim_fraction must be in (0.5, 1]");
        detail::require(lambda0 > 0 && std::isfinite(lambda0), "lambda0 must be positive");
        detail::require(n_starts > 0 && max_csteps > 0 && subset_size > 0, "counts must be positive");
        detail::require(leverage_cutoff == 0.0 || leverage_cutoff > 1.0, "leverage_cutoff must be 0 or > 1");
        inner.validate();
    }
};

struct SparseLtsResult {
    Coefficients beta{Eigen::VectorXd()};
    IndexSet subset;                  // final h-subset, sorted
    double objective = 0.0;           // trimmed penalized objective of beta
    std::vector<double> cstep_trace;  // trimmed objective after each fit of the winning start
    int best_start = -1;
};

/// Loss used by the sparse LTS fits: quadratic for any residual below 1e6.
inline const RobustificationParam kQuadraticSurrogate{1e-6};

namespace detail {

inline Index trimmed_size(Index n, double trim_fraction) {
    return std::max<Index>(2, static_cast<Index>(std::ceil(trim_fraction * static_cast<double>(n) - 1e-12)));
}

inline double median(std::vector<double> v) {
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2 == 1) return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

/// k distinct entries of `pool`, sorted.
inline IndexSet random_subset(IndexSet pool, Index k, Rng& rng) {
    const auto n = static_cast<Index>(pool.size());
    for (Index i = 0; i < k; ++i) {
        std::uniform_int_distribution<Index> pick(i, n - 1);
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
    }
    pool.resize(static_cast<std::size_t>(k));
    std::sort(pool.begin(), pool.end());
    return pool;
}

/// Entries of `rows` with the h smallest |r_i|; ties broken by index. Returned sorted.
inline IndexSet smallest_abs(const Eigen::VectorXd& r, const IndexSet& rows, Index h) {
    IndexSet idx = rows;
    std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return std::abs(r(a)) < std::abs(r(b)); });
    idx.resize(static_cast<std::size_t>(h));
    std::sort(idx.begin(), idx.end());
    return idx;
}

} // namespace detail

/// Row outlyingness in the covariates: mean over columns of the squared
/// median/MAD z-scores. Columns with zero spread are skipped.
inline Eigen::VectorXd row_outlyingness(const Eigen::MatrixXd& x) {
    Eigen::VectorXd score = Eigen::VectorXd::Zero(x.rows());
    Index used = 0;
    std::vector<double> col(static_cast<std::size_t>(x.rows()));
    for (Index j = 0; j < x.cols(); ++j) {
        for (Index i = 0; i < x.rows(); ++i) col[static_cast<std::size_t>(i)] = x(i, j);
        const double med = detail::median(col);
        for (auto& v : col) v = std::abs(v - med);
        double s = 1.4826 * detail::median(col);
        if (s == 0.0) s = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(col.size());
        if (s == 0.0) continue;
        ++used;
        for (Index i = 0; i < x.rows(); ++i) score(i) += ((x(i, j) - med) / s) * ((x(i, j) - med) / s);
    }
    if (used > 0) score /= static_cast<double>(used);
    return score;
}

/// Rows not flagged as high-leverage: outlyingness at most cutoff times the
/// median outlyingness. Everything when cutoff is 0 or fewer than `min_rows` survive.
inline IndexSet low_leverage_rows(const Eigen::MatrixXd& x, double cutoff, Index min_rows) {
    IndexSet all(static_cast<std::size_t>(x.rows()));
    std::iota(all.begin(), all.end(), Index{0});
    if (cutoff == 0.0) return all;
    const Eigen::VectorXd score = row_outlyingness(x);
    const double med = detail::median(std::vector<double>(score.data(), score.data() + score.size()));
    IndexSet keep;
    for (Index i : all)
        if (score(i) <= cutoff * med) keep.push_back(i);
    return static_cast<Index>(keep.size()) >= min_rows ? keep : all;
}

/// (1/h) * sum of the h smallest squared residuals + lambda0 |beta|_1.
inline double trimmed_objective(const Dataset& data, const Eigen::VectorXd& beta, Index h, double lambda0) {
    Eigen::VectorXd r2 = (data.y() - data.x() * beta).array().square().matrix();
    std::sort(r2.data(), r2.data() + r2.size());
    return r2.head(h).sum() / static_cast<double>(h) + lambda0 * beta.lpNorm<1>();
}

namespace detail {

inline Coefficients refit_on_support(const Dataset& data, const Coefficients& beta, const IndexSet& rows) {
    const IndexSet support = beta.support();
    if (support.empty() || support.size() >= rows.size()) return beta;
    Eigen::MatrixXd xs(static_cast<Index>(rows.size()), static_cast<Index>(support.size()));
    Eigen::VectorXd ys(static_cast<Index>(rows.size()));
    for (std::size_t a = 0; a < rows.size(); ++a) {
        ys(static_cast<Index>(a)) = data.y()(rows[a]);
        for (std::size_t b = 0; b < support.size(); ++b)
            xs(static_cast<Index>(a), static_cast<Index>(b)) = data.x()(rows[a], support[b]);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xs);
    if (qr.rank() < xs.cols()) return beta;
    const Eigen::VectorXd coef = qr.solve(ys);
    if (!coef.allFinite()) return beta;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(data.cols());
    for (std::size_t b = 0; b < support.size(); ++b) out(support[b]) = coef(static_cast<Index>(b));
    return Coefficients(std::move(out));
}

} // namespace detail

/// Trimmed objective restricted to the candidate rows.
inline double trimmed_objective(const Dataset& data, const Eigen::VectorXd& beta, const IndexSet& rows, Index h,
                                double lambda0) {
    const Eigen::VectorXd r = data.y() - data.x() * beta;
    std::vector<double> r2;
    r2.reserve(rows.size());
    for (Index i : rows) r2.push_back(r(i) * r(i));
    std::sort(r2.begin(), r2.end());
    double acc = 0;
    for (Index k = 0; k < h; ++k) acc += r2[static_cast<std::size_t>(k)];
    return acc / static_cast<double>(h) + lambda0 * beta.lpNorm<1>();
}

inline SparseLtsResult sparse_lts(const Dataset& data, const SparseLtsOptions& opts, std::uint64_t seed) {
    opts.validate();
    const Index n = data.rows();
    // Without trimming every row takes part.
    const double cutoff = opts.trim_fraction == 1.0 ? 0.0 : opts.leverage_cutoff;
    const IndexSet eligible = low_leverage_rows(data.x(), cutoff, n / 2 + 1);
    const Index h = std::min({n, detail::trimmed_size(n, opts.trim_fraction), static_cast<Index>(eligible.size())});
    const Index k0 = std::min<Index>(opts.subset_size, static_cast<Index>(eligible.size()));

    SparseLtsResult best;
    best.objective = std::numeric_limits<double>::infinity();
    int failures = 0;
    int start = 0;
    for (int attempt = 0; start < opts.n_starts; ++attempt) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(attempt)}));
        IndexSet subset = detail::random_subset(eligible, k0, rng);
        const Dataset elemental = data.subset_rows(subset);
        if (elemental.x().cwiseAbs().maxCoeff() == 0.0) {
            if (++failures >= opts.n_starts) throw DomainError("sparse_lts: every elemental subset is degenerate");
            continue;
        }
        Coefficients beta = update_beta(elemental, WeightVector::ones(k0), Coefficients::zeros(data.cols()),
                                        kQuadraticSurrogate, opts.lambda0, opts.inner);
        std::vector<double> trace{trimmed_objective(data, beta.values(), eligible, h, opts.lambda0)};
        IndexSet current = detail::smallest_abs(data.y() - data.x() * beta.values(), eligible, h);
        for (int step = 0; step < opts.max_csteps; ++step) {
            const Dataset active = data.subset_rows(current);
            beta = update_beta(active, WeightVector::ones(h), beta, kQuadraticSurrogate, opts.lambda0, opts.inner);
            trace.push_back(trimmed_objective(data, beta.values(), eligible, h, opts.lambda0));
            IndexSet next = detail::smallest_abs(data.y() - data.x() * beta.values(), eligible, h);
            if (next == current) break;
            current = std::move(next);
        }
        if (trace.back() < best.objective) {
            best.objective = trace.back();
            best.beta = beta;
            best.subset = current;
            best.cstep_trace = std::move(trace);
            best.best_start = start;
        }
        ++start;
    }
    if (opts.refit_support) best.beta = detail::refit_on_support(data, best.beta, best.subset);
    return best;
}

/// Sparse LTS warm start for beta.
inline Coefficients sparse_lts_init(const Dataset& data, double trim_fraction, double lambda0, int n_starts,
                                    std::uint64_t rng_seed) {
    SparseLtsOptions opts;
    opts.trim_fraction = trim_fraction;
    opts.lambda0 = lambda0;
    opts.n_starts = n_starts;
    return sparse_lts(data, opts, rng_seed).beta;
}

/// Robust residual scale: 1.4826 * MAD, falling back to the mean absolute deviation.
inline double residual_scale(const Eigen::VectorXd& r) {
    std::vector<double> v(r.data(), r.data() + r.size());
    const double med = detail::median(v);
    for (auto& x : v) x = std::abs(x - med);
    double s = 1.4826 * detail::median(v);
    if (s == 0.0) s = (r.array() - r.mean()).abs().mean();
    return s;
}

/// Initial weights from warm-start residuals: observations beyond 2.5 robust
/// scales are down-weighted proportionally; everything is clamped into
/// [clamp_eps, 1 - clamp_eps] so that the prior weights stay finite.
inline WeightVector initial_weights(const Eigen::VectorXd& residuals0, double clamp_eps = 0.01) {
    if (residuals0.size() == 0) throw DomainError("initial_weights: empty residual vector");
    detail::require(clamp_eps > 0 && clamp_eps < 0.5, "clamp_eps must be in (0, 0.5)");
    if (!residuals0.allFinite()) throw NumericError("initial_weights: non-finite residual");

    const double hi = 1.0 - clamp_eps;
    const double s = residual_scale(residuals0);
    Eigen::VectorXd w = Eigen::VectorXd::Constant(residuals0.size(), hi);
    if (s == 0.0) return WeightVector(std::move(w));
    for (Index i = 0; i < w.size(); ++i) {
        const double a = std::abs(residuals0(i));
        if (a > 2.5 * s) w(i) = std::clamp(2.5 * s / a, clamp_eps, hi);
    }
    return WeightVector(std::move(w));
}

/// varpi_i = min(cap, 1/|log w0_i|)
inline PriorWeights prior_weights(const WeightVector& w0, double varpi_cap = 100.0) {
    detail::require(varpi_cap > 0 && std::isfinite(varpi_cap), "varpi_cap must be positive");
    Eigen::VectorXd v(w0.size());
    for (Index i = 0; i < w0.size(); ++i) {
        if (!(w0[i] < 1.0)) throw DomainError("prior_weights: initial weight equal to 1 at index " + std::to_string(i));
        v(i) = std::min(varpi_cap, 1.0 / std::abs(std::log(w0[i])));
    }
    return PriorWeights(std::move(v));
}

struct InitOptions {
    SparseLtsOptions lts;
    double clamp_eps = 0.01;
    double varpi_cap = 100.0;
};

/// Everything the alternating solver needs to start from.
struct WarmStart {
    Coefficients beta0{Eigen::VectorXd()};
    WeightVector w0{Eigen::VectorXd()};
    PriorWeights varpi{Eigen::VectorXd()};
};

inline WarmStart warm_start(const Dataset& data, const InitOptions& opts, std::uint64_t seed) {
    WarmStart ws;
    ws.beta0 = sparse_lts(data, opts.lts, seed).beta;
    ws.w0 = initial_weights(data.y() - data.x() * ws.beta0.values(), opts.clamp_eps);
    ws.varpi = prior_weights(ws.w0, opts.varpi_cap);
    return ws;
}

} // namespace pwhl
