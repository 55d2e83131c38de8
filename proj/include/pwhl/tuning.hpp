#pragma once

// Data-driven choice of the tuning parameters.
//
// mu: random-weighting stability. For B pairs of Exp(1) weight vectors the
//     outlier sets of the two perturbed problems are compared by Cohen's
//     kappa; S(mu) is the average and the minimizer over the grid is taken.
// (alpha, lambda): BIC-type criterion
//     n log(RSS/n) + df (log n + c log(p + n)),
//     RSS = sum (w_i r_i)^2,  df = |supp beta| + #{w_i < 1}.

#include "pwhl/core.hpp"
#include "pwhl/init.hpp"
#include "pwhl/parallel.hpp"
#include "pwhl/rng.hpp"
#include "pwhl/solver.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace pwhl {

namespace detail {

inline std::vector<double> arithmetic_grid(double from, double to, double step) {
    std::vector<double> g;
    const int k = static_cast<int>(std::lround((to - from) / step));
    for (int i = 0; i <= k; ++i) g.push_back(std::round((from + i * step) * 1e10) / 1e10);
    return g;
}

} // namespace detail

struct TuningGrid {
    std::vector<double> mu_grid = detail::arithmetic_grid(0.1, 0.5, 0.1);
    std::vector<double> alpha_grid = detail::arithmetic_grid(0.1, 1.0, 0.1);
    std::vector<double> lambda_grid = detail::arithmetic_grid(0.1, 1.0, 0.1);
    int B = 20;
    double c_bic = 1.01;
    bool hetero = false;

    /// Default grids; the heteroscedastic alpha grid is {0.01, 0.05, 0.1, ..., 0.8}.
    static TuningGrid defaults(bool hetero) {
        TuningGrid g;
        g.hetero = hetero;
        if (hetero) {
            g.alpha_grid = {0.01, 0.05};
            for (double a : detail::arithmetic_grid(0.1, 0.8, 0.1)) g.alpha_grid.push_back(a);
        }
        return g;
    }

    void validate() const {
        auto check = [](const std::vector<double>& g, const char* name) {
            if (g.empty()) throw ConfigError(std::string(name) + " grid is empty");
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (!(g[i] > 0 && std::isfinite(g[i]))) throw ConfigError(std::string(name) + " grid must be positive");
                if (i > 0 && !(g[i] > g[i - 1])) throw ConfigError(std::string(name) + " grid must be ascending");
            }
        };
        check(mu_grid, "mu");
        check(alpha_grid, "alpha");
        check(lambda_grid, "lambda");
        if (B < 1) throw ConfigError("B must be positive");
        if (!(c_bic > 0 && c_bic < 2)) throw ConfigError("c_bic must be in (0, 2)");
    }
};

/// Cohen's kappa between two index sets seen as binary ratings of n items.
inline double cohens_kappa(const IndexSet& a, const IndexSet& b, Index n) {
    if (n < 1) throw DomainError("cohens_kappa: n must be positive");
    std::vector<char> in_a(static_cast<std::size_t>(n), 0), in_b(static_cast<std::size_t>(n), 0);
    for (Index i : a) {
        if (i < 0 || i >= n) throw DomainError("cohens_kappa: index out of range");
        in_a[static_cast<std::size_t>(i)] = 1;
    }
    for (Index i : b) {
        if (i < 0 || i >= n) throw DomainError("cohens_kappa: index out of range");
        in_b[static_cast<std::size_t>(i)] = 1;
    }
    double agree = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < in_a.size(); ++i) {
        agree += in_a[i] == in_b[i];
        na += in_a[i];
        nb += in_b[i];
    }
    const double nn = static_cast<double>(n);
    const double po = agree / nn;
    const double pe = (na * nb + (nn - na) * (nn - nb)) / (nn * nn);
    if (1.0 - pe < 1e-12) return in_a == in_b ? 1.0 : 0.0;
    return (po - pe) / (1.0 - pe);
}

struct PerturbationPair {
    Eigen::VectorXd first;
    Eigen::VectorXd second;
};

/// B pairs of i.i.d. Exp(1) weight vectors (unit mean and variance).
inline std::vector<PerturbationPair> draw_perturbations(Index n, int B, std::uint64_t seed) {
    std::vector<PerturbationPair> pairs;
    pairs.reserve(static_cast<std::size_t>(B));
    std::exponential_distribution<double> exp1(1.0);
    for (int b = 0; b < B; ++b) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(b)}));
        PerturbationPair pr{Eigen::VectorXd(n), Eigen::VectorXd(n)};
        for (Index i = 0; i < n; ++i) pr.first(i) = exp1(rng);
        for (Index i = 0; i < n; ++i) pr.second(i) = exp1(rng);
        pairs.push_back(std::move(pr));
    }
    return pairs;
}

/// Outlier set of the perturbed problem with beta frozen: the weight rule
/// applied to the perturbed residuals omega_i r_i.
inline IndexSet perturbed_outliers(const Eigen::VectorXd& residuals, const Eigen::VectorXd& omega,
                                   const PriorWeights& varpi, double mu, const RobustificationParam& alpha) {
    if (omega.size() != residuals.size()) throw ShapeError("perturbed_outliers: omega length mismatch");
    return update_weights(residuals.cwiseProduct(omega), varpi, mu, alpha).outliers();
}

/// S(mu): mean kappa agreement over the perturbation pairs.
inline double stability_score(const Eigen::VectorXd& residuals, const PriorWeights& varpi,
                              const RobustificationParam& alpha, double mu,
                              const std::vector<PerturbationPair>& pairs) {
    if (pairs.empty()) throw DomainError("stability_score: no perturbation pairs");
    double acc = 0;
    for (const auto& pr : pairs)
        acc += cohens_kappa(perturbed_outliers(residuals, pr.first, varpi, mu, alpha),
                            perturbed_outliers(residuals, pr.second, varpi, mu, alpha), residuals.size());
    return acc / static_cast<double>(pairs.size());
}

struct MuScore {
    double mu;
    double stability;
};

struct MuSelection {
    double mu = 0;
    std::vector<MuScore> table;
};

/// Minimizer of S(mu) over the grid; ties go to the smaller mu.
inline MuSelection select_mu(const Dataset& data, const Coefficients& beta0, const PriorWeights& varpi,
                             const RobustificationParam& alpha, const TuningGrid& grid, std::uint64_t rng_seed) {
    grid.validate();
    if (beta0.size() != data.cols() || varpi.size() != data.rows()) throw ShapeError("select_mu: dimension mismatch");
    const Eigen::VectorXd r = data.y() - data.x() * beta0.values();
    const auto pairs = draw_perturbations(data.rows(), grid.B, rng_seed);
    MuSelection sel;
    double best = std::numeric_limits<double>::infinity();
    for (double mu : grid.mu_grid) {
        const double s = stability_score(r, varpi, alpha, mu, pairs);
        sel.table.push_back({mu, s});
        if (std::isfinite(s) && s < best) {
            best = s;
            sel.mu = mu;
        }
    }
    if (!std::isfinite(best)) throw TuningError("select_mu: stability undefined at every grid point");
    return sel;
}

struct BicScore {
    double score = 0;
    Index df = 0;
    double rss = 0;
    bool degenerate = false;  // RSS == 0: perfect interpolation, never selected
};

inline BicScore bic_score(Index n, Index p, double rss, Index df, double c_bic) {
    BicScore b;
    b.df = df;
    b.rss = rss;
    const double nn = static_cast<double>(n);
    if (rss <= 0.0) {
        b.degenerate = true;
        b.score = -std::numeric_limits<double>::infinity();
        return b;
    }
    b.score = nn * std::log(rss / nn) +
              static_cast<double>(df) * (std::log(nn) + c_bic * std::log(static_cast<double>(p) + nn));
    return b;
}

inline BicScore bic_score(const Dataset& data, const FitResult& fit, double c_bic) {
    if (fit.beta.size() != data.cols() || fit.w.size() != data.rows()) throw ShapeError("bic_score: dimension mismatch");
    const Eigen::VectorXd e = (data.y() - data.x() * fit.beta.values()).cwiseProduct(fit.w.values());
    const Index df = fit.beta.nnz() + static_cast<Index>(fit.outliers.size());
    return bic_score(data.rows(), data.cols(), e.squaredNorm(), df, c_bic);
}

struct GridScore {
    double alpha;
    double lambda;
    BicScore bic;
    bool converged;
    int outer_iterations;
};

struct AlphaLambdaSelection {
    double alpha = 0;
    double lambda = 0;
    FitResult fit;
    std::vector<GridScore> table;  // alpha-major, both ascending
};

struct SolverSettings {
    InnerSolverOptions inner;
    int max_outer_iters = 100;
    int max_inner_iters = 20000;
    double w_tol = 1e-8;
    double beta_tol = 1e-7;

    PenaltyConfig config(double alpha, double mu, double lambda, const PriorWeights& varpi) const {
        PenaltyConfig cfg;
        cfg.alpha = RobustificationParam(alpha);
        cfg.mu = mu;
        cfg.lambda = lambda;
        cfg.varpi = varpi;
        cfg.max_outer_iters = max_outer_iters;
        cfg.max_inner_iters = max_inner_iters;
        cfg.w_tol = w_tol;
        cfg.beta_tol = beta_tol;
        return cfg;
    }
};

/// Fits every (alpha, lambda) on the grid with mu fixed and keeps the BIC
/// minimizer. Ties go to the larger alpha, then the larger lambda. Along each
/// alpha the lambda path is traversed downward with beta warm-started.
inline AlphaLambdaSelection select_alpha_lambda(const Dataset& data, double mu_hat, const TuningGrid& grid,
                                                const WarmStart& warm, const SolverSettings& settings = {},
                                                unsigned threads = 1) {
    grid.validate();
    const std::size_t na = grid.alpha_grid.size(), nl = grid.lambda_grid.size();
    std::vector<FitResult> fits(na * nl);
    std::vector<GridScore> table(na * nl);

    parallel_for(na, threads, [&](std::size_t ia) {
        const double alpha = grid.alpha_grid[ia];
        Coefficients beta = warm.beta0;
        for (std::size_t k = nl; k-- > 0;) {
            const double lambda = grid.lambda_grid[k];
            const PenaltyConfig cfg = settings.config(alpha, mu_hat, lambda, warm.varpi);
            FitResult fit = fit_pwhl(data, beta, cfg, settings.inner, warm.w0);
            beta = fit.beta;
            table[ia * nl + k] = {alpha, lambda, bic_score(data, fit, grid.c_bic), fit.converged, fit.outer_iterations};
            fits[ia * nl + k] = std::move(fit);
        }
    });

    AlphaLambdaSelection sel;
    std::size_t best = fits.size();
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto& g = table[i];
        if (g.bic.degenerate) continue;
        // Grid is ascending in alpha then lambda, so ties resolve to the later entry.
        if (best == fits.size() || g.bic.score <= table[best].bic.score) best = i;
    }
    if (best == fits.size()) throw TuningError("select_alpha_lambda: every grid point is degenerate");
    sel.alpha = table[best].alpha;
    sel.lambda = table[best].lambda;
    sel.fit = std::move(fits[best]);
    sel.table = std::move(table);
    return sel;
}

struct BaselineSelection {
    double alpha = 0;
    double lambda = 0;
    Coefficients beta{Eigen::VectorXd()};
    std::vector<GridScore> table;
};

/// Huber-LASSO with weights frozen at one, tuned by the same BIC over the
/// (alpha, lambda) grid with df = |supp beta|. Same tie rule and warm-started
/// downward lambda path as select_alpha_lambda.
inline BaselineSelection select_huber_lasso(const Dataset& data, const TuningGrid& grid,
                                            const InnerSolverOptions& inner = {}) {
    grid.validate();
    const std::size_t na = grid.alpha_grid.size(), nl = grid.lambda_grid.size();
    const WeightVector ones = WeightVector::ones(data.rows());
    std::vector<Coefficients> fits(na * nl, Coefficients(Eigen::VectorXd()));
    std::vector<GridScore> table(na * nl);
    for (std::size_t ia = 0; ia < na; ++ia) {
        const RobustificationParam alpha(grid.alpha_grid[ia]);
        Coefficients beta = Coefficients::zeros(data.cols());
        for (std::size_t k = nl; k-- > 0;) {
            beta = update_beta(data, ones, beta, alpha, grid.lambda_grid[k], inner);
            const Eigen::VectorXd r = data.y() - data.x() * beta.values();
            table[ia * nl + k] = {alpha.alpha(), grid.lambda_grid[k],
                                  bic_score(data.rows(), data.cols(), r.squaredNorm(), beta.nnz(), grid.c_bic), true, 0};
            fits[ia * nl + k] = beta;
        }
    }
    std::size_t best = fits.size();
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (table[i].bic.degenerate) continue;
        if (best == fits.size() || table[i].bic.score <= table[best].bic.score) best = i;
    }
    if (best == fits.size()) throw TuningError("select_huber_lasso: every grid point is degenerate");
    BaselineSelection sel;
    sel.alpha = table[best].alpha;
    sel.lambda = table[best].lambda;
    sel.beta = std::move(fits[best]);
    sel.table = std::move(table);
    return sel;
}

} // namespace pwhl
