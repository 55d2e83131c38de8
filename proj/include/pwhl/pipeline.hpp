#pragma once

// End-to-end estimation: warm start, tuning of whichever of (alpha, mu,
// lambda) is not fixed, final alternating fit. Also the Monte-Carlo
// replication harness built on top of it.

#include "pwhl/core.hpp"
#include "pwhl/init.hpp"
#include "pwhl/metrics.hpp"
#include "pwhl/parallel.hpp"
#include "pwhl/rng.hpp"
#include "pwhl/simgen.hpp"
#include "pwhl/solver.hpp"
#include "pwhl/tuning.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <numeric>
#include <random>
#include <vector>

namespace pwhl {

/// Alpha presets: 0.1 for outlier detection, 0.01 for robust estimation.
inline constexpr double kDetectAlpha = 0.1;
inline constexpr double kEstimateAlpha = 0.01;

struct PipelineConfig {
    std::optional<double> alpha;   // tuned by BIC when empty
    std::optional<double> mu;      // tuned by kappa stability when empty
    std::optional<double> lambda;  // tuned by BIC when empty
    /// Defaults to TuningGrid::defaults(hetero) for the scenario at hand.
    std::optional<TuningGrid> grid;
    /// Alpha used inside the mu stability step when alpha itself is tuned.
    double mu_selection_alpha = kDetectAlpha;
    InitOptions init;
    SolverSettings solver;
    unsigned threads = 1;

    bool fully_fixed() const { return alpha && mu && lambda; }

    TuningGrid grid_for(bool hetero) const { return grid ? *grid : TuningGrid::defaults(hetero); }

    static PipelineConfig fixed(double alpha, double mu, double lambda) {
        PipelineConfig c;
        c.alpha = alpha;
        c.mu = mu;
        c.lambda = lambda;
        return c;
    }
};

struct PipelineFit {
    WarmStart warm;
    double alpha = 0, mu = 0, lambda = 0;
    std::optional<MuSelection> mu_selection;
    std::vector<GridScore> bic_table;
    FitResult fit;
};

inline PipelineFit fit_pipeline(const Dataset& data, const PipelineConfig& cfg, std::uint64_t seed,
                                bool hetero = false) {
    PipelineFit out;
    const TuningGrid base_grid = cfg.grid_for(hetero);
    out.warm = warm_start(data, cfg.init, derive_seed(seed, {static_cast<std::uint64_t>(Stream::Init)}));

    if (cfg.mu) {
        out.mu = *cfg.mu;
    } else {
        const RobustificationParam a(cfg.alpha ? *cfg.alpha : cfg.mu_selection_alpha);
        out.mu_selection = select_mu(data, out.warm.beta0, out.warm.varpi, a, base_grid,
                                     derive_seed(seed, {static_cast<std::uint64_t>(Stream::Tuning)}));
        out.mu = out.mu_selection->mu;
    }

    if (cfg.alpha && cfg.lambda) {
        out.alpha = *cfg.alpha;
        out.lambda = *cfg.lambda;
        out.fit = fit_pwhl(data, out.warm.beta0, cfg.solver.config(out.alpha, out.mu, out.lambda, out.warm.varpi),
                           cfg.solver.inner, out.warm.w0);
        return out;
    }
    TuningGrid grid = base_grid;
    if (cfg.alpha) grid.alpha_grid = {*cfg.alpha};
    if (cfg.lambda) grid.lambda_grid = {*cfg.lambda};
    AlphaLambdaSelection sel = select_alpha_lambda(data, out.mu, grid, out.warm, cfg.solver, cfg.threads);
    out.alpha = sel.alpha;
    out.lambda = sel.lambda;
    out.bic_table = std::move(sel.table);
    out.fit = std::move(sel.fit);
    return out;
}

// ---------------------------------------------------------------------------
// Replications

struct ReplicationOptions {
    PipelineConfig pipeline;
    bool with_baseline = false;  // Huber-LASSO with weights frozen at one, tuned on its own by BIC
    std::optional<double> holdout_fraction;  // fraction of rows held out for prediction error
};

struct ReplicationRecord {
    std::uint64_t seed = 0;
    Index n = 0;
    IndexSet truth;
    IndexSet detected;
    Coefficients beta_hat{Eigen::VectorXd()};
    Coefficients beta_star{Eigen::VectorXd()};
    double alpha = 0, mu = 0, lambda = 0;
    bool converged = false;
    int outer_iterations = 0;
    ReplicationMetrics metrics;
    std::optional<Coefficients> baseline_beta;
    double baseline_alpha = 0, baseline_lambda = 0;
    std::optional<EstimationError> baseline_error;
    std::optional<double> holdout_mse;  // mean squared prediction error on clean held-out rows
};

namespace detail {

/// Random train/test split; both returned sorted.
inline std::pair<IndexSet, IndexSet> holdout_split(Index n, double fraction, std::uint64_t seed) {
    if (!(fraction > 0 && fraction < 1)) throw ConfigError("holdout fraction must be in (0, 1)");
    IndexSet idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Index{0});
    Rng rng = make_rng(seed, Stream::Holdout);
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto n_test = static_cast<std::size_t>(std::clamp<Index>(
        static_cast<Index>(std::lround(fraction * static_cast<double>(n))), 1, n - 2));
    IndexSet test(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
    IndexSet train(idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
    std::sort(test.begin(), test.end());
    std::sort(train.begin(), train.end());
    return {train, test};
}

} // namespace detail

inline ReplicationRecord run_replication(ContaminationSpec spec, const ReplicationOptions& opts,
                                         std::uint64_t replication_seed) {
    spec.seed = replication_seed;
    const LabeledSample sample = generate(spec);

    Dataset data = sample.data;
    IndexSet truth = sample.truth_outliers;
    std::optional<Dataset> test;
    if (opts.holdout_fraction) {
        auto [train_rows, held] = detail::holdout_split(data.rows(), *opts.holdout_fraction, replication_seed);
        IndexSet train_truth;
        for (Index k = 0; k < static_cast<Index>(train_rows.size()); ++k)
            if (std::binary_search(truth.begin(), truth.end(), train_rows[k])) train_truth.push_back(k);
        IndexSet clean_test;
        for (Index i : held)
            if (!std::binary_search(truth.begin(), truth.end(), i)) clean_test.push_back(i);
        if (!clean_test.empty()) test = data.subset_rows(clean_test);
        data = data.subset_rows(train_rows);
        truth = std::move(train_truth);
    }

    const PipelineConfig& pcfg = opts.pipeline;
    const PipelineFit pf = fit_pipeline(data, pcfg, replication_seed, spec.hetero);

    ReplicationRecord rec;
    rec.seed = replication_seed;
    rec.n = data.rows();
    rec.truth = truth;
    rec.detected = pf.fit.outliers;
    rec.beta_hat = pf.fit.beta;
    rec.beta_star = sample.beta_star;
    rec.alpha = pf.alpha;
    rec.mu = pf.mu;
    rec.lambda = pf.lambda;
    rec.converged = pf.fit.converged;
    rec.outer_iterations = pf.fit.outer_iterations;
    rec.metrics = replication_metrics(rec.detected, rec.truth, rec.n, rec.beta_hat, rec.beta_star);
    if (opts.with_baseline) {
        const BaselineSelection base = select_huber_lasso(data, pcfg.grid_for(spec.hetero), pcfg.solver.inner);
        rec.baseline_beta = base.beta;
        rec.baseline_alpha = base.alpha;
        rec.baseline_lambda = base.lambda;
        rec.baseline_error = estimation_error(*rec.baseline_beta, rec.beta_star);
    }
    if (test) {
        const Eigen::VectorXd r = test->y() - test->x() * rec.beta_hat.values();
        rec.holdout_mse = r.squaredNorm() / static_cast<double>(r.size());
    }
    return rec;
}

struct SimulationResult {
    std::vector<ReplicationRecord> records;
    MetricsReport report;
};

/// Replication seeds are derived from `seed` and the replication index, so a
/// run is reproducible regardless of the thread count.
inline SimulationResult run_simulation(const ContaminationSpec& spec, const ReplicationOptions& opts, int reps,
                                       std::uint64_t seed, unsigned threads = 1) {
    if (reps < 1) throw ConfigError("number of replications must be positive");
    spec.validate();
    SimulationResult out;
    out.records.resize(static_cast<std::size_t>(reps));
    ReplicationOptions per_rep = opts;
    per_rep.pipeline.threads = 1;
    parallel_for(static_cast<std::size_t>(reps), threads, [&](std::size_t r) {
        out.records[r] = run_replication(spec, per_rep, derive_seed(seed, {static_cast<std::uint64_t>(r)}));
    });
    std::vector<ReplicationMetrics> m;
    m.reserve(out.records.size());
    for (const auto& rec : out.records) m.push_back(rec.metrics);
    out.report = aggregate(m);
    return out;
}

} // namespace pwhl
