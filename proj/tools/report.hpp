#pragma once

// JSON conversions shared by the CLI commands.

#include "pwhl/pwhl.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace pwhl::cli {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

inline Eigen::VectorXd to_eigen(const json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
}

inline std::vector<long> one_based(const IndexSet& s) {
    std::vector<long> out;
    out.reserve(s.size());
    for (Index i : s) out.push_back(static_cast<long>(i) + 1);
    return out;
}

inline json grid_json(const TuningGrid& g) {
    return {{"mu", g.mu_grid}, {"alpha", g.alpha_grid}, {"lambda", g.lambda_grid},
            {"B", g.B},        {"c_bic", g.c_bic},      {"hetero", g.hetero}};
}

inline json solver_json(const SolverSettings& s) {
    return {{"max_outer_iters", s.max_outer_iters}, {"max_inner_iters", s.max_inner_iters},
            {"w_tol", s.w_tol},                     {"beta_tol", s.beta_tol},
            {"step_init", s.inner.step_init},       {"backtrack_factor", s.inner.backtrack_factor},
            {"max_backtracks", s.inner.max_backtracks}};
}

inline json init_json(const InitOptions& o) {
    return {{"trim_fraction", o.lts.trim_fraction}, {"lambda0", o.lts.lambda0},
            {"n_starts", o.lts.n_starts},           {"max_csteps", o.lts.max_csteps},
            {"subset_size", o.lts.subset_size},     {"leverage_cutoff", o.lts.leverage_cutoff},
            {"refit_support", o.lts.refit_support}, {"clamp_eps", o.clamp_eps},
            {"varpi_cap", o.varpi_cap}};
}

inline json mu_table_json(const MuSelection& sel) {
    json t = json::array();
    for (const auto& s : sel.table) t.push_back({{"mu", s.mu}, {"stability", s.stability}});
    return t;
}

inline json bic_table_json(const std::vector<GridScore>& table) {
    json t = json::array();
    for (const auto& g : table)
        t.push_back({{"alpha", g.alpha},
                     {"lambda", g.lambda},
                     {"bic", g.bic.degenerate ? json(nullptr) : json(g.bic.score)},
                     {"df", g.bic.df},
                     {"rss", g.bic.rss},
                     {"converged", g.converged},
                     {"outer_iterations", g.outer_iterations}});
    return t;
}

inline json metrics_json(const MetricsReport& r) {
    return {{"M", r.M},     {"S", r.S},     {"JD", r.JD}, {"EE", r.EE}, {"EE_non", r.EE_non},
            {"FZR", r.FZR}, {"FPR", r.FPR}, {"SR", r.SR}, {"CR", r.CR}, {"n_replications", r.n_replications}};
}

inline json replication_json(const ReplicationRecord& rec) {
    json j = {{"seed", rec.seed},
              {"alpha", rec.alpha},
              {"mu", rec.mu},
              {"lambda", rec.lambda},
              {"converged", rec.converged},
              {"outer_iterations", rec.outer_iterations},
              {"detected", one_based(rec.detected)},
              {"support", one_based(rec.beta_hat.support())},
              {"M", rec.metrics.outliers.masking},
              {"S", rec.metrics.outliers.swamping},
              {"JD", rec.metrics.outliers.joint_detection},
              {"EE", rec.metrics.error.ee},
              {"EE_non", rec.metrics.error.ee_non},
              {"FZR", rec.metrics.selection.fzr},
              {"FPR", rec.metrics.selection.fpr},
              {"SR", rec.metrics.selection.correct_selection},
              {"CR", rec.metrics.selection.correct_coverage}};
    if (rec.baseline_error)
        j["baseline"] = {{"alpha", rec.baseline_alpha},
                         {"lambda", rec.baseline_lambda},
                         {"EE", rec.baseline_error->ee},
                         {"EE_non", rec.baseline_error->ee_non}};
    if (rec.holdout_mse) j["holdout_mse"] = *rec.holdout_mse;
    return j;
}

inline json scenario_json(const ContaminationSpec& s) {
    return {{"case", to_string(s.contamination)},
            {"c", s.c},
            {"kappa", s.kappa},
            {"noise", to_string(s.noise)},
            {"hetero", s.hetero},
            {"n", s.n},
            {"p", s.p},
            {"both_uses_shifted_covariates", s.both_uses_shifted_covariates}};
}

} // namespace pwhl::cli
