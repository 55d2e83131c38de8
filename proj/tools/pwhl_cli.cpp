// pwhl: fit, simulate, diagnose and generate from the command line.
//
// Exit codes: 0 success, 2 input error, 3 numeric or solver error, 4 config error.

#include "report.hpp"

#include "pwhl/io.hpp"
#include "pwhl/pwhl.hpp"
#include "pwhl/screening.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace pwhl::cli {
namespace {

enum ExitCode { kOk = 0, kInput = 2, kNumeric = 3, kConfig = 4 };

unsigned default_threads() {
    if (const char* env = std::getenv("PWHL_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) throw ConfigError("PWHL_THREADS must be a positive integer");
        return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    return out;
}

void write_json(const std::string& path, const json& j) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    open_out(path) << j.dump(2) << '\n';
}

std::vector<double> parse_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw ConfigError(std::string("invalid number '") + item + "' in " + what);
        }
    }
    if (out.empty()) throw ConfigError(std::string(what) + " list is empty");
    return out;
}

ContaminationCase parse_case(const std::string& s) {
    if (s == "none" || s == "0") return ContaminationCase::None;
    if (s == "response" || s == "1") return ContaminationCase::Response;
    if (s == "covariate" || s == "2") return ContaminationCase::Covariate;
    if (s == "both" || s == "3") return ContaminationCase::Both;
    throw ConfigError("unknown case '" + s + "' (none|response|covariate|both or 0-3)");
}

NoiseFamily parse_noise(const std::string& s) {
    if (s == "normal") return NoiseFamily::Normal;
    if (s == "t3") return NoiseFamily::StudentT3;
    throw ConfigError("unknown noise '" + s + "' (normal|t3)");
}

// ---------------------------------------------------------------------------
// Scenario options shared by simulate and generate

struct ScenarioArgs {
    std::string file;
    std::optional<std::string> contamination, noise;
    std::optional<double> c, kappa;
    std::optional<bool> hetero, shifted;
    std::optional<long> n, p;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--scenario", file, "JSON scenario file; inline flags override its fields");
        cmd->add_option("--case", contamination, "none|response|covariate|both (or 0-3)");
        cmd->add_option("--c", c, "contamination fraction in [0, 0.5)");
        cmd->add_option("--kappa", kappa, "contamination magnitude");
        cmd->add_option("--noise", noise, "normal|t3");
        cmd->add_option("--hetero", hetero, "heteroscedastic noise (true/false)");
        cmd->add_option("--n", n, "observations");
        cmd->add_option("--p", p, "covariates");
        cmd->add_option("--shifted-response", shifted,
                        "combined case: compute the response shift from the shifted covariates");
    }

    ContaminationSpec build() const {
        ContaminationSpec s;
        if (!file.empty()) {
            std::ifstream in(file);
            if (!in) throw InputError("cannot open " + file);
            json j;
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw ConfigError("scenario file: " + std::string(e.what()));
            }
            try {
                if (j.contains("case")) s.contamination = parse_case(j["case"].is_number()
                                                                        ? std::to_string(j["case"].get<int>())
                                                                        : j["case"].get<std::string>());
                if (j.contains("c")) s.c = j["c"].get<double>();
                if (j.contains("kappa")) s.kappa = j["kappa"].get<double>();
                if (j.contains("noise")) s.noise = parse_noise(j["noise"].get<std::string>());
                if (j.contains("hetero")) s.hetero = j["hetero"].get<bool>();
                if (j.contains("n")) s.n = j["n"].get<long>();
                if (j.contains("p")) s.p = j["p"].get<long>();
                if (j.contains("both_uses_shifted_covariates"))
                    s.both_uses_shifted_covariates = j["both_uses_shifted_covariates"].get<bool>();
            } catch (const json::exception& e) {
                throw ConfigError("scenario file: " + std::string(e.what()));
            }
        }
        if (contamination) s.contamination = parse_case(*contamination);
        if (c) s.c = *c;
        if (kappa) s.kappa = *kappa;
        if (noise) s.noise = parse_noise(*noise);
        if (hetero) s.hetero = *hetero;
        if (n) s.n = *n;
        if (p) s.p = *p;
        if (shifted) s.both_uses_shifted_covariates = *shifted;
        s.validate();
        return s;
    }
};

// ---------------------------------------------------------------------------
// fit

struct FitArgs {
    std::string data, response = "y", screen = "none", preset = "detect", out, scores;
    std::optional<double> alpha, mu, lambda;
    bool tune = false;
    std::uint64_t seed = 1;
};

int run_fit(const FitArgs& a, unsigned threads) {
    const auto t0 = std::chrono::steady_clock::now();
    const Dataset full = read_dataset(a.data, a.response);

    IndexSet columns(static_cast<std::size_t>(full.cols()));
    std::iota(columns.begin(), columns.end(), Index{0});
    if (a.screen != "none") {
        long keep = 0;
        try {
            std::size_t used = 0;
            keep = std::stol(a.screen, &used);
            if (used != a.screen.size()) throw std::invalid_argument(a.screen);
        } catch (const std::logic_error&) {
            throw ConfigError("--screen expects a positive integer or 'none'");
        }
        if (keep < 1 || keep > full.cols())
            throw ConfigError("--screen must be in [1, " + std::to_string(full.cols()) + "]");
        columns = sis_screen(full, keep);
    }
    const Dataset data = a.screen == "none" ? full : full.subset_cols(columns);

    PipelineConfig cfg;
    cfg.threads = threads;
    if (a.preset == "detect")
        cfg.alpha = kDetectAlpha;
    else if (a.preset == "estimate")
        cfg.alpha = kEstimateAlpha;
    else if (a.preset != "custom")
        throw ConfigError("--preset must be detect, estimate or custom");
    if (a.tune) cfg.alpha.reset();
    if (a.alpha) cfg.alpha = *a.alpha;
    if (a.mu) cfg.mu = *a.mu;
    if (a.lambda) cfg.lambda = *a.lambda;
    for (auto v : {cfg.alpha, cfg.mu, cfg.lambda})
        if (v && !(*v > 0 && std::isfinite(*v))) throw ConfigError("alpha, mu and lambda must be positive");

    const PipelineFit pf = fit_pipeline(data, cfg, a.seed);
    const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const auto& names = data.feature_names();
    json selected = json::array();
    for (Index j : pf.fit.beta.support())
        selected.push_back({{"name", names[static_cast<std::size_t>(j)]},
                            {"column", columns[static_cast<std::size_t>(j)] + 1},
                            {"coefficient", pf.fit.beta[j]}});
    json outliers = json::array();
    for (Index i : pf.fit.outliers) outliers.push_back({{"index", i + 1}, {"weight", pf.fit.w[i]}});

    json cols = json::array();
    for (Index c : columns) cols.push_back(c + 1);
    json report = {
        {"schema_version", kSchemaVersion},
        {"command", "fit"},
        {"seed", a.seed},
        {"data",
         {{"path", a.data}, {"response", a.response}, {"rows", full.rows()}, {"cols", full.cols()},
          {"hash", hex64(content_hash(full))}}},
        {"screening", {{"keep", a.screen}, {"columns", cols}}},
        {"config",
         {{"preset", a.preset},
          {"alpha", pf.alpha},
          {"mu", pf.mu},
          {"lambda", pf.lambda},
          {"tuned", {{"alpha", !cfg.alpha}, {"mu", !cfg.mu}, {"lambda", !cfg.lambda}}},
          {"grids", grid_json(cfg.grid_for(false))},
          {"solver", solver_json(cfg.solver)},
          {"init", init_json(cfg.init)}}},
        {"selected", selected},
        {"outliers", outliers},
        {"converged", pf.fit.converged},
        {"outer_iterations", pf.fit.outer_iterations},
        {"objective_trace", pf.fit.objective_trace},
        {"fit", {{"beta", to_std(pf.fit.beta.values())}, {"w", to_std(pf.fit.w.values())},
                 {"varpi", to_std(pf.warm.varpi.values())}}},
        {"timing_seconds", secs}};
    json tuning = json::object();
    if (pf.mu_selection) tuning["mu"] = mu_table_json(*pf.mu_selection);
    if (!pf.bic_table.empty()) tuning["alpha_lambda"] = bic_table_json(pf.bic_table);
    if (!tuning.empty()) report["tuning"] = tuning;
    write_json(a.out, report);

    if (!a.scores.empty()) {
        auto out = open_out(a.scores);
        out << "parameter,mu,alpha,lambda,score,df,rss\n" << std::setprecision(12);
        if (pf.mu_selection)
            for (const auto& s : pf.mu_selection->table) out << "mu," << s.mu << ",,," << s.stability << ",,\n";
        for (const auto& g : pf.bic_table) {
            out << "alpha_lambda,," << g.alpha << ',' << g.lambda << ',';
            if (!g.bic.degenerate) out << g.bic.score;
            out << ',' << g.bic.df << ',' << g.bic.rss << '\n';
        }
    }
    if (!pf.fit.converged)
        std::cerr << "warning: alternating solver stopped after " << pf.fit.outer_iterations
                  << " outer iterations without meeting w_tol\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
    ScenarioArgs scenario;
    int reps = 20;
    std::uint64_t seed = 1;
    std::string fixed;
    bool tune_each = false, baseline = false;
    std::optional<double> holdout;
    std::string out = "simulation";
};

PipelineConfig parse_fixed(const std::string& spec) {
    // Defaults of the fast mode; any of them can be overridden as key=value.
    double alpha = kDetectAlpha, mu = 0.1, lambda = 0.5;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("--fixed-params expects key=value pairs");
        const std::string key = item.substr(0, eq);
        const double v = parse_list(item.substr(eq + 1), "--fixed-params").front();
        if (!(v > 0)) throw ConfigError("--fixed-params values must be positive");
        if (key == "alpha")
            alpha = v;
        else if (key == "mu")
            mu = v;
        else if (key == "lambda")
            lambda = v;
        else
            throw ConfigError("--fixed-params: unknown key '" + key + "'");
    }
    return PipelineConfig::fixed(alpha, mu, lambda);
}

int run_simulate(const SimulateArgs& a, bool fixed_given, unsigned threads) {
    const ContaminationSpec spec = a.scenario.build();
    if (a.reps < 1) throw ConfigError("--reps must be positive");
    if (fixed_given && a.tune_each) throw ConfigError("--fixed-params and --tune-each are exclusive");
    ReplicationOptions opts;
    if (fixed_given) opts.pipeline = parse_fixed(a.fixed);
    opts.with_baseline = a.baseline;
    opts.holdout_fraction = a.holdout;

    const SimulationResult res = run_simulation(spec, opts, a.reps, a.seed, threads);
    const MetricsReport& r = res.report;

    double base_ee = 0, base_ee_non = 0, mse = 0;
    for (const auto& rec : res.records) {
        if (rec.baseline_error) {
            base_ee += rec.baseline_error->ee / a.reps;
            base_ee_non += rec.baseline_error->ee_non / a.reps;
        }
        if (rec.holdout_mse) mse += *rec.holdout_mse / a.reps;
    }

    {
        auto out = open_out(a.out + ".csv");
        out << "case,c,kappa,noise,hetero,n,p,reps,M,S,JD,EE,EE_non,FZR,FPR,SR,CR";
        if (a.baseline) out << ",baseline_EE,baseline_EE_non";
        if (a.holdout) out << ",holdout_mse";
        out << '\n' << std::setprecision(10);
        out << to_string(spec.contamination) << ',' << spec.c << ',' << spec.kappa << ',' << to_string(spec.noise)
            << ',' << (spec.hetero ? 1 : 0) << ',' << spec.n << ',' << spec.p << ',' << a.reps << ',' << r.M << ','
            << r.S << ',' << r.JD << ',' << r.EE << ',' << r.EE_non << ',' << r.FZR << ',' << r.FPR << ',' << r.SR
            << ',' << r.CR;
        if (a.baseline) out << ',' << base_ee << ',' << base_ee_non;
        if (a.holdout) out << ',' << mse;
        out << '\n';
    }

    json reps = json::array();
    for (const auto& rec : res.records) reps.push_back(replication_json(rec));
    json report = {{"schema_version", kSchemaVersion},
                   {"command", "simulate"},
                   {"seed", a.seed},
                   {"scenario", scenario_json(spec)},
                   {"mode", fixed_given ? "fixed" : "tuned"},
                   {"metrics", metrics_json(r)},
                   {"replications", reps}};
    if (fixed_given) {
        const auto& p = opts.pipeline;
        report["fixed"] = {{"alpha", *p.alpha}, {"mu", *p.mu}, {"lambda", *p.lambda}};
    } else {
        report["grids"] = grid_json(opts.pipeline.grid_for(spec.hetero));
    }
    if (a.baseline) report["baseline"] = {{"EE", base_ee}, {"EE_non", base_ee_non}};
    if (a.holdout) report["holdout"] = {{"fraction", *a.holdout}, {"mse", mse}};
    write_json(a.out + ".json", report);
    return kOk;
}

// ---------------------------------------------------------------------------
// diagnose

struct DiagnoseArgs {
    std::string fit, data, out = "diagnose";
    bool influence = false, smoothing_gap = false;
    std::string breakdown;
    std::string h_list = "0.5,0.1,0.02";
    std::optional<double> bandwidth;
    std::optional<double> gap_range;  // half-width of the residual grid, default 3/alpha
    int gap_points = 601;
};

struct LoadedFit {
    Dataset data;
    FitResult fit;
    std::uint64_t seed;
};

LoadedFit load_fit(const DiagnoseArgs& a) {
    std::ifstream in(a.fit);
    if (!in) throw InputError("cannot open " + a.fit);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("fit report: " + std::string(e.what()));
    }
    try {
        if (j.at("schema_version").get<int>() != kSchemaVersion) throw InputError("fit report: unsupported schema_version");
        const Dataset full = read_dataset(a.data, j.at("data").at("response").get<std::string>());
        if (hex64(content_hash(full)) != j.at("data").at("hash").get<std::string>())
            throw InputError("data does not match the fit report (content hash differs)");
        IndexSet cols;
        for (long c : j.at("screening").at("columns").get<std::vector<long>>()) {
            if (c < 1 || c > full.cols()) throw InputError("fit report: screened column out of range");
            cols.push_back(c - 1);
        }
        const Dataset data = static_cast<Index>(cols.size()) == full.cols() ? full : full.subset_cols(cols);
        const auto& f = j.at("fit");
        FitResult fit;
        fit.beta = Coefficients(to_eigen(f.at("beta")));
        fit.w = WeightVector(to_eigen(f.at("w")));
        if (fit.beta.size() != data.cols() || fit.w.size() != data.rows())
            throw InputError("fit report dimensions do not match the data");
        const auto& c = j.at("config");
        fit.config_used.alpha = RobustificationParam(c.at("alpha").get<double>());
        fit.config_used.mu = c.at("mu").get<double>();
        fit.config_used.lambda = c.at("lambda").get<double>();
        fit.config_used.varpi = PriorWeights(to_eigen(f.at("varpi")));
        if (fit.config_used.varpi.size() != data.rows()) throw InputError("fit report: prior weight length mismatch");
        for (Index i = 0; i < fit.w.size(); ++i)
            if (fit.w[i] < 1.0) fit.outliers.push_back(i);
        return {data, std::move(fit), j.at("seed").get<std::uint64_t>()};
    } catch (const json::exception& e) {
        throw InputError("fit report: " + std::string(e.what()));
    }
}

int run_diagnose(const DiagnoseArgs& a) {
    if (!a.influence && !a.smoothing_gap && a.breakdown.empty())
        throw ConfigError("diagnose: choose at least one of --influence, --breakdown, --smoothing-gap");
    const LoadedFit lf = load_fit(a);
    const auto& cfg = lf.fit.config_used;

    if (a.smoothing_gap) {
        const auto hs = parse_list(a.h_list, "--bandwidths");
        const double half = a.gap_range ? *a.gap_range : 3.0 / cfg.alpha.alpha();
        if (a.gap_points < 2 || !(half > 0)) throw ConfigError("diagnose: invalid gap grid");
        const auto grid = linear_grid(-half, half, a.gap_points);
        auto out = open_out(a.out + "_smoothing_gap.csv");
        out << "h,gap\n" << std::setprecision(12);
        for (double h : hs) {
            if (!(h > 0)) throw ConfigError("bandwidths must be positive");
            out << h << ',' << smoothing_gap(cfg.alpha, {h}, grid) << '\n';
        }
    }
    if (a.influence) {
        const SmoothingParams sm = a.bandwidth ? SmoothingParams{*a.bandwidth} : SmoothingParams::for_sample_size(lf.data.rows());
        sm.validate();
        const Index p = lf.data.cols();
        auto out = open_out(a.out + "_influence.csv");
        out << "observation,coordinate,kind,label,active,value\n" << std::setprecision(12);
        const auto& names = lf.data.feature_names();
        for (Index i = 0; i < lf.data.rows(); ++i) {
            const InfluenceResult res = influence_function(lf.data, lf.fit, sm, {i, {}, {}});
            std::vector<char> active(static_cast<std::size_t>(res.values.size()), 0);
            for (Index k : res.active) active[static_cast<std::size_t>(k)] = 1;
            for (Index k = 0; k < res.values.size(); ++k) {
                const bool is_beta = k < p;
                out << i + 1 << ',' << k + 1 << ',' << (is_beta ? "beta" : "nu") << ','
                    << (is_beta ? names[static_cast<std::size_t>(k)] : "obs" + std::to_string(k - p + 1)) << ','
                    << int(active[static_cast<std::size_t>(k)]) << ',' << res.values(k) << '\n';
            }
            if (res.pseudo_inverse)
                std::cerr << "warning: observation " << i + 1 << ": ill-conditioned Jacobian (condition number "
                          << res.condition_number << "), pseudo-inverse used\n";
        }
    }
    if (!a.breakdown.empty()) {
        auto mags = parse_list(a.breakdown, "--breakdown");
        for (double m : mags)
            if (!(m >= 0)) throw ConfigError("breakdown magnitudes must be nonnegative");
        if (!std::is_sorted(mags.begin(), mags.end())) throw ConfigError("breakdown magnitudes must be ascending");
        auto out = open_out(a.out + "_breakdown.csv");
        out << "magnitude,beta_norm,max_abs_residual\n" << std::setprecision(12);
        // Magnitude 0 reports the fit from the report itself.
        std::size_t k = 0;
        for (; k < mags.size() && mags[k] == 0.0; ++k) {
            const Eigen::VectorXd r = lf.data.y() - lf.data.x() * lf.fit.beta.values();
            out << 0.0 << ',' << lf.fit.beta.values().norm() << ',' << r.cwiseAbs().maxCoeff() << '\n';
        }
        const std::vector<double> rest(mags.begin() + static_cast<std::ptrdiff_t>(k), mags.end());
        if (!rest.empty())
            for (const auto& pt : empirical_breakdown(lf.data, cfg, rest, lf.seed))
                out << pt.magnitude << ',' << pt.beta_norm << ',' << pt.max_abs_residual << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
    ScenarioArgs scenario;
    std::uint64_t seed = 1;
    std::string out = "data.csv", truth;
};

int run_generate(const GenerateArgs& a) {
    ContaminationSpec spec = a.scenario.build();
    spec.seed = a.seed;
    const LabeledSample s = generate(spec);
    {
        auto out = open_out(a.out);
        write_dataset(out, s.data);
    }
    if (!a.truth.empty()) {
        auto out = open_out(a.truth);
        out << "index\n";
        for (Index i : s.truth_outliers) out << i + 1 << '\n';
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Penalized weighted Huber-LASSO: robust variable selection and outlier detection"};
    app.require_subcommand(1);
    std::optional<unsigned> threads_opt;
    app.add_option("--threads", threads_opt, "worker threads (default: PWHL_THREADS, else all cores)")
        ->check(CLI::PositiveNumber);

    FitArgs fa;
    auto* fit = app.add_subcommand("fit", "fit a CSV dataset and write a JSON report");
    fit->add_option("--data", fa.data, "CSV file with a header row")->required();
    fit->add_option("--response", fa.response, "response column name");
    fit->add_option("--screen", fa.screen, "keep the k columns most correlated with the response, or 'none'");
    fit->add_option("--preset", fa.preset, "detect (alpha 0.1), estimate (alpha 0.01) or custom");
    fit->add_option("--alpha", fa.alpha, "robustification parameter");
    fit->add_option("--mu", fa.mu, "weight penalty");
    fit->add_option("--lambda", fa.lambda, "coefficient penalty");
    fit->add_flag("--tune", fa.tune, "tune alpha as well (mu and lambda are tuned unless given)");
    fit->add_option("--seed", fa.seed, "random seed");
    fit->add_option("--out", fa.out, "JSON report path (default: stdout)");
    fit->add_option("--scores", fa.scores, "CSV path for the tuning score tables");

    SimulateArgs sa;
    auto* sim = app.add_subcommand("simulate", "run Monte-Carlo replications of a contamination scenario");
    sa.scenario.add_to(sim);
    sim->add_option("--reps", sa.reps, "replications");
    sim->add_option("--seed", sa.seed, "random seed");
    auto* fixed_opt = sim->add_option("--fixed-params", sa.fixed,
                                      "skip tuning; optional alpha=..,mu=..,lambda=.. (defaults 0.1, 0.1, 0.5)")
                          ->expected(0, 1);
    sim->add_flag("--tune-each", sa.tune_each, "tune every replication (default)");
    sim->add_flag("--baseline", sa.baseline, "also fit the frozen-weight Huber-LASSO baseline");
    sim->add_option("--holdout", sa.holdout, "fraction of rows held out for prediction MSE");
    sim->add_option("--out", sa.out, "output prefix for <prefix>.csv and <prefix>.json");

    DiagnoseArgs da;
    auto* diag = app.add_subcommand("diagnose", "influence, breakdown and smoothing diagnostics of a fit");
    diag->add_option("--fit", da.fit, "JSON report written by 'fit'")->required();
    diag->add_option("--data", da.data, "the CSV the fit was computed on")->required();
    diag->add_flag("--influence", da.influence, "influence vectors for every observation");
    diag->add_option("--breakdown", da.breakdown, "ascending magnitudes, comma separated");
    diag->add_flag("--smoothing-gap", da.smoothing_gap, "sup gap between smoothed and exact score");
    diag->add_option("--bandwidths", da.h_list, "bandwidths for --smoothing-gap");
    diag->add_option("--gap-range", da.gap_range, "residual grid [-R, R] for --smoothing-gap (default 3/alpha)");
    diag->add_option("--gap-points", da.gap_points, "grid size for --smoothing-gap");
    diag->add_option("--bandwidth", da.bandwidth, "bandwidth for --influence (default n^-1/2)");
    diag->add_option("--out", da.out, "output prefix");

    GenerateArgs ga;
    auto* gen = app.add_subcommand("generate", "write one simulated dataset as CSV");
    ga.scenario.add_to(gen);
    gen->add_option("--seed", ga.seed, "random seed");
    gen->add_option("--out", ga.out, "CSV path");
    gen->add_option("--truth", ga.truth, "CSV path for the 1-based contaminated row indices");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        const unsigned threads = threads_opt ? *threads_opt : default_threads();
        if (*fit) return run_fit(fa, threads);
        if (*sim) return run_simulate(sa, fixed_opt->count() > 0, threads);
        if (*diag) return run_diagnose(da);
        if (*gen) return run_generate(ga);
    } catch (const InputError& e) {
        std::cerr << "input error";
        if (e.row() >= 0) std::cerr << " at line " << e.row();
        if (e.column() >= 0) std::cerr << ", column " << e.column();
        std::cerr << ": " << e.what() << '\n';
        return kInput;
    } catch (const ShapeError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInput;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const Error& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumeric;
    }
    return kOk;
}

} // namespace pwhl::cli

int main(int argc, char** argv) { return pwhl::cli::main(argc, argv); }
