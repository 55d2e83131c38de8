#pragma once

// Data-generating processes for the benchmark scenarios: AR(0.5) Gaussian
// designs, Normal / t3 noise with optional heteroscedastic scaling, and
// contamination of the first floor(c n) observations.

#include "pwhl/core.hpp"
#include "pwhl/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>

namespace pwhl {

enum class ContaminationCase { None, Response, Covariate, Both };
enum class NoiseFamily { Normal, StudentT3 };

inline const char* to_string(ContaminationCase c) {
    switch (c) {
        case ContaminationCase::None: return "none";
        case ContaminationCase::Response: return "response";
        case ContaminationCase::Covariate: return "covariate";
        case ContaminationCase::Both: return "both";
    }
    return "?";
}

inline const char* to_string(NoiseFamily f) { return f == NoiseFamily::Normal ? "normal" : "t3"; }

/// Number of leading columns shifted by covariate contamination.
inline constexpr Index kShiftedColumns = 100;
/// 1-based columns driving the heteroscedastic scale exp(x_20 + x_21 + x_22).
inline constexpr Index kHeteroFirstColumn = 20;
inline constexpr Index kHeteroLastColumn = 22;

inline Eigen::VectorXd default_beta_star(Index p) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(p);
    for (Index j = 0; j < std::min<Index>(3, p); ++j) b(j) = 0.8;
    return b;
}

struct ContaminationSpec {
    ContaminationCase contamination = ContaminationCase::None;
    double c = 0.0;
    double kappa = 0.4;
    NoiseFamily noise = NoiseFamily::Normal;
    bool hetero = false;
    Index n = 100;
    Index p = 400;
    std::optional<Eigen::VectorXd> beta_star;  // defaults to (0.8, 0.8, 0.8, 0, ..., 0)
    std::uint64_t seed = 0;
    /// In the combined case, compute the response shift from the already
    /// shifted covariates instead of the original ones.
    bool both_uses_shifted_covariates = false;

    Eigen::VectorXd beta() const { return beta_star ? *beta_star : default_beta_star(p); }

    Index n_contaminated() const { return static_cast<Index>(std::floor(c * static_cast<double>(n) + 1e-9)); }

    void validate() const {
        if (n < 2 || p < 1) throw ConfigError("scenario: need n >= 2 and p >= 1");
        if (!(c >= 0.0 && c < 0.5)) throw ConfigError("scenario: contamination fraction must be in [0, 0.5)");
        if (!std::isfinite(kappa)) throw ConfigError("scenario: kappa must be finite");
        if (beta_star && beta_star->size() != p) throw ConfigError("scenario: beta_star length != p");
        const bool touches_x = contamination == ContaminationCase::Covariate || contamination == ContaminationCase::Both;
        if (touches_x && c > 0 && p < kShiftedColumns)
            throw ConfigError("scenario: covariate contamination needs p >= 100");
        if (hetero && p < kHeteroLastColumn) throw ConfigError("scenario: heteroscedastic noise needs p >= 22");
    }
};

struct LabeledSample {
    Dataset data;
    IndexSet truth_outliers;  // 0-based, always {0, ..., floor(c n) - 1}
    Coefficients beta_star;
    Dataset clean_data;
};

/// Rows i.i.d. N(0, Sigma) with Sigma_km = 0.5^|k-m|, via the AR(1) recursion.
inline Eigen::MatrixXd gen_design(Index n, Index p, Rng& rng) {
    if (n < 1 || p < 1) throw DomainError("gen_design: n and p must be positive");
    std::normal_distribution<double> z;
    const double innov = std::sqrt(1.0 - 0.25);
    Eigen::MatrixXd x(n, p);
    for (Index i = 0; i < n; ++i) {
        x(i, 0) = z(rng);
        for (Index k = 1; k < p; ++k) x(i, k) = 0.5 * x(i, k - 1) + innov * z(rng);
    }
    return x;
}

inline Eigen::VectorXd gen_noise(Index n, NoiseFamily family, Rng& rng) {
    Eigen::VectorXd e(n);
    if (family == NoiseFamily::Normal) {
        std::normal_distribution<double> d;
        for (Index i = 0; i < n; ++i) e(i) = d(rng);
    } else {
        std::student_t_distribution<double> d(3.0);
        for (Index i = 0; i < n; ++i) e(i) = d(rng);
    }
    return e;
}

/// exp(x_20 + x_21 + x_22) per row (1-based column numbers).
inline Eigen::VectorXd hetero_scale(const Eigen::MatrixXd& x) {
    if (x.cols() < kHeteroLastColumn) throw DomainError("hetero_scale: needs at least 22 columns");
    Eigen::VectorXd eta(x.rows());
    for (Index i = 0; i < x.rows(); ++i)
        eta(i) = std::exp(x(i, kHeteroFirstColumn - 1) + x(i, kHeteroFirstColumn) + x(i, kHeteroLastColumn - 1));
    return eta;
}

/// y = X beta* + eps, or X beta* + eta .* eps when hetero.
inline Eigen::VectorXd gen_response(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta_star,
                                    const Eigen::VectorXd& noise, bool hetero) {
    if (beta_star.size() != x.cols() || noise.size() != x.rows()) throw ShapeError("gen_response: dimension mismatch");
    Eigen::VectorXd y = x * beta_star;
    if (hetero)
        y.array() += hetero_scale(x).array() * noise.array();
    else
        y += noise;
    return y;
}

inline Eigen::VectorXd gen_response(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta_star,
                                    const ContaminationSpec& spec, Rng& rng) {
    return gen_response(x, beta_star, gen_noise(x.rows(), spec.noise, rng), spec.hetero);
}

/// Contaminates the first floor(c n) rows of `clean` according to the scenario.
inline LabeledSample contaminate(const Dataset& clean, const Eigen::VectorXd& beta_star, const ContaminationSpec& spec) {
    if (clean.rows() != spec.n || clean.cols() != spec.p) throw ShapeError("contaminate: data does not match scenario");
    spec.validate();
    const Index m = spec.n_contaminated();
    Eigen::MatrixXd x = clean.x();
    Eigen::VectorXd y = clean.y();

    const bool shift_y = spec.contamination == ContaminationCase::Response || spec.contamination == ContaminationCase::Both;
    const bool shift_x = spec.contamination == ContaminationCase::Covariate || spec.contamination == ContaminationCase::Both;
    const Index last = std::min(kShiftedColumns, spec.p);

    if (shift_x && spec.both_uses_shifted_covariates)
        x.topLeftCorner(m, last).array() += 30.0 * spec.kappa;
    if (shift_y && spec.p > 3)
        for (Index i = 0; i < m; ++i) y(i) += spec.kappa * x.row(i).tail(spec.p - 3).sum();
    if (shift_x && !spec.both_uses_shifted_covariates)
        x.topLeftCorner(m, last).array() += 30.0 * spec.kappa;

    IndexSet truth(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) truth[static_cast<std::size_t>(i)] = i;
    return LabeledSample{Dataset(std::move(x), std::move(y), clean.feature_names()), std::move(truth),
                         Coefficients(beta_star), clean};
}

/// Full draw of a scenario from its own seed.
inline LabeledSample generate(const ContaminationSpec& spec) {
    spec.validate();
    Rng design_rng = make_rng(spec.seed, Stream::Design);
    Rng noise_rng = make_rng(spec.seed, Stream::Noise);
    const Eigen::VectorXd beta = spec.beta();
    Eigen::MatrixXd x = gen_design(spec.n, spec.p, design_rng);
    Eigen::VectorXd y = gen_response(x, beta, spec, noise_rng);
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(spec.p));
    for (Index j = 1; j <= spec.p; ++j) names.push_back("x" + std::to_string(j));
    return contaminate(Dataset(std::move(x), std::move(y), std::move(names)), beta, spec);
}

} // namespace pwhl
