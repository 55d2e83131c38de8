#pragma once

// Evaluation measures for outlier detection, variable selection and estimation.

#include "pwhl/core.hpp"

#include <algorithm>
#include <span>
#include <vector>

namespace pwhl {

struct OutlierMetrics {
    double masking = 0.0;   // M
    double swamping = 0.0;  // S
    int joint_detection = 0;  // 1 iff every true outlier is detected
};

struct SelectionMetrics {
    double fzr = 0.0;
    double fpr = 0.0;
    int correct_selection = 0;  // supports equal
    int correct_coverage = 0;   // true support contained
};

struct EstimationError {
    double ee = 0.0;
    double ee_non = 0.0;
};

namespace detail {

inline void check_indices(const IndexSet& s, Index n) {
    for (Index i : s)
        if (i < 0 || i >= n) throw DomainError("index " + std::to_string(i) + " outside [0, " + std::to_string(n) + ")");
}

inline IndexSet sorted_unique(IndexSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

} // namespace detail

inline OutlierMetrics outlier_metrics(const IndexSet& detected, const IndexSet& truth, Index n) {
    detail::check_indices(detected, n);
    detail::check_indices(truth, n);
    const IndexSet d = detail::sorted_unique(detected);
    const IndexSet t = detail::sorted_unique(truth);
    IndexSet missed, false_alarms;
    std::set_difference(t.begin(), t.end(), d.begin(), d.end(), std::back_inserter(missed));
    std::set_difference(d.begin(), d.end(), t.begin(), t.end(), std::back_inserter(false_alarms));

    OutlierMetrics m;
    const auto nt = static_cast<double>(t.size());
    const auto ng = static_cast<double>(n) - nt;
    m.masking = t.empty() ? 0.0 : static_cast<double>(missed.size()) / nt;
    m.swamping = ng > 0 ? static_cast<double>(false_alarms.size()) / ng : 0.0;
    m.joint_detection = missed.empty() ? 1 : 0;
    return m;
}

inline SelectionMetrics selection_metrics(const Coefficients& beta_hat, const Coefficients& beta_star) {
    if (beta_hat.size() != beta_star.size()) throw ShapeError("selection_metrics: length mismatch");
    int nonzero = 0, zero = 0, false_zero = 0, false_pos = 0;
    for (Index j = 0; j < beta_hat.size(); ++j) {
        const bool truth = beta_star.is_nonzero(j);
        const bool est = beta_hat.is_nonzero(j);
        if (truth) {
            ++nonzero;
            if (!est) ++false_zero;
        } else {
            ++zero;
            if (est) ++false_pos;
        }
    }
    SelectionMetrics s;
    s.fzr = nonzero ? static_cast<double>(false_zero) / nonzero : 0.0;
    s.fpr = zero ? static_cast<double>(false_pos) / zero : 0.0;
    s.correct_selection = (false_zero == 0 && false_pos == 0) ? 1 : 0;
    s.correct_coverage = false_zero == 0 ? 1 : 0;
    return s;
}

inline EstimationError estimation_error(const Coefficients& beta_hat, const Coefficients& beta_star) {
    if (beta_hat.size() != beta_star.size()) throw ShapeError("estimation_error: length mismatch");
    EstimationError e;
    for (Index j = 0; j < beta_hat.size(); ++j) {
        const double d = beta_hat[j] - beta_star[j];
        e.ee += d * d;
        if (beta_star.is_nonzero(j)) e.ee_non += d * d;
    }
    return e;
}

/// Raw per-replication values.
struct ReplicationMetrics {
    OutlierMetrics outliers;
    SelectionMetrics selection;
    EstimationError error;
};

inline ReplicationMetrics replication_metrics(const IndexSet& detected, const IndexSet& truth, Index n,
                                              const Coefficients& beta_hat, const Coefficients& beta_star) {
    return {outlier_metrics(detected, truth, n), selection_metrics(beta_hat, beta_star),
            estimation_error(beta_hat, beta_star)};
}

struct MetricsReport {
    double M = 0, S = 0, JD = 0, FZR = 0, FPR = 0, SR = 0, CR = 0, EE = 0, EE_non = 0;
    int n_replications = 0;
    std::vector<ReplicationMetrics> per_replication;
};

/// Means over replications (fractions for the indicator columns), in input order.
inline MetricsReport aggregate(std::span<const ReplicationMetrics> reps) {
    if (reps.empty()) throw DomainError("aggregate: no replications");
    MetricsReport r;
    for (const auto& m : reps) {
        r.M += m.outliers.masking;
        r.S += m.outliers.swamping;
        r.JD += m.outliers.joint_detection;
        r.FZR += m.selection.fzr;
        r.FPR += m.selection.fpr;
        r.SR += m.selection.correct_selection;
        r.CR += m.selection.correct_coverage;
        r.EE += m.error.ee;
        r.EE_non += m.error.ee_non;
    }
    const auto k = static_cast<double>(reps.size());
    for (double* v : {&r.M, &r.S, &r.JD, &r.FZR, &r.FPR, &r.SR, &r.CR, &r.EE, &r.EE_non}) *v /= k;
    r.n_replications = static_cast<int>(reps.size());
    r.per_replication.assign(reps.begin(), reps.end());
    return r;
}

} // namespace pwhl
