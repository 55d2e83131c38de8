#pragma once

// Sure independence screening by absolute marginal Pearson correlation.

#include "pwhl/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace pwhl {

/// |corr(x_j, y)| for every column; zero for constant columns or constant y.
inline Eigen::VectorXd marginal_correlations(const Dataset& data) {
    const Eigen::VectorXd yc = data.y().array() - data.y().mean();
    const double sy = yc.norm();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(data.cols());
    if (sy == 0.0) return out;
    for (Index j = 0; j < data.cols(); ++j) {
        const Eigen::VectorXd xc = data.x().col(j).array() - data.x().col(j).mean();
        const double sx = xc.norm();
        if (sx == 0.0) continue;
        out(j) = std::min(1.0, std::abs(xc.dot(yc)) / (sx * sy));
    }
    return out;
}

/// Top `keep` columns by |corr|, best first; ties keep column order.
inline IndexSet sis_screen(const Dataset& data, Index keep) {
    if (keep < 1 || keep > data.cols())
        throw DomainError("sis_screen: keep must be in [1, " + std::to_string(data.cols()) + "]");
    const Eigen::VectorXd c = marginal_correlations(data);
    IndexSet idx(static_cast<std::size_t>(data.cols()));
    std::iota(idx.begin(), idx.end(), Index{0});
    std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return c(a) > c(b); });
    idx.resize(static_cast<std::size_t>(keep));
    return idx;
}

} // namespace pwhl
