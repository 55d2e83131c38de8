// Draws one contaminated sample, fits it with fixed penalties and prints what
// was flagged and selected.

#include "pwhl/pwhl.hpp"

#include <iostream>

int main() {
    pwhl::ContaminationSpec spec;
    spec.contamination = pwhl::ContaminationCase::Covariate;
    spec.c = 0.1;
    spec.seed = 7;
    const pwhl::LabeledSample s = pwhl::generate(spec);

    const auto cfg = pwhl::PipelineConfig::fixed(pwhl::kDetectAlpha, 0.1, 0.5);
    const pwhl::PipelineFit pf = pwhl::fit_pipeline(s.data, cfg, 7);

    std::cout << "flagged rows:";
    for (auto i : pf.fit.outliers) std::cout << ' ' << i + 1;
    std::cout << "\nselected:";
    for (auto j : pf.fit.beta.support()) std::cout << ' ' << s.data.feature_names()[j] << '=' << pf.fit.beta[j];

    const auto m = pwhl::replication_metrics(pf.fit.outliers, s.truth_outliers, s.data.rows(), pf.fit.beta, s.beta_star);
    std::cout << "\nmasking " << m.outliers.masking << ", swamping " << m.outliers.swamping << ", squared error "
              << m.error.ee << '\n';
}
