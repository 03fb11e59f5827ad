#pragma once

#include <cstdint>

#include "radrisk/bayes.hpp"
#include "radrisk/risk_model.hpp"

namespace radrisk {

// Design of a synthetic grouped cohort: Poisson cells with stratum baseline
// rates e^delta_k and uniform covariates, case counts drawn as
// Poisson(PY * e^delta_k * (1 + ERR)).
struct CohortDesign {
    int n_strata = 20;
    int cells_per_stratum = 30;
    double py_lo = 1e3;
    double py_hi = 1e5;
    double rate_lo = 1e-4;  // stratum baseline rates, log-uniform
    double rate_hi = 3e-3;
    double w_lo = 0;
    double w_hi = 300;
    double ame_lo = 20;
    double ame_hi = 50;
    double tme_lo = 6;
    double tme_hi = 40;
    int n_rate_categories = 1;
    bool emit_windows = false;
    int max_retries = 100;  // redraws of a cell whose 1 + ERR is nonpositive
};

void validate(const CohortDesign& design);  // throws ConfigError

GroupedCohort generate_cohort(const CohortDesign& design, const RiskModel& model,
                              std::uint64_t seed);

}  // namespace radrisk
