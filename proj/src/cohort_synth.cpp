#include "radrisk/cohort_synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "radrisk/errors.hpp"
#include "radrisk/rng.hpp"

namespace radrisk {

void validate(const CohortDesign& design) {
    if (design.n_strata < 1 || design.cells_per_stratum < 1)
        throw ConfigError("cohort design needs at least one stratum and cell");
    if (design.py_lo <= 0 || design.py_hi < design.py_lo)
        throw ConfigError("cohort design needs 0 < py_lo <= py_hi");
    if (design.rate_lo <= 0 || design.rate_hi < design.rate_lo)
        throw ConfigError("cohort design needs 0 < rate_lo <= rate_hi");
    if (design.w_lo < 0 || design.w_hi < design.w_lo)
        throw ConfigError("cohort design needs 0 <= w_lo <= w_hi");
    if (design.ame_lo < 0 || design.ame_hi < design.ame_lo)
        throw ConfigError("cohort design needs 0 <= ame_lo <= ame_hi");
    if (design.tme_lo < 0 || design.tme_hi < design.tme_lo)
        throw ConfigError("cohort design needs 0 <= tme_lo <= tme_hi");
    if (design.n_rate_categories < 1)
        throw ConfigError("cohort design needs at least one rate category");
    if (design.max_retries < 1) throw ConfigError("cohort design needs max_retries >= 1");
}

GroupedCohort generate_cohort(const CohortDesign& design, const RiskModel& model,
                              std::uint64_t seed) {
    validate(design);
    validate(model);
    std::mt19937_64 rng = substream(seed, 0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<double> delta(static_cast<std::size_t>(design.n_strata));
    const double log_lo = std::log(design.rate_lo);
    const double log_hi = std::log(design.rate_hi);
    for (double& d : delta) d = log_lo + (log_hi - log_lo) * unif(rng);

    GroupedCohort cohort;
    cohort.n_strata = design.n_strata;
    int id = 0;
    for (int k = 1; k <= design.n_strata; ++k) {
        for (int j = 0; j < design.cells_per_stratum; ++j) {
            CohortCell cell;
            cell.id = ++id;
            cell.stratum = k;
            cell.person_years = design.py_lo + (design.py_hi - design.py_lo) * unif(rng);

            double rel = 0;
            int attempt = 0;
            for (; attempt < design.max_retries; ++attempt) {
                cell.cov = CellCovariates{};
                cell.cov.W = design.w_lo + (design.w_hi - design.w_lo) * unif(rng);
                cell.cov.ame = design.ame_lo + (design.ame_hi - design.ame_lo) * unif(rng);
                cell.cov.tme = design.tme_lo + (design.tme_hi - design.tme_lo) * unif(rng);
                cell.cov.rate_category =
                    static_cast<int>(unif(rng) * design.n_rate_categories);
                if (cell.cov.rate_category >= design.n_rate_categories)
                    cell.cov.rate_category = design.n_rate_categories - 1;
                if (design.emit_windows) {
                    // split W over the four windows at three sorted uniform cuts
                    double c1 = unif(rng), c2 = unif(rng), c3 = unif(rng);
                    if (c1 > c2) std::swap(c1, c2);
                    if (c2 > c3) std::swap(c2, c3);
                    if (c1 > c2) std::swap(c1, c2);
                    cell.cov.w5_14 = cell.cov.W * c1;
                    cell.cov.w15_24 = cell.cov.W * (c2 - c1);
                    cell.cov.w25_34 = cell.cov.W * (c3 - c2);
                    cell.cov.w35p = cell.cov.W * (1 - c3);
                    cell.cov.has_windows = true;
                }
                rel = 1.0 + err_cell(model, cell.cov);
                if (rel > 0) break;
            }
            if (attempt == design.max_retries)
                throw NumericError("cell covariates kept producing nonpositive rates after " +
                                   std::to_string(design.max_retries) + " retries");

            const double lambda =
                cell.person_years * std::exp(delta[static_cast<std::size_t>(k - 1)]) * rel;
            std::poisson_distribution<long> poisson(lambda);
            cell.cases = static_cast<double>(poisson(rng));
            cohort.cells.push_back(std::move(cell));
        }
    }
    return cohort;
}

}  // namespace radrisk
