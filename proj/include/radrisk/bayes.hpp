#pragma once

#include <filesystem>
#include <functional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"

#include "radrisk/risk_model.hpp"

namespace radrisk {

// Poisson cell of a grouped cohort: person-years and case count within a
// baseline stratum, with the exposure covariates of the cell.
struct CohortCell {
    int id = 0;
    int stratum = 0;  // 1-based
    double person_years = 0;
    double cases = 0;
    CellCovariates cov;
};

struct GroupedCohort {
    std::vector<CohortCell> cells;
    int n_strata = 0;
};

void validate(const GroupedCohort& cohort);  // throws DataError
GroupedCohort load_cohort(const std::filesystem::path& path);
void save_cohort(const std::filesystem::path& path, const GroupedCohort& cohort);

// Independent prior factor for one model parameter.
struct PriorTerm {
    enum class Kind { uniform, gamma_mode, normal, lognormal_mode };
    Kind kind = Kind::uniform;
    // uniform: a=lo, b=hi. gamma_mode: a=shape, b=mode. normal: a=mean, b=sd.
    // lognormal_mode: a=mode, b=sigma.
    double a = 0;
    double b = 0;

    static PriorTerm uniform(double lo, double hi);
    static PriorTerm gamma_mode(double shape, double mode);
    static PriorTerm normal(double mean, double sd);
    static PriorTerm lognormal_mode(double mode, double sigma);

    double log_density(double x) const;
};

std::vector<PriorTerm> priors_from_json(const nlohmann::json& j, std::size_t dim);

double log_prior(const std::vector<PriorTerm>& priors, std::span<const double> theta);

// Log marginal posterior of the risk model parameters for a grouped cohort
// with Poisson cells and stratum baselines integrated out:
//   log P(theta) + sum_i C_i log(1+ERR_i) - sum_k S_k log(sum_{i in k} PY_i (1+ERR_i))
// -inf whenever any cell has 1 + ERR <= 0.
class PosteriorEvaluator {
  public:
    PosteriorEvaluator(RiskModel model, GroupedCohort cohort, std::vector<PriorTerm> priors);

    double operator()(std::span<const double> theta) const;
    std::size_t dim() const { return theta_dim(model_); }
    const RiskModel& model() const { return model_; }

  private:
    mutable RiskModel model_;
    GroupedCohort cohort_;
    std::vector<PriorTerm> priors_;
    std::vector<std::vector<std::size_t>> strata_cells_;
    std::vector<double> stratum_cases_;
};

// Scalar rejection sampler with a uniform proposal on [lo, hi]; the envelope
// is 1.1 times the grid maximum of the target log-density. Aborts when the
// acceptance rate collapses below 1e-4.
std::vector<double> rejection_sample(const std::function<double(double)>& target_log,
                                     double lo, double hi, std::size_t n,
                                     std::mt19937_64& rng);

// Random-walk Metropolis-Hastings with multivariate normal steps.
struct MhResult {
    std::vector<std::vector<double>> samples;  // post burn-in states
    double acceptance_rate = 0;
};

MhResult mh_sample(const std::function<double(std::span<const double>)>& target_log,
                   const std::vector<double>& init,
                   const std::vector<double>& proposal_cov_lower_triangle,
                   std::size_t n_total, std::size_t burn_in, std::mt19937_64& rng);

// Narrowest interval holding ceil(level * n) sorted samples (leftmost on
// ties). Never wider than the equal-tail interval at the same level.
std::pair<double, double> hpdi(std::vector<double> samples, double level);

// Nelder-Mead maximizer for posterior modes.
std::vector<double> maximize(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> init, double scale = 0.1,
                             std::size_t max_iter = 4000, double tol = 1e-10);

}  // namespace radrisk
