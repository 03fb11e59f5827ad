#pragma once

#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "radrisk/age_grid.hpp"
#include "radrisk/mortality.hpp"

namespace radrisk {

// One country/sex/year observation of deaths over mid-year population for a
// 5-year age group.
struct RateObservation {
    std::string country;
    std::string sex;
    int year = 0;
    int age_start = 0;
    int age_end = 0;
    double deaths = 0;
    double population = 0;

    double rate() const { return deaths / population; }
};

std::vector<RateObservation> load_observations(const std::filesystem::path& path);

struct GammaParams {
    double shape = 0;  // a
    double rate = 0;   // b; mean = a/b
};

// Maximum-likelihood gamma fit via Newton iteration on the shape (digamma
// based, method-of-moments start). The fitted mean a/b equals the sample mean
// exactly.
GammaParams fit_gamma_mle(std::span<const double> rates);

struct LogNormalParams {
    double mu = 0;
    double sigma = 0;  // maximum-likelihood (1/n) scale
};

LogNormalParams fit_lognormal_mle(std::span<const double> rates);

// Keeps the fitted shape but moves the mean to target_mean.
GammaParams center_gamma(double shape, double target_mean);

enum class RateFamily { gamma, lognormal };
RateFamily rate_family_from_string(const std::string& name);
std::string to_string(RateFamily f);

struct GroupFit {
    int age_start = 0;
    int age_end = 0;
    RateFamily family = RateFamily::gamma;
    double p1 = 0;  // gamma shape / log-normal mu
    double p2 = 0;  // gamma rate / log-normal sigma
    bool centered = false;

    double mean() const;
};

struct RateFits {
    std::vector<GroupFit> groups;  // ascending, contiguous
};

enum class RateColumn { r0, q0 };

// Per-group ML fits of the observed rates. With centering, each group's mean
// is moved to the given table column at the group's start age.
RateFits fit_observations(const std::vector<RateObservation>& obs, RateFamily family,
                          bool centered = false, const MortalityTable* table = nullptr,
                          RateColumn column = RateColumn::r0, const AgeGrid& grid = {});

nlohmann::json to_json(const RateFits& fits);
RateFits rate_fits_from_json(const nlohmann::json& j);
RateFits load_rate_fits(const std::filesystem::path& path);
void save_rate_fits(const std::filesystem::path& path, const RateFits& fits);

// One draw per fitted group, applied to every age in the group; rates without
// a fit argument copy the base table. Ages below the first fitted group keep
// base values. Throws DataError if the fits do not cover the grid top or have
// gaps.
MortalityTable sample_mortality_table(const MortalityTable& base, const RateFits* r0_fits,
                                      const RateFits* q0_fits, std::mt19937_64& rng,
                                      const AgeGrid& grid = {});

// Population-weighted pooled rate: total deaths over total population.
double poisson_pooled_rate(const std::vector<RateObservation>& obs);

struct NormalPrior {
    double mu = 0;
    double sigma = 0;  // sigma <= 0 means uniform (no prior pull)
};

// Posterior over theta = log pooled rate with Poisson deaths and an optional
// normal prior. Grid-based inverse-CDF sampling around the posterior mode.
struct ThetaPosterior {
    std::vector<double> samples;
    double mode = 0;
    double curvature = 0;  // -d2 log posterior at the mode; Sum(d) for uniform
};

ThetaPosterior theta_posterior(const std::vector<RateObservation>& obs,
                               const NormalPrior& prior, std::size_t n_samples,
                               std::mt19937_64& rng);

}  // namespace radrisk
