#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "radrisk/age_grid.hpp"
#include "radrisk/exposure.hpp"

namespace radrisk {

// Excess relative risk model families.
//  simple_linear:   ERR = beta * W(t)
//  parametric_sub:  ERR = beta * W(t) * exp(alpha*(AME-30) + eps*(TME-20))
//  parametric_full: as parametric_sub but beta_j picked by exposure-rate
//                   category
//  beir6_sub:       ERR = beta * (W5-14 + th15_24*W15-24 + th25p*W25+)
//                   * phi_age * gamma_rate
//  beir6_full:      ERR = beta * (W5-14 + th15_24*W15-24 + th25_34*W25-34
//                   + th35p*W35+) * phi_age * gamma_rate
// The leading BEIR window weight is fixed at 1 (normalization).
enum class ModelFamily { simple_linear, parametric_sub, parametric_full, beir6_sub, beir6_full };

ModelFamily model_family_from_string(const std::string& name);
std::string to_string(ModelFamily family);

struct RiskModel {
    ModelFamily family = ModelFamily::simple_linear;
    std::vector<double> theta;
    // Row-major lower triangle of the parameter covariance; empty when the
    // model carries no sampling uncertainty.
    std::vector<double> covariance;
    // Ascending thresholds in WL; k bounds define k+1 categories.
    std::vector<double> rate_category_bounds;
    // Ascending attained-age thresholds for the BEIR age factor.
    std::vector<double> age_category_bounds;
    std::vector<double> phi_age;     // size age_category_bounds.size() + 1
    std::vector<double> gamma_rate;  // size rate_category_bounds.size() + 1
    nlohmann::json priors;           // consumed by the Bayesian layer
    std::string label;
};

std::size_t theta_dim(const RiskModel& model);
void validate(const RiskModel& model);  // throws ConfigError

std::size_t rate_category(const RiskModel& model, double rate_wl);

// ERR at attained age t for a full exposure history. Zero whenever the lagged
// cumulative exposure is zero.
double err_at(const RiskModel& model, const ExposureHistory& h, int t);
std::vector<double> err_profile(const RiskModel& model, const ExposureHistory& h,
                                const AgeGrid& grid = {});

// Covariate summary of a grouped-cohort cell. Attained age for the BEIR age
// factor is ame + tme; the rate category is carried explicitly.
struct CellCovariates {
    double W = 0;
    double ame = 0;
    double tme = 0;
    int rate_category = -1;
    double w5_14 = 0;
    double w15_24 = 0;
    double w25_34 = 0;
    double w35p = 0;
    bool has_windows = false;
};

double err_cell(const RiskModel& model, const CellCovariates& cell);

RiskModel load_risk_model(const std::filesystem::path& path);
RiskModel risk_model_from_json(const nlohmann::json& j, std::string label);

}  // namespace radrisk
