#include "radrisk/risk_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "radrisk/errors.hpp"

namespace radrisk {

ModelFamily model_family_from_string(const std::string& name) {
    if (name == "simple_linear") return ModelFamily::simple_linear;
    if (name == "parametric_sub") return ModelFamily::parametric_sub;
    if (name == "parametric_full") return ModelFamily::parametric_full;
    if (name == "beir6_sub") return ModelFamily::beir6_sub;
    if (name == "beir6_full") return ModelFamily::beir6_full;
    throw ConfigError("unknown risk model family '" + name + "'");
}

std::string to_string(ModelFamily family) {
    switch (family) {
        case ModelFamily::simple_linear: return "simple_linear";
        case ModelFamily::parametric_sub: return "parametric_sub";
        case ModelFamily::parametric_full: return "parametric_full";
        case ModelFamily::beir6_sub: return "beir6_sub";
        case ModelFamily::beir6_full: return "beir6_full";
    }
    return "unknown";
}

std::size_t theta_dim(const RiskModel& model) {
    switch (model.family) {
        case ModelFamily::simple_linear: return 1;
        case ModelFamily::parametric_sub: return 3;
        case ModelFamily::parametric_full: return model.rate_category_bounds.size() + 3;
        case ModelFamily::beir6_sub: return 3;
        case ModelFamily::beir6_full: return 4;
    }
    return 0;
}

static void require_ascending(const std::vector<double>& v, const std::string& what) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] <= v[i - 1]) throw ConfigError(what + " must be strictly ascending");
}

void validate(const RiskModel& model) {
    const std::size_t dim = theta_dim(model);
    if (model.theta.size() != dim)
        throw ConfigError("model '" + model.label + "' needs " + std::to_string(dim) +
                          " parameters, got " + std::to_string(model.theta.size()));
    if (!model.covariance.empty() && model.covariance.size() != dim * (dim + 1) / 2)
        throw ConfigError("covariance must be the lower triangle: " +
                          std::to_string(dim * (dim + 1) / 2) + " entries");
    require_ascending(model.rate_category_bounds, "rate category bounds");
    require_ascending(model.age_category_bounds, "age category bounds");
    const bool beir =
        model.family == ModelFamily::beir6_sub || model.family == ModelFamily::beir6_full;
    if (beir) {
        if (model.phi_age.size() != model.age_category_bounds.size() + 1)
            throw ConfigError("phi_age needs one factor per age category");
        if (model.gamma_rate.size() != model.rate_category_bounds.size() + 1)
            throw ConfigError("gamma_rate needs one factor per rate category");
    }
}

std::size_t rate_category(const RiskModel& model, double rate_wl) {
    std::size_t j = 0;
    while (j < model.rate_category_bounds.size() && rate_wl >= model.rate_category_bounds[j])
        ++j;
    return j;
}

static std::size_t age_category(const RiskModel& model, double age) {
    std::size_t j = 0;
    while (j < model.age_category_bounds.size() && age >= model.age_category_bounds[j]) ++j;
    return j;
}

namespace {

struct ErrInputs {
    double W = 0;
    double ame = 0;
    double tme = 0;
    std::size_t rate_cat = 0;
    double attained_age = 0;
    const WindowExposures* windows = nullptr;
};

double evaluate_err(const RiskModel& model, const ErrInputs& in) {
    switch (model.family) {
        case ModelFamily::simple_linear:
            return model.theta[0] * in.W;
        case ModelFamily::parametric_sub:
            return model.theta[0] * in.W *
                   std::exp(model.theta[1] * (in.ame - 30) + model.theta[2] * (in.tme - 20));
        case ModelFamily::parametric_full: {
            const std::size_t n_beta = model.rate_category_bounds.size() + 1;
            const double beta = model.theta[in.rate_cat];
            const double alpha = model.theta[n_beta];
            const double eps = model.theta[n_beta + 1];
            return beta * in.W * std::exp(alpha * (in.ame - 30) + eps * (in.tme - 20));
        }
        case ModelFamily::beir6_sub: {
            const double dose = in.windows->w5_14 + model.theta[1] * in.windows->w15_24 +
                                model.theta[2] * in.windows->w25p();
            return model.theta[0] * dose * model.phi_age[age_category(model, in.attained_age)] *
                   model.gamma_rate[in.rate_cat];
        }
        case ModelFamily::beir6_full: {
            const double dose = in.windows->w5_14 + model.theta[1] * in.windows->w15_24 +
                                model.theta[2] * in.windows->w25_34 +
                                model.theta[3] * in.windows->w35p;
            return model.theta[0] * dose * model.phi_age[age_category(model, in.attained_age)] *
                   model.gamma_rate[in.rate_cat];
        }
    }
    return 0;
}

}  // namespace

double err_at(const RiskModel& model, const ExposureHistory& h, int t) {
    const double W = cumulative_exposure(h, t);
    if (W <= 0) return 0;
    ErrInputs in;
    in.W = W;
    in.attained_age = t;
    const bool needs_median = model.family == ModelFamily::parametric_sub ||
                              model.family == ModelFamily::parametric_full;
    if (needs_median) {
        const AmeTme m = ame_tme(h, t);
        in.ame = m.ame;
        in.tme = m.tme;
    }
    const double rate =
        (t >= 0 && t < static_cast<int>(h.rate_wl.size())) ? h.rate_wl[static_cast<std::size_t>(t)] : 0.0;
    in.rate_cat = rate_category(model, rate);
    WindowExposures w;
    if (model.family == ModelFamily::beir6_sub || model.family == ModelFamily::beir6_full) {
        w = window_exposures(h, t);
        in.windows = &w;
    }
    return evaluate_err(model, in);
}

std::vector<double> err_profile(const RiskModel& model, const ExposureHistory& h,
                                const AgeGrid& grid) {
    grid.validate();
    validate(model);
    std::vector<double> err(static_cast<std::size_t>(grid.size()), 0.0);
    for (int t = 0; t <= grid.t_max; ++t)
        err[static_cast<std::size_t>(t)] = err_at(model, h, t);
    return err;
}

double err_cell(const RiskModel& model, const CellCovariates& cell) {
    if (cell.W <= 0 && !cell.has_windows) return 0;
    ErrInputs in;
    in.W = cell.W;
    in.ame = cell.ame;
    in.tme = cell.tme;
    in.attained_age = cell.ame + cell.tme;
    const bool needs_cat = model.family == ModelFamily::parametric_full ||
                           model.family == ModelFamily::beir6_sub ||
                           model.family == ModelFamily::beir6_full;
    if (needs_cat) {
        if (cell.rate_category < 0)
            throw DataError("cohort cell is missing the exposure-rate category");
        if (cell.rate_category > static_cast<int>(model.rate_category_bounds.size()))
            throw DataError("cohort cell rate category out of range");
        in.rate_cat = static_cast<std::size_t>(cell.rate_category);
    }
    WindowExposures w;
    if (model.family == ModelFamily::beir6_sub || model.family == ModelFamily::beir6_full) {
        if (!cell.has_windows)
            throw DataError("cohort cell is missing window exposures for a BEIR model");
        w.w5_14 = cell.w5_14;
        w.w15_24 = cell.w15_24;
        w.w25_34 = cell.w25_34;
        w.w35p = cell.w35p;
        in.windows = &w;
    }
    return evaluate_err(model, in);
}

static std::vector<double> json_doubles(const nlohmann::json& j, const std::string& key) {
    std::vector<double> out;
    if (!j.contains(key)) return out;
    for (const auto& v : j.at(key)) out.push_back(v.get<double>());
    return out;
}

RiskModel risk_model_from_json(const nlohmann::json& j, std::string label) {
    RiskModel m;
    m.label = std::move(label);
    try {
        m.family = model_family_from_string(j.at("family").get<std::string>());
        m.theta = json_doubles(j, "theta");
        m.covariance = json_doubles(j, "covariance");
        m.rate_category_bounds = json_doubles(j, "rate_category_bounds");
        m.age_category_bounds = json_doubles(j, "age_category_bounds");
        m.phi_age = json_doubles(j, "phi_age");
        m.gamma_rate = json_doubles(j, "gamma_rate");
        if (j.contains("priors")) m.priors = j.at("priors");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad risk model '" + m.label + "': " + e.what());
    }
    const bool beir =
        m.family == ModelFamily::beir6_sub || m.family == ModelFamily::beir6_full;
    if (beir && m.phi_age.empty()) m.phi_age.assign(m.age_category_bounds.size() + 1, 1.0);
    if (beir && m.gamma_rate.empty()) m.gamma_rate.assign(m.rate_category_bounds.size() + 1, 1.0);
    validate(m);
    return m;
}

RiskModel load_risk_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open risk model file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad JSON in " + path.string() + ": " + e.what());
    }
    return risk_model_from_json(j, path.stem().string());
}

}  // namespace radrisk
