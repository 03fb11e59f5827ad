#include "radrisk/rate_fit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "radrisk/csv.hpp"
#include "radrisk/errors.hpp"
#include "radrisk/stats.hpp"

namespace radrisk {

std::vector<RateObservation> load_observations(const std::filesystem::path& path) {
    const CsvTable csv = read_csv(path);
    const auto c_country = csv.column("country");
    const auto c_sex = csv.column("sex");
    const auto c_year = csv.column("year");
    const auto c_start = csv.column("age_start");
    const auto c_end = csv.column("age_end");
    const auto c_deaths = csv.column("deaths");
    const auto c_pop = csv.column("population");

    std::vector<RateObservation> out;
    out.reserve(csv.rows.size());
    for (const auto& row : csv.rows) {
        RateObservation o;
        o.country = row[c_country];
        o.sex = row[c_sex];
        o.year = static_cast<int>(parse_long(row[c_year], "year"));
        o.age_start = static_cast<int>(parse_long(row[c_start], "age_start"));
        o.age_end = static_cast<int>(parse_long(row[c_end], "age_end"));
        o.deaths = parse_double(row[c_deaths], "deaths");
        o.population = parse_double(row[c_pop], "population");
        if (o.deaths <= 0 || o.population <= 0)
            throw DataError("observations need positive deaths and population (" + o.country +
                            " " + std::to_string(o.year) + ")");
        if (o.age_end < o.age_start)
            throw DataError("reversed age group in observations");
        out.push_back(std::move(o));
    }
    if (out.empty()) throw DataError("no observations in " + path.string());
    return out;
}

GammaParams fit_gamma_mle(std::span<const double> rates) {
    if (rates.size() < 2)
        throw DataError("gamma fit needs at least 2 observations");
    double sum = 0, log_sum = 0;
    for (double x : rates) {
        if (x <= 0) throw DataError("gamma fit needs positive rates");
        sum += x;
        log_sum += std::log(x);
    }
    const double n = static_cast<double>(rates.size());
    const double m = sum / n;
    const double s = std::log(m) - log_sum / n;  // >= 0, zero iff all equal
    const double var = variance_pop(rates);
    if (s <= 0 || var <= 0)
        throw NumericError("gamma fit degenerate: zero variance");

    double a = m * m / var;  // method-of-moments start
    for (int it = 0; it < 100; ++it) {
        const double f = std::log(a) - digamma(a) - s;
        const double fp = 1 / a - trigamma(a);
        const double step = f / fp;
        a -= step;
        if (a <= 0) a = 1e-8;
        if (std::abs(step) < 1e-10 * std::max(1.0, a)) break;
    }
    // b = a / mean makes the fitted mean the sample mean exactly (the gamma
    // likelihood is maximized on that profile).
    return GammaParams{a, a / m};
}

LogNormalParams fit_lognormal_mle(std::span<const double> rates) {
    if (rates.size() < 2)
        throw DataError("log-normal fit needs at least 2 observations");
    std::vector<double> logs;
    logs.reserve(rates.size());
    for (double x : rates) {
        if (x <= 0) throw DataError("log-normal fit needs positive rates");
        logs.push_back(std::log(x));
    }
    const double mu = mean(logs);
    const double sigma = sd_pop(logs);
    if (sigma <= 0) throw NumericError("log-normal fit degenerate: zero variance");
    return LogNormalParams{mu, sigma};
}

GammaParams center_gamma(double shape, double target_mean) {
    if (shape <= 0 || target_mean <= 0)
        throw NumericError("gamma centering needs positive shape and mean");
    return GammaParams{shape, shape / target_mean};
}

RateFamily rate_family_from_string(const std::string& name) {
    if (name == "gamma") return RateFamily::gamma;
    if (name == "lognormal") return RateFamily::lognormal;
    throw ConfigError("unknown rate distribution family '" + name + "'");
}

std::string to_string(RateFamily f) {
    return f == RateFamily::gamma ? "gamma" : "lognormal";
}

double GroupFit::mean() const {
    if (family == RateFamily::gamma) return p1 / p2;
    return std::exp(p1 + p2 * p2 / 2);
}

RateFits fit_observations(const std::vector<RateObservation>& obs, RateFamily family,
                          bool centered, const MortalityTable* table, RateColumn column,
                          const AgeGrid& grid) {
    if (obs.empty()) throw DataError("no observations to fit");
    if (centered && table == nullptr)
        throw ConfigError("centering needs a reference mortality table");

    std::map<std::pair<int, int>, std::vector<double>> by_group;
    for (const auto& o : obs) by_group[{o.age_start, o.age_end}].push_back(o.rate());

    RateFits fits;
    for (const auto& [group, rates] : by_group) {
        if (rates.size() < 2)
            throw DataError("age group " + std::to_string(group.first) + "-" +
                            std::to_string(group.second) + " has fewer than 2 observations");
        GroupFit f;
        f.age_start = group.first;
        f.age_end = group.second;
        f.family = family;
        if (family == RateFamily::gamma) {
            const GammaParams g = fit_gamma_mle(rates);
            f.p1 = g.shape;
            f.p2 = g.rate;
        } else {
            const LogNormalParams l = fit_lognormal_mle(rates);
            f.p1 = l.mu;
            f.p2 = l.sigma;
        }
        if (centered) {
            if (group.first < 0 || group.first > grid.t_max)
                throw DataError("fitted group outside the age grid");
            const auto& col = column == RateColumn::r0 ? table->r0 : table->q0;
            const double target = col[static_cast<std::size_t>(group.first)];
            if (family == RateFamily::gamma) {
                f.p2 = center_gamma(f.p1, target).rate;
            } else {
                if (target <= 0) throw NumericError("centering target must be positive");
                f.p1 = std::log(target) - f.p2 * f.p2 / 2;
            }
            f.centered = true;
        }
        fits.groups.push_back(f);
    }
    return fits;
}

nlohmann::json to_json(const RateFits& fits) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : fits.groups) {
        groups.push_back({{"age_start", g.age_start},
                          {"age_end", g.age_end},
                          {"family", to_string(g.family)},
                          {"params", {g.p1, g.p2}},
                          {"centered", g.centered}});
    }
    return nlohmann::json{{"groups", groups}};
}

RateFits rate_fits_from_json(const nlohmann::json& j) {
    RateFits fits;
    try {
        for (const auto& g : j.at("groups")) {
            GroupFit f;
            f.age_start = g.at("age_start").get<int>();
            f.age_end = g.at("age_end").get<int>();
            f.family = rate_family_from_string(g.at("family").get<std::string>());
            f.p1 = g.at("params").at(0).get<double>();
            f.p2 = g.at("params").at(1).get<double>();
            f.centered = g.value("centered", false);
            fits.groups.push_back(f);
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad rate-fit JSON: ") + e.what());
    }
    std::sort(fits.groups.begin(), fits.groups.end(),
              [](const GroupFit& a, const GroupFit& b) { return a.age_start < b.age_start; });
    return fits;
}

RateFits load_rate_fits(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open rate-fit file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("bad JSON in " + path.string() + ": " + e.what());
    }
    return rate_fits_from_json(j);
}

void save_rate_fits(const std::filesystem::path& path, const RateFits& fits) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write rate-fit file: " + path.string());
    out << to_json(fits).dump(2) << "\n";
}

static void check_coverage(const RateFits& fits, const AgeGrid& grid) {
    if (fits.groups.empty()) throw DataError("rate fits are empty");
    for (std::size_t i = 1; i < fits.groups.size(); ++i) {
        if (fits.groups[i].age_start != fits.groups[i - 1].age_end + 1)
            throw DataError("rate fits have a gap after age " +
                            std::to_string(fits.groups[i - 1].age_end));
    }
    if (fits.groups.back().age_end < grid.t_max)
        throw DataError("rate fits end at age " + std::to_string(fits.groups.back().age_end) +
                        ", grid needs " + std::to_string(grid.t_max));
}

static void apply_group_draws(const RateFits& fits, std::vector<double>& rates,
                              std::mt19937_64& rng, const AgeGrid& grid) {
    for (const auto& g : fits.groups) {
        double draw;
        if (g.family == RateFamily::gamma) {
            std::gamma_distribution<double> dist(g.p1, 1.0 / g.p2);
            draw = dist(rng);
        } else {
            std::lognormal_distribution<double> dist(g.p1, g.p2);
            draw = dist(rng);
        }
        for (int t = std::max(0, g.age_start); t <= std::min(grid.t_max, g.age_end); ++t)
            rates[static_cast<std::size_t>(t)] = draw;
    }
}

MortalityTable sample_mortality_table(const MortalityTable& base, const RateFits* r0_fits,
                                      const RateFits* q0_fits, std::mt19937_64& rng,
                                      const AgeGrid& grid) {
    grid.validate();
    if (base.r0.size() != static_cast<std::size_t>(grid.size()))
        throw DataError("base mortality table does not match the age grid");
    if (!r0_fits && !q0_fits)
        throw ConfigError("sampling a mortality table needs at least one set of rate fits");

    MortalityTable out = base;
    out.label = base.label + "/sampled";
    // Draw order is fixed (r0 then q0) so a given substream always produces
    // the same table.
    if (r0_fits) {
        check_coverage(*r0_fits, grid);
        apply_group_draws(*r0_fits, out.r0, rng, grid);
    }
    if (q0_fits) {
        check_coverage(*q0_fits, grid);
        apply_group_draws(*q0_fits, out.q0, rng, grid);
    }
    return out;
}

double poisson_pooled_rate(const std::vector<RateObservation>& obs) {
    if (obs.empty()) throw DataError("pooled rate of empty observations");
    double d = 0, n = 0;
    for (const auto& o : obs) {
        d += o.deaths;
        n += o.population;
    }
    return d / n;
}

ThetaPosterior theta_posterior(const std::vector<RateObservation>& obs,
                               const NormalPrior& prior, std::size_t n_samples,
                               std::mt19937_64& rng) {
    if (obs.empty()) throw DataError("theta posterior of empty observations");
    double d_tot = 0, n_tot = 0;
    for (const auto& o : obs) {
        d_tot += o.deaths;
        n_tot += o.population;
    }
    if (d_tot <= 0) throw NumericError("theta posterior needs positive total deaths");

    const bool informative = prior.sigma > 0;
    const double prior_precision = informative ? 1.0 / (prior.sigma * prior.sigma) : 0.0;
    // log posterior (up to a constant): d*theta - n*exp(theta) - (theta-mu)^2/(2 s^2)
    const auto grad = [&](double th) {
        double g = d_tot - n_tot * std::exp(th);
        if (informative) g -= (th - prior.mu) * prior_precision;
        return g;
    };
    const auto curv = [&](double th) {
        return n_tot * std::exp(th) + prior_precision;
    };
    const auto logpost = [&](double th) {
        double v = d_tot * th - n_tot * std::exp(th);
        if (informative) v -= (th - prior.mu) * (th - prior.mu) * prior_precision / 2;
        return v;
    };

    // Strictly concave in theta, so Newton from the MLE converges fast.
    double mode = std::log(d_tot / n_tot);
    for (int it = 0; it < 100; ++it) {
        const double step = grad(mode) / curv(mode);
        mode += step;
        if (std::abs(step) < 1e-13) break;
    }
    const double mode_curv = curv(mode);
    const double sd = 1.0 / std::sqrt(mode_curv);

    constexpr std::size_t grid_points = 10000;
    const double lo = mode - 10 * sd;
    const double step = 20 * sd / static_cast<double>(grid_points - 1);
    std::vector<double> cdf(grid_points);
    const double peak = logpost(mode);
    double acc = 0;
    for (std::size_t i = 0; i < grid_points; ++i) {
        acc += std::exp(logpost(lo + static_cast<double>(i) * step) - peak);
        cdf[i] = acc;
    }
    for (double& c : cdf) c /= acc;

    ThetaPosterior out;
    out.mode = mode;
    out.curvature = mode_curv;
    out.samples.reserve(n_samples);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double u = unif(rng);
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        const std::size_t i = static_cast<std::size_t>(it - cdf.begin());
        const double c_hi = cdf[i];
        const double c_lo = i > 0 ? cdf[i - 1] : 0.0;
        const double frac = c_hi > c_lo ? (u - c_lo) / (c_hi - c_lo) : 0.5;
        out.samples.push_back(lo + (static_cast<double>(i) + frac) * step);
    }
    return out;
}

}  // namespace radrisk
