#include "radrisk/exposure.hpp"

#include <algorithm>
#include <cmath>

#include "radrisk/errors.hpp"

namespace radrisk {

static void validate_spec(const ScenarioSpec& spec, const AgeGrid& grid) {
    grid.validate();
    if (spec.annual_wlm < 0) throw ConfigError("annual exposure must be nonnegative");
    if (spec.sigma < 0) throw ConfigError("exposure sigma must be nonnegative");
    if (spec.months_per_year <= 0) throw ConfigError("months per year must be positive");
    if (spec.latency < 0) throw ConfigError("latency must be nonnegative");
    if (spec.age_from < 0 || spec.age_to > grid.t_max || spec.age_from > spec.age_to)
        throw ConfigError("exposure ages must satisfy 0 <= from <= to <= t_max");
}

ExposureHistory occupational_scenario(const ScenarioSpec& spec, const AgeGrid& grid) {
    validate_spec(spec, grid);
    ExposureHistory h;
    h.latency = spec.latency;
    h.wlm.assign(static_cast<std::size_t>(grid.size()), 0.0);
    h.rate_wl.assign(static_cast<std::size_t>(grid.size()), 0.0);
    for (int t = spec.age_from; t <= spec.age_to; ++t) {
        h.wlm[static_cast<std::size_t>(t)] = spec.annual_wlm;
        h.rate_wl[static_cast<std::size_t>(t)] = spec.annual_wlm / spec.months_per_year;
    }
    return h;
}

double cumulative_exposure(const ExposureHistory& h, int t) {
    const int hi = std::min(t - h.latency, static_cast<int>(h.wlm.size()) - 1);
    double w = 0;
    for (int u = 0; u <= hi; ++u) w += h.wlm[static_cast<std::size_t>(u)];
    return w;
}

AmeTme ame_tme(const ExposureHistory& h, int t) {
    const int hi = std::min(t - h.latency, static_cast<int>(h.wlm.size()) - 1);
    double total = 0;
    for (int u = 0; u <= hi; ++u) total += h.wlm[static_cast<std::size_t>(u)];
    if (total <= 0)
        throw NumericError("median exposure age undefined without lagged exposure");
    const double half = total / 2;
    double cum = 0;
    for (int u = 0; u <= hi; ++u) {
        const double wu = h.wlm[static_cast<std::size_t>(u)];
        if (wu <= 0) continue;
        if (cum + wu > half) {
            const double ame = u + (half - cum) / wu;
            return {ame, t - ame};
        }
        cum += wu;
        if (cum == half) {
            for (int v = u + 1; v <= hi; ++v) {
                if (h.wlm[static_cast<std::size_t>(v)] > 0) {
                    const double ame = (u + v) / 2.0;
                    return {ame, t - ame};
                }
            }
            const double ame = u + 0.5;
            return {ame, t - ame};
        }
    }
    const double ame = hi + 0.5;  // unreachable for consistent sums
    return {ame, t - ame};
}

WindowExposures window_exposures(const ExposureHistory& h, int t) {
    WindowExposures w;
    const int n = static_cast<int>(h.wlm.size());
    for (int u = 0; u < n; ++u) {
        const int back = t - u;
        if (back < 5) continue;
        const double wu = h.wlm[static_cast<std::size_t>(u)];
        if (back <= 14)
            w.w5_14 += wu;
        else if (back <= 24)
            w.w15_24 += wu;
        else if (back <= 34)
            w.w25_34 += wu;
        else
            w.w35p += wu;
    }
    return w;
}

ExposureHistory sample_exposure_history(const ScenarioSpec& spec, const AgeGrid& grid,
                                        std::mt19937_64& rng) {
    validate_spec(spec, grid);
    if (spec.sigma == 0 || spec.annual_wlm == 0) return occupational_scenario(spec, grid);
    ExposureHistory h;
    h.latency = spec.latency;
    h.wlm.assign(static_cast<std::size_t>(grid.size()), 0.0);
    h.rate_wl.assign(static_cast<std::size_t>(grid.size()), 0.0);
    const double mu = std::log(spec.annual_wlm) - spec.sigma * spec.sigma / 2;
    std::lognormal_distribution<double> draw(mu, spec.sigma);
    for (int t = spec.age_from; t <= spec.age_to; ++t) {
        const double w = draw(rng);
        h.wlm[static_cast<std::size_t>(t)] = w;
        h.rate_wl[static_cast<std::size_t>(t)] = w / spec.months_per_year;
    }
    return h;
}

}  // namespace radrisk
