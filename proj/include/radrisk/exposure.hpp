#pragma once

#include <random>
#include <vector>

#include "radrisk/age_grid.hpp"

namespace radrisk {

// Annual radon-progeny exposure by age: wlm[t] in working level months,
// rate_wl[t] the matching exposure-rate in working levels. Risk only responds
// to exposure at least `latency` years in the past.
struct ExposureHistory {
    std::vector<double> wlm;
    std::vector<double> rate_wl;
    int latency = 5;
};

// Constant occupational scenario: annual_wlm per year over [age_from, age_to]
// inclusive. The exposure rate assumes the dose is spread over
// months_per_year working months.
struct ScenarioSpec {
    double annual_wlm = 2.0;
    int age_from = 18;
    int age_to = 64;
    // sigma > 0 switches sampled scenarios to log-normal annual exposures
    // with mean annual_wlm.
    double sigma = 0.0;
    double months_per_year = 12.0;
    int latency = 5;
};

ExposureHistory occupational_scenario(const ScenarioSpec& spec, const AgeGrid& grid = {});

// Cumulative lagged exposure W(t) = sum of wlm[u] over u <= t - latency.
double cumulative_exposure(const ExposureHistory& h, int t);

// Age at the median of the lagged cumulative exposure (AME) and time since it
// (TME = t - AME). The median is linearly interpolated within the crossing
// year; if the half-exposure point falls exactly on a year boundary, AME is
// the midpoint between that year and the next exposed year.
struct AmeTme {
    double ame;
    double tme;
};
AmeTme ame_tme(const ExposureHistory& h, int t);  // requires W(t) > 0

// Lagged exposure split by time-since-exposure windows (years before t):
// [5,14], [15,24], [25,34], 35+. The windows partition W(t) when latency = 5.
struct WindowExposures {
    double w5_14 = 0;
    double w15_24 = 0;
    double w25_34 = 0;
    double w35p = 0;

    double w25p() const { return w25_34 + w35p; }
    double total() const { return w5_14 + w15_24 + w25_34 + w35p; }
};
WindowExposures window_exposures(const ExposureHistory& h, int t);

// Random scenario with annual exposures drawn log-normally with mean
// spec.annual_wlm and log-scale sigma (sigma = 0 degenerates to the constant
// scenario).
ExposureHistory sample_exposure_history(const ScenarioSpec& spec, const AgeGrid& grid,
                                        std::mt19937_64& rng);

}  // namespace radrisk
