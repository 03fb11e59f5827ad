#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace radrisk {

enum class IntervalMethod { percentile, hpdi, wald_analytic, greenwood };

std::string to_string(IntervalMethod m);

// (upper - lower) / estimate; the scale-free width used to compare intervals
// across measures. Undefined for a zero estimate.
double relative_uncertainty_span(double estimate, double lower, double upper);

struct UncertaintyResult {
    double estimate = 0;
    double lower = 0;
    double upper = 0;
    double level = 0.95;
    IntervalMethod method = IntervalMethod::percentile;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    double relative_span = 0;
};

UncertaintyResult make_uncertainty_result(double estimate, double lower, double upper,
                                          double level, IntervalMethod method,
                                          std::size_t n_samples, std::uint64_t seed);

nlohmann::json to_json(const UncertaintyResult& r);

}  // namespace radrisk
