#include "radrisk/uncertainty.hpp"

#include "radrisk/errors.hpp"

namespace radrisk {

std::string to_string(IntervalMethod m) {
    switch (m) {
        case IntervalMethod::percentile: return "percentile";
        case IntervalMethod::hpdi: return "hpdi";
        case IntervalMethod::wald_analytic: return "wald-analytic";
        case IntervalMethod::greenwood: return "greenwood";
    }
    return "unknown";
}

double relative_uncertainty_span(double estimate, double lower, double upper) {
    if (estimate == 0)
        throw NumericError("relative uncertainty span undefined for zero estimate");
    if (upper < lower) throw NumericError("interval bounds are reversed");
    return (upper - lower) / estimate;
}

UncertaintyResult make_uncertainty_result(double estimate, double lower, double upper,
                                          double level, IntervalMethod method,
                                          std::size_t n_samples, std::uint64_t seed) {
    UncertaintyResult r;
    r.estimate = estimate;
    r.lower = lower;
    r.upper = upper;
    r.level = level;
    r.method = method;
    r.n_samples = n_samples;
    r.seed = seed;
    r.relative_span = relative_uncertainty_span(estimate, lower, upper);
    return r;
}

nlohmann::json to_json(const UncertaintyResult& r) {
    return nlohmann::json{{"estimate", r.estimate},
                          {"lower", r.lower},
                          {"upper", r.upper},
                          {"level", r.level},
                          {"method", to_string(r.method)},
                          {"n", r.n_samples},
                          {"seed", r.seed},
                          {"relative_span", r.relative_span}};
}

}  // namespace radrisk
