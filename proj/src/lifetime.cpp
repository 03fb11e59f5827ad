#include "radrisk/lifetime.hpp"

#include <cmath>

#include "radrisk/errors.hpp"

namespace radrisk {

static void check_sizes(const MortalityTable& table, const std::vector<double>& err,
                        const AgeGrid& grid) {
    grid.validate();
    const auto n = static_cast<std::size_t>(grid.size());
    if (table.r0.size() != n || table.q0.size() != n)
        throw DataError("mortality table does not match the age grid");
    if (err.size() != n) throw DataError("ERR profile does not match the age grid");
}

std::vector<double> survival_baseline(const MortalityTable& table, const AgeGrid& grid) {
    grid.validate();
    if (table.q0.size() != static_cast<std::size_t>(grid.size()))
        throw DataError("mortality table does not match the age grid");
    std::vector<double> s(table.q0.size());
    double hazard = 0;
    for (std::size_t t = 0; t < s.size(); ++t) {
        s[t] = std::exp(-hazard);
        hazard += table.q0[t];
    }
    return s;
}

std::vector<double> survival_exposed(const MortalityTable& table,
                                     const std::vector<double>& err, const AgeGrid& grid) {
    check_sizes(table, err, grid);
    std::vector<double> s(table.q0.size());
    double hazard = 0;
    for (std::size_t t = 0; t < s.size(); ++t) {
        s[t] = std::exp(-hazard);
        hazard += table.q0[t] + table.r0[t] * err[t];
    }
    return s;
}

Measure measure_from_string(const std::string& name) {
    if (name == "elr") return Measure::elr;
    if (name == "reid") return Measure::reid;
    if (name == "lear") return Measure::lear;
    if (name == "rads") return Measure::rads;
    throw ConfigError("unknown risk measure '" + name + "'");
}

std::string to_string(Measure m) {
    switch (m) {
        case Measure::elr: return "elr";
        case Measure::reid: return "reid";
        case Measure::lear: return "lear";
        case Measure::rads: return "rads";
    }
    return "unknown";
}

double RiskMeasures::value(Measure m) const {
    switch (m) {
        case Measure::elr: return elr;
        case Measure::reid: return reid;
        case Measure::lear: return lear;
        case Measure::rads: return rads;
    }
    return 0;
}

RiskMeasures risk_measures(const MortalityTable& table, const std::vector<double>& err,
                           const AgeGrid& grid) {
    check_sizes(table, err, grid);
    RiskMeasures out;
    double base_hazard = 0;
    double excess_hazard = 0;
    for (std::size_t t = 0; t < err.size(); ++t) {
        const double s0 = std::exp(-base_hazard);
        const double se = std::exp(-base_hazard - excess_hazard);
        const double excess = table.r0[t] * err[t];
        out.lear += excess * s0;
        out.reid += excess * se;
        out.elr += table.r0[t] * (1 + err[t]) * se - table.r0[t] * s0;
        base_hazard += table.q0[t];
        excess_hazard += excess;
    }
    out.rads = 1 - std::exp(-excess_hazard);
    return out;
}

RiskMeasures risk_measures(const MortalityTable& table, const RiskModel& model,
                           const ExposureHistory& h, const AgeGrid& grid) {
    return risk_measures(table, err_profile(model, h, grid), grid);
}

double lifetime_measure(const MortalityTable& table, const std::vector<double>& err,
                        Measure m, const AgeGrid& grid) {
    return risk_measures(table, err, grid).value(m);
}

}  // namespace radrisk
