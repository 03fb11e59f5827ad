#pragma once

#include <vector>

#include "radrisk/age_grid.hpp"
#include "radrisk/mortality.hpp"
#include "radrisk/risk_model.hpp"

namespace radrisk {

// Baseline conditional survival S(t) = exp(-sum of q0 below t), S(0) = 1.
std::vector<double> survival_baseline(const MortalityTable& table, const AgeGrid& grid = {});

// Exposed survival: baseline decremented by the excess hazard r0 * ERR.
std::vector<double> survival_exposed(const MortalityTable& table,
                                     const std::vector<double>& err,
                                     const AgeGrid& grid = {});

enum class Measure { elr, reid, lear, rads };
Measure measure_from_string(const std::string& name);
std::string to_string(Measure m);

// Excess lifetime risk measures on the discrete age grid:
//  lear = sum r0*ERR*S          (baseline survival weighting)
//  reid = sum r0*ERR*S_exposed
//  elr  = sum r0*(1+ERR)*S_exposed - r0*S
//  rads = 1 - exp(-sum r0*ERR)
struct RiskMeasures {
    double elr = 0;
    double reid = 0;
    double lear = 0;
    double rads = 0;

    double value(Measure m) const;
};

RiskMeasures risk_measures(const MortalityTable& table, const std::vector<double>& err,
                           const AgeGrid& grid = {});
RiskMeasures risk_measures(const MortalityTable& table, const RiskModel& model,
                           const ExposureHistory& h, const AgeGrid& grid = {});

double lifetime_measure(const MortalityTable& table, const std::vector<double>& err,
                        Measure m, const AgeGrid& grid = {});

}  // namespace radrisk
