#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "radrisk/uncertainty.hpp"

namespace radrisk {

// One subject of an individual-level cohort: follow-up exit age, whether the
// exit was the event (death) or censoring, and cumulative exposure.
struct SubjectRecord {
    std::string id;
    double exit_age = 0;
    bool event = false;
    double cumulative_wlm = 0;
};

std::vector<SubjectRecord> load_subjects(const std::filesystem::path& path);

struct KmStep {
    double time = 0;
    std::size_t n_at_risk = 0;
    std::size_t events = 0;
    double survival = 0;   // product-limit estimate just after this time
    double variance = 0;   // Greenwood variance at this time
};

struct KmCurve {
    std::string label;
    std::size_t n_subjects = 0;
    std::vector<KmStep> steps;
};

// Product-limit estimate. Subjects censored exactly at an event time stay in
// that event's risk set.
KmCurve km_estimate(const std::vector<SubjectRecord>& records, std::string label = "all");

// Cumulative-exposure stratum index: 0 for exactly zero exposure, then one
// stratum per [edge_{i-1}, edge_i) interval, then [last_edge, inf).
std::size_t exposure_stratum(double wlm, const std::vector<double>& edges);
std::string exposure_stratum_label(const std::vector<double>& edges, std::size_t index);

// Splits subjects into cumulative-exposure strata. Only strata with subjects
// appear in `curves`.
struct StratifiedKm {
    std::vector<KmCurve> curves;
    std::vector<std::string> empty_strata;
};

StratifiedKm km_by_exposure(const std::vector<SubjectRecord>& records,
                            const std::vector<double>& wlm_edges);

double km_survival_at(const KmCurve& curve, double t);

// Symmetric normal interval from the Greenwood variance at time t. Bounds are
// not clamped to [0,1]; CSV export clamps for display.
UncertaintyResult greenwood_interval(const KmCurve& curve, double t, double level = 0.95);

// Exploratory risk difference between survival curves at cut_age:
// S_unexposed - S_exposed, with interval [S0_lo - SE_hi, S0_hi - SE_lo].
UncertaintyResult naive_lear(const UncertaintyResult& s0, const UncertaintyResult& se);
UncertaintyResult naive_lear(const KmCurve& unexposed, const KmCurve& exposed,
                             double cut_age = 85, double level = 0.95);

struct LogRankResult {
    double chi_square = 0;
    double p_value = 1;
};

LogRankResult logrank_test(const std::vector<SubjectRecord>& group_a,
                           const std::vector<SubjectRecord>& group_b);

// Plot-ready export: category,t,n_at_risk,d,S,var,lo,hi with bounds clamped
// to [0,1].
void write_curves_csv(const std::filesystem::path& path, const std::vector<KmCurve>& curves,
                      double level = 0.95);

}  // namespace radrisk
