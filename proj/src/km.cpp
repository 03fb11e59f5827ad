#include "radrisk/km.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "radrisk/csv.hpp"
#include "radrisk/errors.hpp"
#include "radrisk/stats.hpp"

namespace radrisk {

std::vector<SubjectRecord> load_subjects(const std::filesystem::path& path) {
    const CsvTable csv = read_csv(path);
    const auto c_id = csv.column("id");
    const auto c_exit = csv.column("exit_age");
    const auto c_event = csv.column("event");
    const auto c_wlm = csv.column("cumulative_wlm");
    std::vector<SubjectRecord> out;
    out.reserve(csv.rows.size());
    for (const auto& row : csv.rows) {
        SubjectRecord s;
        s.id = row[c_id];
        s.exit_age = parse_double(row[c_exit], "exit_age");
        const long ev = parse_long(row[c_event], "event");
        if (ev != 0 && ev != 1) throw DataError("event flag must be 0 or 1");
        s.event = ev == 1;
        s.cumulative_wlm = parse_double(row[c_wlm], "cumulative_wlm");
        if (s.exit_age < 0) throw DataError("negative exit age for subject " + s.id);
        if (s.cumulative_wlm < 0) throw DataError("negative exposure for subject " + s.id);
        out.push_back(std::move(s));
    }
    return out;
}

KmCurve km_estimate(const std::vector<SubjectRecord>& records, std::string label) {
    if (records.empty()) throw DataError("empty stratum '" + label + "'");
    std::map<double, std::size_t> events;
    for (const auto& r : records)
        if (r.event) ++events[r.exit_age];

    KmCurve curve;
    curve.label = std::move(label);
    curve.n_subjects = records.size();
    double survival = 1.0;
    double greenwood = 0.0;
    for (const auto& [time, d] : events) {
        std::size_t at_risk = 0;
        for (const auto& r : records)
            if (r.exit_age >= time) ++at_risk;
        const double dn = static_cast<double>(d);
        const double nn = static_cast<double>(at_risk);
        survival *= 1.0 - dn / nn;
        if (at_risk > d)
            greenwood += dn / (nn * (nn - dn));
        KmStep step;
        step.time = time;
        step.n_at_risk = at_risk;
        step.events = d;
        step.survival = survival;
        step.variance = survival > 0 ? survival * survival * greenwood : 0.0;
        curve.steps.push_back(step);
    }
    return curve;
}

std::size_t exposure_stratum(double wlm, const std::vector<double>& edges) {
    if (wlm == 0) return 0;
    std::size_t idx = 1;
    while (idx <= edges.size() && wlm >= edges[idx - 1]) ++idx;
    return idx;
}

std::string exposure_stratum_label(const std::vector<double>& edges, std::size_t index) {
    if (index == 0) return "0";
    const auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", v);
        return std::string(buf);
    };
    if (edges.empty()) return "(0,inf)";
    if (index == 1) return "(0," + fmt(edges.front()) + ")";
    if (index <= edges.size())
        return "[" + fmt(edges[index - 2]) + "," + fmt(edges[index - 1]) + ")";
    return "[" + fmt(edges.back()) + ",inf)";
}

StratifiedKm km_by_exposure(const std::vector<SubjectRecord>& records,
                            const std::vector<double>& wlm_edges) {
    if (records.empty()) throw DataError("no subjects to stratify");
    for (std::size_t i = 0; i < wlm_edges.size(); ++i) {
        if (wlm_edges[i] <= 0 || (i > 0 && wlm_edges[i] <= wlm_edges[i - 1]))
            throw ConfigError("exposure edges must be positive and ascending");
    }
    const std::size_t n_strata = wlm_edges.size() + 2;
    std::vector<std::vector<SubjectRecord>> buckets(n_strata);
    for (const auto& r : records) buckets[exposure_stratum(r.cumulative_wlm, wlm_edges)].push_back(r);
    StratifiedKm out;
    for (std::size_t i = 0; i < n_strata; ++i) {
        const std::string name = exposure_stratum_label(wlm_edges, i);
        if (buckets[i].empty())
            out.empty_strata.push_back(name);
        else
            out.curves.push_back(km_estimate(buckets[i], name));
    }
    return out;
}

static const KmStep* step_at(const KmCurve& curve, double t) {
    const KmStep* last = nullptr;
    for (const auto& s : curve.steps) {
        if (s.time > t) break;
        last = &s;
    }
    return last;
}

double km_survival_at(const KmCurve& curve, double t) {
    const KmStep* s = step_at(curve, t);
    return s ? s->survival : 1.0;
}

UncertaintyResult greenwood_interval(const KmCurve& curve, double t, double level) {
    const KmStep* s = step_at(curve, t);
    const double survival = s ? s->survival : 1.0;
    const double variance = s ? s->variance : 0.0;
    const double z = normal_quantile((1 + level) / 2);
    const double half = z * std::sqrt(variance);
    UncertaintyResult r;
    r.estimate = survival;
    r.lower = survival - half;
    r.upper = survival + half;
    r.level = level;
    r.method = IntervalMethod::greenwood;
    r.n_samples = curve.n_subjects;
    r.relative_span = survival != 0 ? (r.upper - r.lower) / survival : 0.0;
    return r;
}

UncertaintyResult naive_lear(const UncertaintyResult& s0, const UncertaintyResult& se) {
    UncertaintyResult r;
    r.estimate = s0.estimate - se.estimate;
    r.lower = s0.lower - se.upper;
    r.upper = s0.upper - se.lower;
    r.level = s0.level;
    r.method = IntervalMethod::greenwood;
    r.n_samples = s0.n_samples + se.n_samples;
    r.relative_span = r.estimate != 0 ? (r.upper - r.lower) / r.estimate : 0.0;
    return r;
}

UncertaintyResult naive_lear(const KmCurve& unexposed, const KmCurve& exposed,
                             double cut_age, double level) {
    return naive_lear(greenwood_interval(unexposed, cut_age, level),
                      greenwood_interval(exposed, cut_age, level));
}

LogRankResult logrank_test(const std::vector<SubjectRecord>& group_a,
                           const std::vector<SubjectRecord>& group_b) {
    if (group_a.empty() || group_b.empty())
        throw DataError("log-rank test needs two nonempty groups");
    std::map<double, std::pair<std::size_t, std::size_t>> events;  // time -> (dA, dB)
    for (const auto& r : group_a)
        if (r.event) ++events[r.exit_age].first;
    for (const auto& r : group_b)
        if (r.event) ++events[r.exit_age].second;

    double observed_a = 0, expected_a = 0, variance = 0;
    for (const auto& [time, d] : events) {
        std::size_t na = 0, nb = 0;
        for (const auto& r : group_a)
            if (r.exit_age >= time) ++na;
        for (const auto& r : group_b)
            if (r.exit_age >= time) ++nb;
        const double n = static_cast<double>(na + nb);
        const double dt = static_cast<double>(d.first + d.second);
        if (n <= 1) continue;
        observed_a += static_cast<double>(d.first);
        expected_a += dt * static_cast<double>(na) / n;
        variance += dt * (static_cast<double>(na) / n) *
                    (static_cast<double>(nb) / n) * (n - dt) / (n - 1);
    }
    LogRankResult out;
    if (variance <= 0) return out;  // no comparable events: statistic 0, p 1
    const double diff = observed_a - expected_a;
    out.chi_square = diff * diff / variance;
    out.p_value = chi_squared_sf(out.chi_square, 1.0);
    return out;
}

void write_curves_csv(const std::filesystem::path& path, const std::vector<KmCurve>& curves,
                      double level) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write curve file: " + path.string());
    const double z = normal_quantile((1 + level) / 2);
    out << "category,t,n_at_risk,d,S,var,lo,hi\n";
    char buf[256];
    for (const auto& curve : curves) {
        for (const auto& s : curve.steps) {
            const double half = z * std::sqrt(s.variance);
            const double lo = std::max(0.0, s.survival - half);
            const double hi = std::min(1.0, s.survival + half);
            std::snprintf(buf, sizeof buf, "%s,%.17g,%zu,%zu,%.17g,%.17g,%.17g,%.17g\n",
                          curve.label.c_str(), s.time, s.n_at_risk, s.events, s.survival,
                          s.variance, lo, hi);
            out << buf;
        }
    }
}

}  // namespace radrisk
