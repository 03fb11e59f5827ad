// Acceptance gate: one test case per release criterion, each printing a single
// "criterion NN: PASS/FAIL (...)" line with its pinned tolerances.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "radrisk/ana.hpp"
#include "radrisk/bayes.hpp"
#include "radrisk/cohort_synth.hpp"
#include "radrisk/km.hpp"
#include "radrisk/lifetime.hpp"
#include "radrisk/mortality.hpp"
#include "radrisk/rate_fit.hpp"
#include "radrisk/risk_model.hpp"
#include "radrisk/stats.hpp"

#include "util.hpp"

using namespace radrisk;

namespace {

template <class... Args>
std::string fmt(const char* f, Args... args) {
    char buf[768];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("criterion %02d: %s (%s)\n", criterion, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

MortalityTable reference_table() {
    return load_mortality_table(data_dir() / "icrp103_mixed.csv");
}

double round2(double x) { return std::round(x * 100.0) / 100.0; }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cli(const std::string& args) {
    const auto root = data_dir().parent_path();
    const std::string cmd =
        "cd " + root.string() + " && " + RADRISK_CLI_PATH + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Effective sample size of a Markov chain by the initial-positive-sequence
// rule on paired autocovariances.
double chain_ess(const std::vector<double>& x) {
    const std::size_t n = x.size();
    const double m = mean(x);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = x[i] - m;
    const auto autocov = [&](std::size_t lag) {
        double s = 0;
        for (std::size_t i = 0; i + lag < n; ++i) s += d[i] * d[i + lag];
        return s / static_cast<double>(n);
    };
    const double c0 = autocov(0);
    double tau = 1.0;
    for (std::size_t t = 1; t + 1 < n && t < 4000; t += 2) {
        const double g = (autocov(t) + autocov(t + 1)) / c0;
        if (g <= 0) break;
        tau += 2 * g;
    }
    return static_cast<double>(n) / std::max(1.0, tau);
}

SubjectRecord subject(const std::string& id, double exit_age, bool event, double wlm) {
    SubjectRecord s;
    s.id = id;
    s.exit_age = exit_age;
    s.event = event;
    s.cumulative_wlm = wlm;
    return s;
}

}  // namespace

TEST_CASE("criterion 01 linear closed form on the reference scenario") {
    const MortalityTable table = reference_table();
    const ExposureHistory h = occupational_scenario({});
    const double C = constant_C(table, h);
    const double lear_pct = 100 * 0.0134 * C;
    const bool c_ok = std::abs(C - 4.27) <= 0.1 * 4.27;
    const bool lear_ok = std::abs(lear_pct - 5.72) <= 0.1 * 5.72;
    report(1, c_ok && lear_ok,
           fmt("C=%.4f vs 4.27 +/-10%%; LEAR%%=%.4f vs 5.72 +/-10%%", C, lear_pct));
    CHECK(c_ok);
    CHECK(lear_ok);
}

TEST_CASE("criterion 02 linear interval, analytic and Monte Carlo") {
    const MortalityTable table = reference_table();
    const RiskModel model = load_risk_model(data_dir() / "models/simple_linear.json");
    const double beta = model.theta[0];
    const double se = std::sqrt(model.covariance[0]);

    // published endpoints with the published C substituted
    const UncertaintyResult published = analytic_linear(beta, se, 4.27);
    const double lo2 = round2(100 * published.lower);
    const double hi2 = round2(100 * published.upper);
    const bool literal_ok = lo2 == 3.18 && hi2 == 8.22;

    // Monte Carlo percentile against the analytic interval at the engine's C
    const double C = constant_C(table, occupational_scenario({}));
    const UncertaintyResult engineC = analytic_linear(beta, se, C);
    const SampleSet mc = mc_distribution(model, table, {}, Measure::lear,
                                         {.params = true}, 100000, 20260823, 0);
    const auto [mlo, mhi] = percentile_interval(mc.values, 0.95);
    const double dlo = 100 * std::abs(mlo - engineC.lower);
    const double dhi = 100 * std::abs(mhi - engineC.upper);
    const bool mc_ok = dlo <= 0.05 && dhi <= 0.05;

    report(2, literal_ok && mc_ok,
           fmt("analytic at C=4.27 rounds to [%.2f, %.2f]%% vs published [3.18, 8.22]%% "
               "(raw %.4f, %.4f); MC n=100000 off analytic by %.4f / %.4f pp (cap 0.05)",
               lo2, hi2, 100 * published.lower, 100 * published.upper, dlo, dhi));
    CHECK(literal_ok);
    CHECK(mc_ok);
}

TEST_CASE("criterion 03 parametric point estimates") {
    const MortalityTable table = reference_table();
    const RiskModel model = load_risk_model(data_dir() / "models/parametric_sub.json");
    const RiskMeasures m = risk_measures(table, model, occupational_scenario({}));
    const double elr = 100 * m.elr, reid = 100 * m.reid, lear = 100 * m.lear,
                 rads = 100 * m.rads;
    const bool ok = std::abs(elr - 6.21) <= 0.621 && std::abs(reid - 6.45) <= 0.645 &&
                    std::abs(lear - 6.70) <= 0.670 && std::abs(rads - 8.88) <= 0.888;
    report(3, ok,
           fmt("ELR/REID/LEAR/RADS %% = %.4f/%.4f/%.4f/%.4f vs 6.21/6.45/6.70/8.88 +/-10%%",
               elr, reid, lear, rads));
    CHECK(ok);
}

TEST_CASE("criterion 04 measure ordering on randomized inputs") {
    const std::vector<std::string> names = {"simple_linear.json", "parametric_sub.json",
                                            "parametric_full_example.json",
                                            "beir6_sub_example.json", "beir6_full_example.json"};
    std::vector<RiskModel> models;
    for (const auto& n : names) models.push_back(load_risk_model(data_dir() / "models" / n));

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u01(0, 1);
    const AgeGrid grid;
    int violations = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        std::vector<double> r0(grid.size()), q0(grid.size());
        for (std::size_t t = 0; t < r0.size(); ++t) {
            q0[t] = std::exp(std::log(1e-5) + u01(rng) * (std::log(0.3) - std::log(1e-5)));
            r0[t] = q0[t] * u01(rng);
        }
        const MortalityTable table =
            make_mortality_table(std::move(r0), std::move(q0), "random");
        ScenarioSpec spec;
        spec.annual_wlm = 0.1 + 29.9 * u01(rng);
        spec.age_from = 5 + static_cast<int>(u01(rng) * 55);
        spec.age_to = spec.age_from + static_cast<int>(u01(rng) * (64 - spec.age_from + 1));
        const RiskMeasures m =
            risk_measures(table, models[rep % models.size()], occupational_scenario(spec));
        if (!(m.elr <= m.reid + 1e-12 && m.reid <= m.lear + 1e-12)) ++violations;
    }

    const MortalityTable ref = reference_table();
    bool rads_ok = true;
    for (const auto& model : models) {
        const RiskMeasures m = risk_measures(ref, model, occupational_scenario({}));
        if (!(m.rads >= m.lear - 1e-12)) rads_ok = false;
    }
    report(4, violations == 0 && rads_ok,
           fmt("%d ordering violations in 1000 randomized triples; RADS>=LEAR on all %zu "
               "reference models: %s",
               violations, models.size(), rads_ok ? "yes" : "no"));
    CHECK(violations == 0);
    CHECK(rads_ok);
}

TEST_CASE("criterion 05 gamma fit mean identity and parameter recovery") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u01(0, 1);
    double worst_rel = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 2 + static_cast<std::size_t>(u01(rng) * 298);
        std::gamma_distribution<double> g(0.5 + 4.5 * u01(rng), 1e-5 + 1e-3 * u01(rng));
        std::vector<double> x(n);
        for (auto& v : x) v = g(rng);
        const GammaParams p = fit_gamma_mle(x);
        const double rel = std::abs(p.shape / p.rate - mean(x)) / mean(x);
        worst_rel = std::max(worst_rel, rel);
    }
    const bool mean_ok = worst_rel <= 1e-12;

    std::gamma_distribution<double> g(1.74, 1.0 / 1595.66);
    std::vector<double> draws(100000);
    for (auto& v : draws) v = g(rng);
    const GammaParams p = fit_gamma_mle(draws);
    const double shape_rel = std::abs(p.shape - 1.74) / 1.74;
    const double rate_rel = std::abs(p.rate - 1595.66) / 1595.66;
    const bool recover_ok = shape_rel <= 0.03 && rate_rel <= 0.03;

    report(5, mean_ok && recover_ok,
           fmt("fitted-mean identity worst rel err %.2e (cap 1e-12); recovery of "
               "Gamma(1.74, 1595.66): shape %.4f, rate %.2f (rel %.4f / %.4f, cap 0.03)",
               worst_rel, p.shape, p.rate, shape_rel, rate_rel));
    CHECK(mean_ok);
    CHECK(recover_ok);
}

TEST_CASE("criterion 06 pooled rates reproduce the published mortality table") {
    struct Row {
        double deaths;
        double pop_millions;
        double printed_per_million;
    };
    const std::vector<Row> rows = {
        {326, 195.89, 1.66},      {777, 265.12, 2.93},      {2073, 285.62, 7.26},
        {6261, 300.78, 20.82},    {18933, 302.67, 62.55},   {46568, 293.17, 158.84},
        {93770, 274.87, 341.14},  {155584, 245.26, 634.37}, {220337, 213.69, 1031.10},
        {278720, 184.51, 1510.60}, {313580, 154.22, 2033.39}, {312099, 126.34, 2470.33},
        {238244, 86.59, 2751.36}, {134348, 61.16, 2196.53}, {21826, 8.99, 2428.93}};

    RateObservation named;
    named.deaths = rows[0].deaths;
    named.population = rows[0].pop_millions * 1e6;
    const double named_rate = poisson_pooled_rate({named});
    const bool named_ok = std::round(named_rate * 1e8) / 100.0 == 1.66;

    // the same total split over two observations pools to the identical rate
    RateObservation half = named;
    half.deaths /= 2;
    half.population /= 2;
    const bool split_ok = poisson_pooled_rate({half, half}) == named_rate;

    // Each computed rate must sit within half a printing step of the table
    // figure: the rate is printed to 0.01 per 1e6 and the person-years to
    // 0.01 million, so the admissible slack per row is
    // 0.005 + printed * 0.005 / N_millions.
    double worst_margin = 0;
    bool rows_ok = true;
    for (const auto& r : rows) {
        RateObservation o;
        o.deaths = r.deaths;
        o.population = r.pop_millions * 1e6;
        const double per_million = poisson_pooled_rate({o}) * 1e6;
        const double slack = 0.005 + r.printed_per_million * 0.005 / r.pop_millions;
        const double margin = std::abs(per_million - r.printed_per_million) / slack;
        worst_margin = std::max(worst_margin, margin);
        if (margin > 1.0) rows_ok = false;
    }

    report(6, named_ok && split_ok && rows_ok,
           fmt("326/195.89e6 -> %.2f per 1e6 (table prints 1.66, exact at rounding: %s); "
               "split pooling identical: %s; all 15 rows within their print-rounding slack "
               "(worst at %.0f%% of slack)",
               named_rate * 1e6, named_ok ? "yes" : "no", split_ok ? "yes" : "no",
               100 * worst_margin));
    CHECK(named_ok);
    CHECK(split_ok);
    CHECK(rows_ok);
}

TEST_CASE("criterion 07 Bayesian sampler properties on synthetic cohorts") {
    const MortalityTable table = reference_table();
    const RiskModel lin = load_risk_model(data_dir() / "models/simple_linear.json");
    const double beta_true = lin.theta[0];

    // (a) rejection and MH agree on the posterior mean of a fixed cohort
    CohortDesign d;
    d.n_strata = 8;
    d.cells_per_stratum = 12;
    d.py_lo = 2000;
    d.py_hi = 20000;
    d.w_hi = 100;
    const GroupedCohort fixed = generate_cohort(d, lin, 1234);
    const PosteriorEvaluator post(lin, fixed, {PriorTerm::uniform(0, 0.1)});
    const auto scalar_target = [&](double b) {
        return post(std::span<const double>(&b, 1));
    };
    std::mt19937_64 rng_r(101);
    const std::vector<double> rej = rejection_sample(scalar_target, 0, 0.1, 30000, rng_r);
    std::mt19937_64 rng_m(202);
    const MhResult mh = mh_sample([&](std::span<const double> t) { return post(t); },
                                  {beta_true}, {1e-5}, 150000, 30000, rng_m);
    std::vector<double> chain(mh.samples.size());
    for (std::size_t i = 0; i < chain.size(); ++i) chain[i] = mh.samples[i][0];
    const double mean_r = mean(rej);
    const double mean_m = mean(chain);
    const double se_r = sd_sample(rej) / std::sqrt(static_cast<double>(rej.size()));
    const double ess = chain_ess(chain);
    const double se_m = sd_sample(chain) / std::sqrt(ess);
    const double gap = std::abs(mean_r - mean_m);
    const double cap_a = 2 * std::hypot(se_r, se_m);
    const bool ok_a = gap <= cap_a;

    // (b) posterior mode recovers the generating parameter at large person-years
    CohortDesign big = d;
    big.py_lo = 1e5;
    big.py_hi = 1e6;
    const GroupedCohort rich = generate_cohort(big, lin, 555);
    const PosteriorEvaluator post_rich(lin, rich, {PriorTerm::uniform(0, 0.1)});
    const std::vector<double> mode =
        maximize([&](std::span<const double> t) { return post_rich(t); }, {0.02}, 0.01);
    const double mode_rel = std::abs(mode[0] - beta_true) / beta_true;
    const bool ok_b = mode_rel <= 0.10;

    // (c) 95% HPDI covers the generating parameter in at least 40/50 cohorts
    int covered = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const GroupedCohort c = generate_cohort(d, lin, 9000 + rep);
        const PosteriorEvaluator p(lin, c, {PriorTerm::uniform(0, 0.1)});
        const auto target = [&](double b) { return p(std::span<const double>(&b, 1)); };
        std::mt19937_64 r(4000 + rep);
        const auto [lo, hi] = hpdi(rejection_sample(target, 0, 0.1, 2000, r), 0.95);
        if (lo <= beta_true && beta_true <= hi) ++covered;
    }
    const bool ok_c = covered >= 40;

    // (d) posterior-mode LEAR walks toward the prior-implied LEAR as the
    // gamma prior on the leading parameter sharpens
    RiskModel par = load_risk_model(data_dir() / "models/parametric_sub.json");
    RiskModel gen = par;
    gen.theta = {0.062, -0.0301, -0.0755};
    CohortDesign dd;
    dd.n_strata = 20;
    dd.cells_per_stratum = 30;
    dd.py_lo = 100;
    dd.py_hi = 1500;
    dd.w_hi = 100;
    const GroupedCohort pc = generate_cohort(dd, gen, 777);
    const ExposureHistory ref = occupational_scenario({});
    RiskModel prior_model = par;
    prior_model.theta = {0.042, -0.06539, -0.07985};
    const double lear_prior = 100 * risk_measures(table, prior_model, ref).lear;
    std::vector<double> lear_modes;
    for (const double a : {2.0, 5.0, 10.0, 20.0, 50.0}) {
        const std::vector<PriorTerm> priors = {PriorTerm::gamma_mode(a, 0.042),
                                               PriorTerm::normal(-0.06539, 0.02),
                                               PriorTerm::normal(-0.07985, 0.02)};
        const PosteriorEvaluator p(par, pc, priors);
        RiskModel at_mode = par;
        at_mode.theta = maximize([&](std::span<const double> t) { return p(t); },
                                 prior_model.theta, 0.02);
        lear_modes.push_back(100 * risk_measures(table, at_mode, ref).lear);
    }
    bool ok_d = true;
    for (std::size_t i = 0; i + 1 < lear_modes.size(); ++i)
        if (std::abs(lear_modes[i + 1] - lear_prior) >= std::abs(lear_modes[i] - lear_prior))
            ok_d = false;

    report(7, ok_a && ok_b && ok_c && ok_d,
           fmt("a: |rej-MH| mean gap %.2e vs 2 combined SE %.2e; b: mode %.5f vs %.4f "
               "(rel %.3f, cap 0.10); c: HPDI covered %d/50 (need 40); d: LEAR modes "
               "%.3f/%.3f/%.3f/%.3f/%.3f -> prior-implied %.3f, monotone: %s",
               gap, cap_a, mode[0], beta_true, mode_rel, covered, lear_modes[0], lear_modes[1],
               lear_modes[2], lear_modes[3], lear_modes[4], lear_prior, ok_d ? "yes" : "no"));
    CHECK(ok_a);
    CHECK(ok_b);
    CHECK(ok_c);
    CHECK(ok_d);
}

TEST_CASE("criterion 08 highest-density intervals against equal-tail intervals") {
    std::mt19937_64 rng(81);
    std::uniform_real_distribution<double> u01(0, 1);
    const std::vector<double> levels = {0.5, 0.8, 0.9, 0.95, 0.99};
    bool width_ok = true;
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 50 + static_cast<std::size_t>(u01(rng) * 4950);
        std::vector<double> x(n);
        const int kind = rep % 3;
        std::lognormal_distribution<double> ln(0, 0.2 + 1.3 * u01(rng));
        std::normal_distribution<double> nd(u01(rng), 0.1 + u01(rng));
        std::gamma_distribution<double> gd(0.5 + 4 * u01(rng), 1.0);
        for (auto& v : x)
            v = kind == 0 ? ln(rng) : (kind == 1 ? nd(rng) : gd(rng));
        const double level = levels[rep % levels.size()];
        const auto [hlo, hhi] = hpdi(x, level);
        const auto [plo, phi] = percentile_interval(x, level);
        if (hhi - hlo > phi - plo + 1e-12) width_ok = false;
    }

    std::normal_distribution<double> nd(0, 1);
    std::vector<double> z(100000);
    for (auto& v : z) v = nd(rng);
    const auto [zlo, zhi] = hpdi(z, 0.95);
    const bool normal_ok = std::abs(zlo + 1.96) <= 0.03 && std::abs(zhi - 1.96) <= 0.03;

    report(8, width_ok && normal_ok,
           fmt("HPDI never wider than equal-tail over 30 varied sample sets: %s; "
               "HPDI of 1e5 standard normals = [%.4f, %.4f] vs [-1.96, 1.96] +/-0.03",
               width_ok ? "yes" : "no", zlo, zhi));
    CHECK(width_ok);
    CHECK(normal_ok);
}

TEST_CASE("criterion 09 product-limit variance identity and published arithmetic") {
    // no censoring, single event time, dyadic counts: bit-exact equality
    bool exact_ok = true;
    for (const auto& [n, dth] : std::vector<std::pair<int, int>>{{4, 2}, {8, 4}}) {
        std::vector<SubjectRecord> subjects;
        for (int i = 0; i < dth; ++i)
            subjects.push_back(subject("e" + std::to_string(i), 50, true, 0));
        for (int i = dth; i < n; ++i)
            subjects.push_back(subject("c" + std::to_string(i), 90, false, 0));
        const KmCurve curve = km_estimate(subjects);
        const double p = static_cast<double>(dth) / n;
        if (curve.steps[0].variance != p * (1 - p) / n) exact_ok = false;
    }

    UncertaintyResult s0;
    s0.estimate = 0.8955;
    s0.lower = 0.8828;
    s0.upper = 0.9084;
    UncertaintyResult se;
    se.estimate = 0.8312;
    se.lower = 0.8197;
    se.upper = 0.8427;
    const UncertaintyResult diff = naive_lear(s0, se);
    const bool naive_ok = std::abs(100 * diff.estimate - 6.43) <= 1e-12 &&
                          std::abs(100 * diff.lower - 4.01) <= 1e-12 &&
                          std::abs(100 * diff.upper - 8.87) <= 1e-12;

    report(9, exact_ok && naive_ok,
           fmt("Greenwood == binomial bit-exact on censoring-free dyadic cases: %s; "
               "published survival pair gives %.2f [%.2f, %.2f] vs 6.43 [4.01, 8.87]",
               exact_ok ? "yes" : "no", 100 * diff.estimate, 100 * diff.lower,
               100 * diff.upper));
    CHECK(exact_ok);
    CHECK(naive_ok);
}

TEST_CASE("criterion 10 exposure-sampling normality of the linear measure") {
    const MortalityTable table = reference_table();
    const RiskModel lin = load_risk_model(data_dir() / "models/simple_linear.json");
    ScenarioSpec spec;
    spec.sigma = 0.1;
    const SampleSet s =
        mc_distribution(lin, table, spec, Measure::lear, {.exposure = true}, 10000, 2468, 0);
    const double skew = skewness(s.values);
    const bool skew_ok = std::abs(skew) < 0.1;
    const double d_stat = ks_distance_normal(s.values, mean(s.values), sd_sample(s.values));
    const double d_scaled = d_stat * std::sqrt(10000.0);
    const bool ks_ok = d_scaled < 1.628;  // 1% critical value

    const AgeGrid grid;
    std::mt19937_64 rng(13579);
    std::vector<double> annual;
    for (int rep = 0; rep < 2000; ++rep) {
        const ExposureHistory h = sample_exposure_history(spec, grid, rng);
        for (int t = spec.age_from; t <= spec.age_to; ++t)
            annual.push_back(h.wlm[static_cast<std::size_t>(t)]);
    }
    const double m = mean(annual);
    const double mc_se = sd_sample(annual) / std::sqrt(static_cast<double>(annual.size()));
    const bool mean_ok = std::abs(m - 2.0) <= 3 * mc_se;

    report(10, skew_ok && ks_ok && mean_ok,
           fmt("skewness %.4f (cap 0.1); KS sqrt(n)*D = %.3f (1%% level cap 1.628); "
               "annual exposure mean %.5f vs 2 within 3 MC-SE (%.5f)",
               skew, d_scaled, m, 3 * mc_se));
    CHECK(skew_ok);
    CHECK(ks_ok);
    CHECK(mean_ok);
}

TEST_CASE("criterion 11 byte-identical reruns across seeds and worker counts") {
    const auto o1 = scratch_path("det_o1.json");
    const auto o2 = scratch_path("det_o2.json");
    const auto sm = scratch_path("det_samples.csv");
    bool all_ok = true;
    std::string failed;

    const auto compare = [&](const std::string& name, const std::string& run1,
                             const std::string& run2) {
        REQUIRE(cli(run1) == 0);
        const std::string j1 = slurp(o1), s1 = slurp(sm);
        REQUIRE(cli(run2) == 0);
        const bool same = slurp(o2) == j1 && slurp(sm) == s1;
        if (!same) {
            all_ok = false;
            failed += (failed.empty() ? "" : ", ") + name;
        }
    };

    const std::string ana = "uncertainty --config data/configs/ana_simple_linear.conf "
                            "--samples 5000 --emit-samples " + sm.string() + " ";
    compare("ana", ana + "--workers 1 --out " + o1.string(),
            ana + "--workers 4 --out " + o2.string());

    const std::string expo = "uncertainty --method exposure-sim --table data/icrp103_mixed.csv "
                             "--model data/models/simple_linear.json --wlm 2 --age-from 18 "
                             "--age-to 64 --sigma 0.1 --seed 33 --samples 3000 --emit-samples " +
                             sm.string() + " ";
    compare("exposure-sim", expo + "--workers 1 --out " + o1.string(),
            expo + "--workers 3 --out " + o2.string());

    const auto r0j = scratch_path("det_r0.json");
    const auto q0j = scratch_path("det_q0.json");
    REQUIRE(cli("fit-mortality --data data/who_extract_lung.csv --family gamma --centered "
                "--table data/icrp103_mixed.csv --column r0 --out " + r0j.string()) == 0);
    REQUIRE(cli("fit-mortality --data data/who_extract_allcause.csv --family lognormal "
                "--centered --table data/icrp103_mixed.csv --column q0 --out " +
                q0j.string()) == 0);
    const std::string joint = "uncertainty --method joint --table data/icrp103_mixed.csv "
                              "--model data/models/simple_linear.json --wlm 2 --age-from 18 "
                              "--age-to 64 --seed 44 --samples 2000 --r0-fits " + r0j.string() +
                              " --q0-fits " + q0j.string() + " --emit-samples " + sm.string() +
                              " ";
    compare("joint", joint + "--workers 2 --out " + o1.string(),
            joint + "--workers 5 --out " + o2.string());

    const auto cohort = scratch_path("det_cohort.csv");
    const auto cohort2 = scratch_path("det_cohort2.csv");
    const std::string synth = "synth-cohort --model data/models/simple_linear.json "
                              "--seed 21 --out ";
    REQUIRE(cli(synth + o1.string() + " --cohort-out " + cohort.string()) == 0);
    const std::string cohort_bytes = slurp(cohort);
    REQUIRE(cli(synth + o2.string() + " --cohort-out " + cohort2.string()) == 0);
    if (slurp(cohort2) != cohort_bytes) {
        all_ok = false;
        failed += (failed.empty() ? "" : ", ") + std::string("synth-cohort");
    }

    const std::string mh = "uncertainty --method bayes-mh --model "
                           "data/models/simple_linear.json --table data/icrp103_mixed.csv "
                           "--cohort " + cohort.string() + " --wlm 2 --age-from 18 --age-to 64 "
                           "--mh-step 0.003 --samples 2000 --burn-in 400 --seed 55 "
                           "--emit-samples " + sm.string() + " ";
    compare("bayes-mh", mh + "--out " + o1.string(), mh + "--out " + o2.string());

    report(11, all_ok,
           all_ok ? "ana, exposure-sim, joint, synth-cohort and bayes-mh reruns byte-identical"
                  : "mismatch in: " + failed);
    CHECK(all_ok);

    for (const auto& p : {o1, o2, sm, r0j, q0j, cohort, cohort2}) std::filesystem::remove(p);
}
