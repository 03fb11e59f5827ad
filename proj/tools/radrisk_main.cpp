#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "radrisk/ana.hpp"
#include "radrisk/bayes.hpp"
#include "radrisk/cohort_synth.hpp"
#include "radrisk/config.hpp"
#include "radrisk/csv.hpp"
#include "radrisk/errors.hpp"
#include "radrisk/exposure.hpp"
#include "radrisk/km.hpp"
#include "radrisk/lifetime.hpp"
#include "radrisk/mortality.hpp"
#include "radrisk/rate_fit.hpp"
#include "radrisk/risk_model.hpp"
#include "radrisk/rng.hpp"
#include "radrisk/uncertainty.hpp"
#include "radrisk/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace radrisk;

namespace {

// Binds CLI flags to config keys; a flag given on the command line overrides
// the same key from the --config file.
class ConfigBinder {
  public:
    explicit ConfigBinder(CLI::App* sub) : sub_(sub), config_path_(std::make_shared<std::string>()) {
        sub->add_option("--config", *config_path_, "key = value run configuration file");
    }

    void option(const std::string& flag, const std::string& key, const std::string& help) {
        auto v = std::make_shared<std::string>();
        binds_.push_back({sub_->add_option(flag, *v, help), key, v, false});
    }

    void flag(const std::string& flag, const std::string& key, const std::string& help) {
        binds_.push_back({sub_->add_flag(flag, help), key, nullptr, true});
    }

    Config config() const {
        Config cfg;
        if (!config_path_->empty()) cfg = Config::from_file(*config_path_);
        for (const auto& b : binds_)
            if (b.opt->count() > 0) cfg.set(b.key, b.is_flag ? "true" : *b.value);
        return cfg;
    }

  private:
    struct Bind {
        CLI::Option* opt;
        std::string key;
        std::shared_ptr<std::string> value;
        bool is_flag;
    };
    CLI::App* sub_;
    std::shared_ptr<std::string> config_path_;
    std::vector<Bind> binds_;
};

void emit(const json& j, const Config& cfg) {
    const std::string text = j.dump(2) + "\n";
    std::fputs(text.c_str(), stdout);
    const std::string out = cfg.get_string("out", "");
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) throw DataError("cannot write output file: " + out);
        f << text;
    }
}

json with_provenance(json j, const Config& cfg, std::uint64_t seed, const char* command) {
    j["command"] = command;
    j["config_hash"] = cfg.hash();
    j["seed"] = seed;
    j["version"] = version;
    return j;
}

std::uint64_t required_seed(const Config& cfg) {
    if (!cfg.has("seed")) throw ConfigError("sampling needs an explicit seed");
    const long s = cfg.get_long("seed");
    if (s < 0) throw ConfigError("seed must be nonnegative");
    return static_cast<std::uint64_t>(s);
}

ScenarioSpec scenario_from(const Config& cfg) {
    ScenarioSpec s;
    s.annual_wlm = cfg.get_double("wlm", s.annual_wlm);
    s.age_from = static_cast<int>(cfg.get_long("age_from", s.age_from));
    s.age_to = static_cast<int>(cfg.get_long("age_to", s.age_to));
    s.sigma = cfg.get_double("sigma", s.sigma);
    s.months_per_year = cfg.get_double("months_per_year", s.months_per_year);
    s.latency = static_cast<int>(cfg.get_long("latency", s.latency));
    return s;
}

ExposureHistory load_exposure_csv(const fs::path& path, const ScenarioSpec& spec,
                                  const AgeGrid& grid) {
    const CsvTable csv = read_csv(path);
    const auto c_age = csv.column("age");
    const auto c_wlm = csv.column("wlm");
    const auto wl_it = std::find(csv.header.begin(), csv.header.end(), "wl");
    const bool has_wl = wl_it != csv.header.end();
    const std::size_t c_wl = has_wl ? static_cast<std::size_t>(wl_it - csv.header.begin()) : 0;

    ExposureHistory h;
    h.latency = spec.latency;
    h.wlm.assign(static_cast<std::size_t>(grid.size()), 0.0);
    h.rate_wl.assign(static_cast<std::size_t>(grid.size()), 0.0);
    for (const auto& row : csv.rows) {
        const long age = parse_long(row[c_age], "age");
        if (age < 0 || age > grid.t_max)
            throw DataError("exposure age " + std::to_string(age) + " outside the age grid");
        const double wlm = parse_double(row[c_wlm], "wlm");
        if (wlm < 0) throw DataError("negative exposure at age " + std::to_string(age));
        h.wlm[static_cast<std::size_t>(age)] = wlm;
        h.rate_wl[static_cast<std::size_t>(age)] =
            has_wl ? parse_double(row[c_wl], "wl") : wlm / spec.months_per_year;
    }
    return h;
}

ExposureHistory history_from(const Config& cfg, const ScenarioSpec& spec, const AgeGrid& grid) {
    if (cfg.has("exposure_csv")) return load_exposure_csv(cfg.get_string("exposure_csv"), spec, grid);
    return occupational_scenario(spec, grid);
}

json scenario_json(const Config& cfg, const ScenarioSpec& s) {
    if (cfg.has("exposure_csv")) return json{{"exposure_csv", cfg.get_string("exposure_csv")}};
    json j{{"annual_wlm", s.annual_wlm}, {"age_from", s.age_from}, {"age_to", s.age_to}};
    if (s.sigma > 0) j["sigma"] = s.sigma;
    return j;
}

json percent_json(const UncertaintyResult& r) {
    return json{{"estimate", 100 * r.estimate}, {"lower", 100 * r.lower}, {"upper", 100 * r.upper}};
}

void write_samples_csv(const std::string& path, const std::vector<double>& values) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write samples file: " + path);
    f << "value\n";
    char buf[64];
    for (const double v : values) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        f << buf;
    }
}

void write_density_csv(const std::string& path, const KdeResult& k) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write density file: " + path);
    f << "x,density\n";
    char buf[96];
    for (std::size_t i = 0; i < k.x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", k.x[i], k.density[i]);
        f << buf;
    }
}

void emit_sample_files(const Config& cfg, const std::vector<double>& values, json& j) {
    const std::string samples_path = cfg.get_string("emit_samples", "");
    if (!samples_path.empty()) {
        write_samples_csv(samples_path, values);
        j["samples_file"] = samples_path;
    }
    const std::string density_path = cfg.get_string("emit_density", "");
    if (!density_path.empty()) {
        const KdeResult k = kde(values);
        write_density_csv(density_path, k);
        j["density_file"] = density_path;
        j["kde_bandwidth"] = k.bandwidth;
    }
}

void run_point(const Config& cfg) {
    const AgeGrid grid;
    const MortalityTable table = load_mortality_table(cfg.get_string("table"), grid);
    const RiskModel model = load_risk_model(cfg.get_string("model"));
    const ScenarioSpec spec = scenario_from(cfg);
    const ExposureHistory h = history_from(cfg, spec, grid);
    const RiskMeasures m = risk_measures(table, model, h, grid);

    json j;
    j["model"] = model.label;
    j["table"] = table.label;
    j["scenario"] = scenario_json(cfg, spec);
    j["measures"] = {{"elr", m.elr}, {"reid", m.reid}, {"lear", m.lear}, {"rads", m.rads}};
    j["measures_percent"] = {{"elr", 100 * m.elr},
                             {"reid", 100 * m.reid},
                             {"lear", 100 * m.lear},
                             {"rads", 100 * m.rads}};
    emit(with_provenance(std::move(j), cfg, 0, "point"), cfg);
}

VaryFlags vary_from(const Config& cfg, const std::string& method) {
    VaryFlags v;
    if (cfg.has("vary")) {
        std::string item;
        std::istringstream in(cfg.get_string("vary"));
        while (std::getline(in, item, ',')) {
            if (item == "params")
                v.params = true;
            else if (item == "r0")
                v.r0 = true;
            else if (item == "q0")
                v.q0 = true;
            else if (item == "exposure")
                v.exposure = true;
            else
                throw ConfigError("unknown vary component '" + item +
                                  "' (expected params, r0, q0, exposure)");
        }
        return v;
    }
    if (method == "ana") {
        v.params = true;
    } else if (method == "mortality") {
        v.r0 = v.q0 = true;
    } else if (method == "joint") {
        v.params = v.r0 = v.q0 = true;
    } else if (method == "exposure-sim") {
        v.exposure = true;
    }
    return v;
}

void run_mc_method(const Config& cfg, const std::string& method) {
    const AgeGrid grid;
    const MortalityTable table = load_mortality_table(cfg.get_string("table"), grid);
    const RiskModel model = load_risk_model(cfg.get_string("model"));
    const ScenarioSpec spec = scenario_from(cfg);
    const Measure measure = measure_from_string(cfg.get_string("measure", "lear"));
    const std::uint64_t seed = required_seed(cfg);
    const long n = cfg.get_long("samples", 100000);
    if (n < 1) throw ConfigError("samples must be positive");
    const double level = cfg.get_double("level", 0.95);
    const unsigned workers = static_cast<unsigned>(cfg.get_long("workers", 0));
    const VaryFlags vary = vary_from(cfg, method);

    std::optional<RateFits> r0_fits, q0_fits;
    if (cfg.has("r0_fits")) r0_fits = load_rate_fits(cfg.get_string("r0_fits"));
    if (cfg.has("q0_fits")) q0_fits = load_rate_fits(cfg.get_string("q0_fits"));

    const SampleSet set =
        mc_distribution(model, table, spec, measure, vary, static_cast<std::size_t>(n), seed,
                        workers, r0_fits ? &*r0_fits : nullptr, q0_fits ? &*q0_fits : nullptr, grid);
    const auto [lo, hi] = percentile_interval(set.values, level);
    const ExposureHistory central = history_from(cfg, spec, grid);
    const double estimate = lifetime_measure(table, err_profile(model, central, grid), measure, grid);
    const UncertaintyResult r = make_uncertainty_result(
        estimate, lo, hi, level, IntervalMethod::percentile, set.values.size(), seed);

    json j;
    j["method"] = method;
    j["measure"] = to_string(measure);
    j["model"] = model.label;
    j["table"] = table.label;
    j["scenario"] = scenario_json(cfg, spec);
    j["result"] = to_json(r);
    j["result_percent"] = percent_json(r);
    emit_sample_files(cfg, set.values, j);
    emit(with_provenance(std::move(j), cfg, seed, "uncertainty"), cfg);
}

std::vector<double> measures_from_thetas(const RiskModel& model, const MortalityTable& table,
                                         const ExposureHistory& h, Measure measure,
                                         const std::vector<std::vector<double>>& thetas,
                                         const AgeGrid& grid) {
    RiskModel work = model;
    std::vector<double> out(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        work.theta = thetas[i];
        out[i] = lifetime_measure(table, err_profile(work, h, grid), measure, grid);
    }
    return out;
}

void run_bayes_method(const Config& cfg, const std::string& method) {
    const AgeGrid grid;
    const MortalityTable table = load_mortality_table(cfg.get_string("table"), grid);
    const RiskModel model = load_risk_model(cfg.get_string("model"));
    const ScenarioSpec spec = scenario_from(cfg);
    const ExposureHistory h = history_from(cfg, spec, grid);
    const Measure measure = measure_from_string(cfg.get_string("measure", "lear"));
    const std::uint64_t seed = required_seed(cfg);
    const long n = cfg.get_long("samples", 100000);
    if (n < 1) throw ConfigError("samples must be positive");
    const double level = cfg.get_double("level", 0.95);
    const GroupedCohort cohort = load_cohort(cfg.get_string("cohort"));

    std::vector<PriorTerm> priors;
    const std::string prior_mode = cfg.get_string("prior", "model");
    if (prior_mode == "model") {
        priors = priors_from_json(model.priors, theta_dim(model));
    } else if (prior_mode != "flat") {
        throw ConfigError("prior must be 'model' or 'flat'");
    }
    const PosteriorEvaluator posterior(model, cohort, priors);
    const std::size_t dim = posterior.dim();

    std::mt19937_64 rng = substream(seed, 0);
    std::vector<std::vector<double>> thetas;
    double acceptance_rate = -1;
    std::vector<double> mode;

    if (method == "bayes-reject") {
        if (dim != 1)
            throw ConfigError("rejection sampling is one-dimensional; use bayes-mh instead");
        double lo = 0, hi = 0;
        if (cfg.has("support")) {
            const auto bounds = cfg.get_doubles("support");
            if (bounds.size() != 2) throw ConfigError("support must be 'lo,hi'");
            lo = bounds[0];
            hi = bounds[1];
        } else if (!priors.empty() && priors[0].kind == PriorTerm::Kind::uniform) {
            lo = priors[0].a;
            hi = priors[0].b;
        } else {
            throw ConfigError("rejection sampling needs a support = lo,hi bound");
        }
        const auto target = [&posterior](double x) {
            return posterior(std::span<const double>(&x, 1));
        };
        const std::vector<double> draws =
            rejection_sample(target, lo, hi, static_cast<std::size_t>(n), rng);
        thetas.reserve(draws.size());
        for (const double d : draws) thetas.push_back({d});
        mode = maximize([&posterior](std::span<const double> t) { return posterior(t); },
                        {0.5 * (lo + hi)});
    } else {
        std::vector<double> proposal_cov;
        if (cfg.has("mh_step")) {
            auto sds = cfg.get_doubles("mh_step");
            if (sds.size() == 1) sds.assign(dim, sds[0]);
            if (sds.size() != dim)
                throw ConfigError("mh_step needs one value or one per parameter");
            proposal_cov.assign(dim * (dim + 1) / 2, 0.0);
            std::size_t pos = 0;
            for (std::size_t i = 0; i < dim; ++i) {
                pos += i;
                proposal_cov[pos] = sds[i] * sds[i];
                ++pos;
            }
        } else if (!model.covariance.empty()) {
            proposal_cov = model.covariance;
            const double scale = 2.38 * 2.38 / static_cast<double>(dim);
            for (double& c : proposal_cov) c *= scale;
        } else {
            throw ConfigError("bayes-mh needs mh_step or a model covariance for proposals");
        }
        const long burn_in = cfg.get_long("burn_in", n / 5);
        if (burn_in < 0) throw ConfigError("burn_in must be nonnegative");
        const MhResult chain = mh_sample(
            [&posterior](std::span<const double> t) { return posterior(t); }, model.theta,
            proposal_cov, static_cast<std::size_t>(n + burn_in),
            static_cast<std::size_t>(burn_in), rng);
        thetas = chain.samples;
        acceptance_rate = chain.acceptance_rate;
        mode = maximize([&posterior](std::span<const double> t) { return posterior(t); },
                        model.theta);
    }

    const std::vector<double> values =
        measures_from_thetas(model, table, h, measure, thetas, grid);
    const auto [lo, hi] = hpdi(values, level);
    RiskModel at_mode = model;
    at_mode.theta = mode;
    const double estimate =
        lifetime_measure(table, err_profile(at_mode, h, grid), measure, grid);
    const UncertaintyResult r =
        make_uncertainty_result(estimate, lo, hi, level, IntervalMethod::hpdi, values.size(), seed);

    json j;
    j["method"] = method;
    j["measure"] = to_string(measure);
    j["model"] = model.label;
    j["table"] = table.label;
    j["scenario"] = scenario_json(cfg, spec);
    j["cohort"] = cfg.get_string("cohort");
    j["prior"] = prior_mode;
    j["theta_mode"] = mode;
    if (acceptance_rate >= 0) j["acceptance_rate"] = acceptance_rate;
    j["result"] = to_json(r);
    j["result_percent"] = percent_json(r);
    emit_sample_files(cfg, values, j);
    emit(with_provenance(std::move(j), cfg, seed, "uncertainty"), cfg);
}

void run_uncertainty(const Config& cfg) {
    const std::string method = cfg.get_string("method");
    if (method == "ana" || method == "mortality" || method == "joint" ||
        method == "exposure-sim")
        run_mc_method(cfg, method);
    else if (method == "bayes-mh" || method == "bayes-reject")
        run_bayes_method(cfg, method);
    else
        throw ConfigError("unknown method '" + method +
                          "' (expected ana, mortality, joint, exposure-sim, bayes-mh, "
                          "bayes-reject)");
}

void run_fit_mortality(const Config& cfg) {
    const std::vector<RateObservation> obs = load_observations(cfg.get_string("data"));
    const RateFamily family = rate_family_from_string(cfg.get_string("family", "gamma"));
    const bool centered = cfg.get_bool("centered", false);

    std::optional<MortalityTable> table;
    RateColumn column = RateColumn::r0;
    const AgeGrid grid;
    if (centered) {
        table = load_mortality_table(cfg.get_string("table"), grid);
        const std::string col = cfg.get_string("column", "r0");
        if (col == "q0")
            column = RateColumn::q0;
        else if (col != "r0")
            throw ConfigError("column must be r0 or q0");
    }
    const RateFits fits =
        fit_observations(obs, family, centered, table ? &*table : nullptr, column, grid);

    json j = to_json(fits);
    j["observations"] = obs.size();
    j["pooled_rate"] = poisson_pooled_rate(obs);
    emit(with_provenance(std::move(j), cfg, 0, "fit-mortality"), cfg);
}

void run_synth_cohort(const Config& cfg) {
    const RiskModel model = load_risk_model(cfg.get_string("model"));
    const std::uint64_t seed = required_seed(cfg);
    CohortDesign d;
    d.n_strata = static_cast<int>(cfg.get_long("strata", d.n_strata));
    d.cells_per_stratum = static_cast<int>(cfg.get_long("cells_per_stratum", d.cells_per_stratum));
    d.py_lo = cfg.get_double("py_lo", d.py_lo);
    d.py_hi = cfg.get_double("py_hi", d.py_hi);
    d.rate_lo = cfg.get_double("rate_lo", d.rate_lo);
    d.rate_hi = cfg.get_double("rate_hi", d.rate_hi);
    d.w_lo = cfg.get_double("w_lo", d.w_lo);
    d.w_hi = cfg.get_double("w_hi", d.w_hi);
    d.ame_lo = cfg.get_double("ame_lo", d.ame_lo);
    d.ame_hi = cfg.get_double("ame_hi", d.ame_hi);
    d.tme_lo = cfg.get_double("tme_lo", d.tme_lo);
    d.tme_hi = cfg.get_double("tme_hi", d.tme_hi);
    d.n_rate_categories = static_cast<int>(cfg.get_long("rate_categories", d.n_rate_categories));
    d.emit_windows = cfg.get_bool("windows", d.emit_windows);

    const GroupedCohort cohort = generate_cohort(d, model, seed);
    const std::string out = cfg.get_string("cohort_out", "");
    if (out.empty()) throw ConfigError("synth-cohort needs a cohort_out path");
    save_cohort(out, cohort);

    double total_cases = 0;
    for (const auto& c : cohort.cells) total_cases += c.cases;
    json j;
    j["model"] = model.label;
    j["cohort_file"] = out;
    j["cells"] = cohort.cells.size();
    j["strata"] = cohort.n_strata;
    j["total_cases"] = total_cases;
    emit(with_provenance(std::move(j), cfg, seed, "synth-cohort"), cfg);
}

void run_km(const Config& cfg) {
    const std::vector<SubjectRecord> subjects = load_subjects(cfg.get_string("subjects"));
    const std::vector<double> edges =
        cfg.has("edges") ? cfg.get_doubles("edges") : std::vector<double>{};
    const double cut_age = cfg.get_double("cut_age", 85.0);
    const double level = cfg.get_double("level", 0.95);

    const StratifiedKm strat = km_by_exposure(subjects, edges);
    const std::string curves_out = cfg.get_string("curves_out", "");
    if (!curves_out.empty()) write_curves_csv(curves_out, strat.curves, level);

    json cats = json::array();
    for (const auto& curve : strat.curves) {
        const UncertaintyResult gi = greenwood_interval(curve, cut_age, level);
        cats.push_back({{"category", curve.label},
                        {"subjects", curve.n_subjects},
                        {"survival", gi.estimate},
                        {"lower", gi.lower},
                        {"upper", gi.upper}});
    }

    json j;
    j["cut_age"] = cut_age;
    j["level"] = level;
    j["categories"] = std::move(cats);
    j["empty_strata"] = strat.empty_strata;
    if (!curves_out.empty()) j["curves_file"] = curves_out;

    std::vector<std::vector<SubjectRecord>> buckets(edges.size() + 2);
    for (const auto& s : subjects) buckets[exposure_stratum(s.cumulative_wlm, edges)].push_back(s);
    const KmCurve* unexposed = nullptr;
    for (const auto& curve : strat.curves)
        if (curve.label == "0") unexposed = &curve;

    if (unexposed != nullptr && strat.curves.size() > 1) {
        json diffs = json::array();
        for (const auto& curve : strat.curves) {
            if (&curve == unexposed) continue;
            const UncertaintyResult d = naive_lear(*unexposed, curve, cut_age, level);
            const std::size_t idx = [&] {
                for (std::size_t i = 0; i < buckets.size(); ++i)
                    if (!buckets[i].empty() && exposure_stratum_label(edges, i) == curve.label)
                        return i;
                throw DataError("stratum bookkeeping lost category " + curve.label);
            }();
            const LogRankResult lr = logrank_test(buckets[0], buckets[idx]);
            diffs.push_back({{"category", curve.label},
                             {"estimate_percent", 100 * d.estimate},
                             {"lower_percent", 100 * d.lower},
                             {"upper_percent", 100 * d.upper},
                             {"logrank_chi_square", lr.chi_square},
                             {"logrank_p", lr.p_value}});
        }
        j["naive_lear"] = std::move(diffs);
    } else {
        std::fprintf(stderr,
                     "warning: need an unexposed stratum and at least one exposed stratum; "
                     "naive risk difference skipped\n");
    }
    emit(with_provenance(std::move(j), cfg, 0, "km"), cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"excess lifetime risk measures for radon-induced lung cancer"};
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);

    auto* point = app.add_subcommand("point", "Point estimates of ELR, REID, LEAR and RADS");
    auto pb = std::make_shared<ConfigBinder>(point);
    pb->option("--table", "table", "grouped mortality CSV (age_start,age_end,r0,q0)");
    pb->option("--model", "model", "risk model JSON");
    pb->option("--wlm", "wlm", "annual exposure in WLM");
    pb->option("--age-from", "age_from", "first exposed age");
    pb->option("--age-to", "age_to", "last exposed age");
    pb->option("--exposure-csv", "exposure_csv", "per-age exposure CSV (age,wlm[,wl])");
    pb->option("--out", "out", "also write the JSON result to this file");
    point->callback([pb] { run_point(pb->config()); });

    auto* unc = app.add_subcommand("uncertainty", "Uncertainty interval for one risk measure");
    auto ub = std::make_shared<ConfigBinder>(unc);
    ub->option("--method", "method",
               "ana | mortality | joint | exposure-sim | bayes-mh | bayes-reject");
    ub->option("--table", "table", "grouped mortality CSV");
    ub->option("--model", "model", "risk model JSON");
    ub->option("--measure", "measure", "elr | reid | lear | rads (default lear)");
    ub->option("--samples", "samples", "Monte Carlo sample count (default 100000)");
    ub->option("--seed", "seed", "random seed (required)");
    ub->option("--level", "level", "interval level (default 0.95)");
    ub->option("--workers", "workers", "worker threads, 0 = hardware (default 0)");
    ub->option("--vary", "vary", "override varied inputs: comma list of params,r0,q0,exposure");
    ub->option("--wlm", "wlm", "annual exposure in WLM");
    ub->option("--age-from", "age_from", "first exposed age");
    ub->option("--age-to", "age_to", "last exposed age");
    ub->option("--sigma", "sigma", "log-scale sd of annual exposures (exposure-sim)");
    ub->option("--r0-fits", "r0_fits", "fitted cause-rate JSON (mortality/joint)");
    ub->option("--q0-fits", "q0_fits", "fitted all-cause-rate JSON (mortality/joint)");
    ub->option("--cohort", "cohort", "grouped cohort CSV (bayes methods)");
    ub->option("--prior", "prior", "'model' (JSON priors) or 'flat' (default model)");
    ub->option("--support", "support", "lo,hi support for bayes-reject");
    ub->option("--mh-step", "mh_step", "proposal step sd(s) for bayes-mh");
    ub->option("--burn-in", "burn_in", "MH burn-in length (default samples/5)");
    ub->option("--emit-samples", "emit_samples", "write raw samples CSV here");
    ub->option("--emit-density", "emit_density", "write KDE curve CSV here");
    ub->option("--out", "out", "also write the JSON result to this file");
    unc->callback([ub] { run_uncertainty(ub->config()); });

    auto* fit = app.add_subcommand("fit-mortality", "Fit per-age-group rate distributions");
    auto fb = std::make_shared<ConfigBinder>(fit);
    fb->option("--data", "data", "rate observations CSV");
    fb->option("--family", "family", "gamma | lognormal (default gamma)");
    fb->flag("--centered", "centered", "recenter each group's mean to the reference table");
    fb->option("--table", "table", "reference mortality CSV (with --centered)");
    fb->option("--column", "column", "r0 | q0 target column (default r0)");
    fb->option("--out", "out", "write the fitted-distribution JSON here");
    fit->callback([fb] { run_fit_mortality(fb->config()); });

    auto* synth = app.add_subcommand("synth-cohort", "Generate a synthetic grouped cohort");
    auto sb = std::make_shared<ConfigBinder>(synth);
    sb->option("--model", "model", "risk model JSON used to generate cases");
    sb->option("--seed", "seed", "random seed (required)");
    sb->option("--cohort-out", "cohort_out", "output cohort CSV path");
    sb->option("--out", "out", "also write the JSON summary to this file");
    synth->callback([sb] { run_synth_cohort(sb->config()); });

    auto* km = app.add_subcommand("km", "Kaplan-Meier curves by exposure category");
    auto kb = std::make_shared<ConfigBinder>(km);
    kb->option("--subjects", "subjects", "subject CSV (id,exit_age,event,cumulative_wlm)");
    kb->option("--edges", "edges", "exposure category edges in WLM, comma separated");
    kb->option("--cut-age", "cut_age", "risk-difference cut age (default 85)");
    kb->option("--level", "level", "interval level (default 0.95)");
    kb->option("--curves-out", "curves_out", "write plot-ready curves CSV here");
    kb->option("--out", "out", "also write the JSON result to this file");
    km->callback([kb] { run_km(kb->config()); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config_error;
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return exit_data_error;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return exit_numeric_error;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
