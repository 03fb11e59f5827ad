#include "radrisk/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "radrisk/ana.hpp"
#include "radrisk/csv.hpp"
#include "radrisk/errors.hpp"

namespace radrisk {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

void validate(const GroupedCohort& cohort) {
    if (cohort.cells.empty()) throw DataError("cohort has no cells");
    if (cohort.n_strata < 1) throw DataError("cohort needs at least one stratum");
    std::vector<bool> seen(static_cast<std::size_t>(cohort.n_strata), false);
    for (const auto& c : cohort.cells) {
        if (c.stratum < 1 || c.stratum > cohort.n_strata)
            throw DataError("cell " + std::to_string(c.id) + " has stratum " +
                            std::to_string(c.stratum) + " outside 1.." +
                            std::to_string(cohort.n_strata));
        if (c.person_years <= 0)
            throw DataError("cell " + std::to_string(c.id) + " needs positive person-years");
        if (c.cases < 0 || c.cases != std::floor(c.cases))
            throw DataError("cell " + std::to_string(c.id) +
                            " needs a nonnegative integer case count");
        seen[static_cast<std::size_t>(c.stratum - 1)] = true;
    }
    for (int k = 0; k < cohort.n_strata; ++k)
        if (!seen[static_cast<std::size_t>(k)])
            throw DataError("stratum " + std::to_string(k + 1) + " has no cells");
}

GroupedCohort load_cohort(const std::filesystem::path& path) {
    const CsvTable csv = read_csv(path);
    const auto c_id = csv.column("cell_id");
    const auto c_stratum = csv.column("stratum");
    const auto c_py = csv.column("person_years");
    const auto c_cases = csv.column("cases");
    const auto c_w = csv.column("W");
    const auto c_ame = csv.column("AME");
    const auto c_tme = csv.column("TME");
    const bool has_cat = std::find(csv.header.begin(), csv.header.end(), "rate_cat") !=
                         csv.header.end();
    const bool has_windows = std::find(csv.header.begin(), csv.header.end(), "w5_14") !=
                             csv.header.end();
    const std::size_t c_cat = has_cat ? csv.column("rate_cat") : 0;
    const std::size_t c_w5 = has_windows ? csv.column("w5_14") : 0;
    const std::size_t c_w15 = has_windows ? csv.column("w15_24") : 0;
    const std::size_t c_w25 = has_windows ? csv.column("w25_34") : 0;
    const std::size_t c_w35 = has_windows ? csv.column("w35p") : 0;

    GroupedCohort cohort;
    for (const auto& row : csv.rows) {
        CohortCell cell;
        cell.id = static_cast<int>(parse_long(row[c_id], "cell_id"));
        cell.stratum = static_cast<int>(parse_long(row[c_stratum], "stratum"));
        cell.person_years = parse_double(row[c_py], "person_years");
        cell.cases = parse_double(row[c_cases], "cases");
        cell.cov.W = parse_double(row[c_w], "W");
        cell.cov.ame = parse_double(row[c_ame], "AME");
        cell.cov.tme = parse_double(row[c_tme], "TME");
        if (has_cat)
            cell.cov.rate_category = static_cast<int>(parse_long(row[c_cat], "rate_cat"));
        if (has_windows) {
            cell.cov.w5_14 = parse_double(row[c_w5], "w5_14");
            cell.cov.w15_24 = parse_double(row[c_w15], "w15_24");
            cell.cov.w25_34 = parse_double(row[c_w25], "w25_34");
            cell.cov.w35p = parse_double(row[c_w35], "w35p");
            cell.cov.has_windows = true;
        }
        cohort.n_strata = std::max(cohort.n_strata, cell.stratum);
        cohort.cells.push_back(std::move(cell));
    }
    validate(cohort);
    return cohort;
}

void save_cohort(const std::filesystem::path& path, const GroupedCohort& cohort) {
    validate(cohort);
    std::ofstream out(path);
    if (!out) throw DataError("cannot write cohort file: " + path.string());
    const bool windows = !cohort.cells.empty() && cohort.cells.front().cov.has_windows;
    out << "cell_id,stratum,person_years,cases,W,AME,TME,rate_cat";
    if (windows) out << ",w5_14,w15_24,w25_34,w35p";
    out << "\n";
    char buf[512];
    for (const auto& c : cohort.cells) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.0f,%.17g,%.17g,%.17g,%d", c.id,
                      c.stratum, c.person_years, c.cases, c.cov.W, c.cov.ame, c.cov.tme,
                      c.cov.rate_category);
        out << buf;
        if (windows) {
            std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g,%.17g", c.cov.w5_14,
                          c.cov.w15_24, c.cov.w25_34, c.cov.w35p);
            out << buf;
        }
        out << "\n";
    }
}

PriorTerm PriorTerm::uniform(double lo, double hi) {
    if (hi <= lo) throw ConfigError("uniform prior needs lo < hi");
    return PriorTerm{Kind::uniform, lo, hi};
}

PriorTerm PriorTerm::gamma_mode(double shape, double mode) {
    if (shape <= 1 || mode <= 0)
        throw ConfigError("mode-parameterized gamma prior needs shape > 1 and mode > 0");
    return PriorTerm{Kind::gamma_mode, shape, mode};
}

PriorTerm PriorTerm::normal(double mean, double sd) {
    if (sd <= 0) throw ConfigError("normal prior needs sd > 0");
    return PriorTerm{Kind::normal, mean, sd};
}

PriorTerm PriorTerm::lognormal_mode(double mode, double sigma) {
    if (mode <= 0 || sigma <= 0)
        throw ConfigError("mode-parameterized log-normal prior needs mode > 0 and sigma > 0");
    return PriorTerm{Kind::lognormal_mode, mode, sigma};
}

double PriorTerm::log_density(double x) const {
    switch (kind) {
        case Kind::uniform:
            return (x >= a && x <= b) ? 0.0 : neg_inf;
        case Kind::gamma_mode: {
            if (x <= 0) return neg_inf;
            const double rate = (a - 1) / b;
            return (a - 1) * std::log(x) - rate * x;
        }
        case Kind::normal: {
            const double z = (x - a) / b;
            return -z * z / 2;
        }
        case Kind::lognormal_mode: {
            if (x <= 0) return neg_inf;
            const double mu = std::log(a) + b * b;
            const double z = (std::log(x) - mu) / b;
            return -std::log(x) - z * z / 2;
        }
    }
    return neg_inf;
}

std::vector<PriorTerm> priors_from_json(const nlohmann::json& j, std::size_t dim) {
    std::vector<PriorTerm> priors;
    if (j.is_null()) return priors;
    try {
        for (const auto& p : j) {
            const std::string kind = p.at("kind").get<std::string>();
            if (kind == "uniform")
                priors.push_back(
                    PriorTerm::uniform(p.at("lo").get<double>(), p.at("hi").get<double>()));
            else if (kind == "gamma_mode")
                priors.push_back(PriorTerm::gamma_mode(p.at("shape").get<double>(),
                                                       p.at("mode").get<double>()));
            else if (kind == "normal")
                priors.push_back(
                    PriorTerm::normal(p.at("mean").get<double>(), p.at("sd").get<double>()));
            else if (kind == "lognormal_mode")
                priors.push_back(PriorTerm::lognormal_mode(p.at("mode").get<double>(),
                                                           p.at("sigma").get<double>()));
            else
                throw ConfigError("unknown prior kind '" + kind + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad prior specification: ") + e.what());
    }
    if (!priors.empty() && priors.size() != dim)
        throw ConfigError("prior list needs one entry per model parameter (" +
                          std::to_string(dim) + ")");
    return priors;
}

double log_prior(const std::vector<PriorTerm>& priors, std::span<const double> theta) {
    if (priors.empty()) return 0.0;
    if (priors.size() != theta.size())
        throw ConfigError("prior list does not match the parameter vector");
    double lp = 0;
    for (std::size_t i = 0; i < priors.size(); ++i) {
        lp += priors[i].log_density(theta[i]);
        if (lp == neg_inf) return neg_inf;
    }
    return lp;
}

PosteriorEvaluator::PosteriorEvaluator(RiskModel model, GroupedCohort cohort,
                                       std::vector<PriorTerm> priors)
    : model_(std::move(model)), cohort_(std::move(cohort)), priors_(std::move(priors)) {
    validate(model_);
    validate(cohort_);
    if (!priors_.empty() && priors_.size() != theta_dim(model_))
        throw ConfigError("prior list needs one entry per model parameter");
    strata_cells_.assign(static_cast<std::size_t>(cohort_.n_strata), {});
    stratum_cases_.assign(static_cast<std::size_t>(cohort_.n_strata), 0.0);
    for (std::size_t i = 0; i < cohort_.cells.size(); ++i) {
        const auto k = static_cast<std::size_t>(cohort_.cells[i].stratum - 1);
        strata_cells_[k].push_back(i);
        stratum_cases_[k] += cohort_.cells[i].cases;
    }
}

double PosteriorEvaluator::operator()(std::span<const double> theta) const {
    if (theta.size() != theta_dim(model_))
        throw ConfigError("parameter vector has the wrong dimension");
    double lp = log_prior(priors_, theta);
    if (lp == neg_inf) return neg_inf;
    model_.theta.assign(theta.begin(), theta.end());

    std::vector<double> rel(cohort_.cells.size());
    for (std::size_t i = 0; i < cohort_.cells.size(); ++i) {
        const double r = 1.0 + err_cell(model_, cohort_.cells[i].cov);
        if (r <= 0) return neg_inf;
        rel[i] = r;
    }
    for (std::size_t i = 0; i < cohort_.cells.size(); ++i)
        if (cohort_.cells[i].cases > 0) lp += cohort_.cells[i].cases * std::log(rel[i]);
    for (std::size_t k = 0; k < strata_cells_.size(); ++k) {
        if (stratum_cases_[k] <= 0) continue;
        double denom = 0;
        for (const std::size_t i : strata_cells_[k])
            denom += cohort_.cells[i].person_years * rel[i];
        lp -= stratum_cases_[k] * std::log(denom);
    }
    return lp;
}

std::vector<double> rejection_sample(const std::function<double(double)>& target_log,
                                     double lo, double hi, std::size_t n,
                                     std::mt19937_64& rng) {
    if (hi <= lo) throw ConfigError("rejection sampling needs lo < hi");
    if (n == 0) throw ConfigError("rejection sampling needs n > 0");

    constexpr std::size_t grid_points = 10000;
    double peak = neg_inf;
    const double step = (hi - lo) / static_cast<double>(grid_points - 1);
    for (std::size_t i = 0; i < grid_points; ++i)
        peak = std::max(peak, target_log(lo + static_cast<double>(i) * step));
    if (peak == neg_inf)
        throw NumericError("rejection sampling target is zero on the whole support");
    const double envelope = peak + std::log(1.1);

    std::vector<double> out;
    out.reserve(n);
    std::uniform_real_distribution<double> propose(lo, hi);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::size_t proposals = 0;
    while (out.size() < n) {
        const double x = propose(rng);
        ++proposals;
        if (unif(rng) < std::exp(target_log(x) - envelope)) out.push_back(x);
        if (proposals % 100000 == 0 &&
            static_cast<double>(out.size()) < 1e-4 * static_cast<double>(proposals))
            throw NumericError("rejection sampling acceptance rate collapsed below 1e-4");
    }
    return out;
}

MhResult mh_sample(const std::function<double(std::span<const double>)>& target_log,
                   const std::vector<double>& init,
                   const std::vector<double>& proposal_cov_lower_triangle,
                   std::size_t n_total, std::size_t burn_in, std::mt19937_64& rng) {
    if (init.empty()) throw ConfigError("MH sampling needs an initial state");
    if (burn_in >= n_total) throw ConfigError("MH burn-in must be below the total length");
    const MvnSampler steps(std::vector<double>(init.size(), 0.0),
                           proposal_cov_lower_triangle);

    std::vector<double> current = init;
    double current_log = target_log(current);
    if (current_log == neg_inf)
        throw NumericError("MH initial state has zero posterior density");

    MhResult out;
    out.samples.reserve(n_total - burn_in);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::size_t accepted = 0;
    for (std::size_t it = 0; it < n_total; ++it) {
        std::vector<double> proposal = steps.draw(rng);
        for (std::size_t i = 0; i < proposal.size(); ++i) proposal[i] += current[i];
        const double proposal_log = target_log(proposal);
        if (proposal_log > current_log ||
            unif(rng) < std::exp(proposal_log - current_log)) {
            current = std::move(proposal);
            current_log = proposal_log;
            ++accepted;
        }
        if (it + 1 == 1000 && accepted == 0)
            throw NumericError("MH chain rejected all of the first 1000 proposals");
        if (it >= burn_in) out.samples.push_back(current);
    }
    out.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(n_total);
    return out;
}

std::pair<double, double> hpdi(std::vector<double> samples, double level) {
    if (samples.size() < 40) throw NumericError("HPDI needs at least 40 samples");
    if (!(level > 0 && level < 1)) throw NumericError("interval level must be in (0,1)");
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    const auto m = static_cast<std::size_t>(
        std::ceil(level * static_cast<double>(n)));
    std::size_t best = 0;
    double best_width = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + m <= n; ++i) {
        const double width = samples[i + m - 1] - samples[i];
        if (width < best_width) {
            best_width = width;
            best = i;
        }
    }
    return {samples[best], samples[best + m - 1]};
}

std::vector<double> maximize(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> init, double scale, std::size_t max_iter,
                             double tol) {
    const std::size_t d = init.size();
    if (d == 0) throw ConfigError("maximizer needs a starting point");
    const auto neg = [&](const std::vector<double>& x) { return -f(x); };

    std::vector<std::vector<double>> simplex(d + 1, init);
    for (std::size_t i = 0; i < d; ++i) {
        const double h = init[i] != 0 ? scale * std::abs(init[i]) : scale * 0.01;
        simplex[i + 1][i] += h;
    }
    std::vector<double> value(d + 1);
    for (std::size_t i = 0; i <= d; ++i) value[i] = neg(simplex[i]);

    for (std::size_t it = 0; it < max_iter; ++it) {
        std::vector<std::size_t> order(d + 1);
        for (std::size_t i = 0; i <= d; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
        const std::size_t lo = order[0], hi = order[d], next_hi = order[d - 1];
        if (std::abs(value[hi] - value[lo]) <=
            tol * (std::abs(value[lo]) + std::abs(value[hi]) + 1e-300))
            break;

        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i <= d; ++i) {
            if (i == hi) continue;
            for (std::size_t j = 0; j < d; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(d);

        const auto blend = [&](double w) {
            std::vector<double> x(d);
            for (std::size_t j = 0; j < d; ++j)
                x[j] = centroid[j] + w * (simplex[hi][j] - centroid[j]);
            return x;
        };

        std::vector<double> reflect = blend(-1.0);
        const double reflect_v = neg(reflect);
        if (reflect_v < value[lo]) {
            std::vector<double> expand = blend(-2.0);
            const double expand_v = neg(expand);
            if (expand_v < reflect_v) {
                simplex[hi] = std::move(expand);
                value[hi] = expand_v;
            } else {
                simplex[hi] = std::move(reflect);
                value[hi] = reflect_v;
            }
        } else if (reflect_v < value[next_hi]) {
            simplex[hi] = std::move(reflect);
            value[hi] = reflect_v;
        } else {
            std::vector<double> contract = blend(0.5);
            const double contract_v = neg(contract);
            if (contract_v < value[hi]) {
                simplex[hi] = std::move(contract);
                value[hi] = contract_v;
            } else {
                for (std::size_t i = 0; i <= d; ++i) {
                    if (i == lo) continue;
                    for (std::size_t j = 0; j < d; ++j)
                        simplex[i][j] = simplex[lo][j] + 0.5 * (simplex[i][j] - simplex[lo][j]);
                    value[i] = neg(simplex[i]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= d; ++i)
        if (value[i] < value[best]) best = i;
    return simplex[best];
}

}  // namespace radrisk
