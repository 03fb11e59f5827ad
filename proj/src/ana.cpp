#include "radrisk/ana.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "radrisk/errors.hpp"
#include "radrisk/parallel.hpp"
#include "radrisk/rng.hpp"
#include "radrisk/stats.hpp"

namespace radrisk {

static std::vector<double> cholesky_attempt(const std::vector<double>& a, std::size_t dim,
                                            double jitter, std::size_t& bad_minor) {
    std::vector<double> l(dim * dim, 0.0);
    const auto at = [&](std::size_t i, std::size_t j) { return a[i * (i + 1) / 2 + j]; };
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = at(i, j);
            if (i == j) s += jitter;
            for (std::size_t k = 0; k < j; ++k) s -= l[i * dim + k] * l[j * dim + k];
            if (i == j) {
                if (s <= 0) {
                    bad_minor = i + 1;
                    return {};
                }
                l[i * dim + i] = std::sqrt(s);
            } else {
                l[i * dim + j] = s / l[j * dim + j];
            }
        }
    }
    return l;
}

std::vector<double> cholesky_lower(const std::vector<double>& lower_triangle,
                                   std::size_t dim) {
    if (lower_triangle.size() != dim * (dim + 1) / 2)
        throw NumericError("covariance lower triangle has the wrong size");
    double max_diag = 0;
    for (std::size_t i = 0; i < dim; ++i)
        max_diag = std::max(max_diag, std::abs(lower_triangle[i * (i + 1) / 2 + i]));
    std::size_t bad_minor = 0;
    auto l = cholesky_attempt(lower_triangle, dim, 0.0, bad_minor);
    if (!l.empty()) return l;
    l = cholesky_attempt(lower_triangle, dim, 1e-12 * std::max(max_diag, 1e-300), bad_minor);
    if (!l.empty()) return l;
    throw NumericError("covariance is not positive semidefinite (leading minor " +
                       std::to_string(bad_minor) + ")");
}

MvnSampler::MvnSampler(std::vector<double> mean, const std::vector<double>& cov_lower_triangle)
    : mean_(std::move(mean)), chol_(cholesky_lower(cov_lower_triangle, mean_.size())) {}

std::vector<double> MvnSampler::draw(std::mt19937_64& rng) const {
    const std::size_t d = mean_.size();
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> z(d);
    for (double& v : z) v = normal(rng);
    std::vector<double> x(mean_);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k <= i; ++k) x[i] += chol_[i * d + k] * z[k];
    return x;
}

std::vector<std::vector<double>> sample_mvn(const std::vector<double>& mean,
                                            const std::vector<double>& cov_lower_triangle,
                                            std::size_t n, std::mt19937_64& rng) {
    const MvnSampler sampler(mean, cov_lower_triangle);
    std::vector<std::vector<double>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sampler.draw(rng));
    return out;
}

SampleSet mc_distribution(const RiskModel& model, const MortalityTable& table,
                          const ScenarioSpec& scenario, Measure measure,
                          const VaryFlags& vary, std::size_t n, std::uint64_t seed,
                          unsigned workers, const RateFits* r0_fits, const RateFits* q0_fits,
                          const AgeGrid& grid) {
    grid.validate();
    validate(model);
    if (n == 0) throw ConfigError("Monte Carlo needs at least one replicate");
    if (!vary.params && !vary.r0 && !vary.q0 && !vary.exposure)
        throw ConfigError("Monte Carlo run varies nothing");
    if (vary.params && model.covariance.empty())
        throw ConfigError("varying parameters needs a model covariance");
    if (vary.r0 && !r0_fits) throw ConfigError("varying r0 needs fitted rate distributions");
    if (vary.q0 && !q0_fits) throw ConfigError("varying q0 needs fitted rate distributions");
    if (vary.exposure && scenario.sigma <= 0)
        throw ConfigError("varying exposure needs sigma > 0");

    const ExposureHistory base_history = occupational_scenario(scenario, grid);
    std::optional<MvnSampler> param_sampler;
    if (vary.params) param_sampler.emplace(model.theta, model.covariance);

    SampleSet out;
    out.measure = measure;
    out.seed = seed;
    out.values.assign(n, 0.0);

    parallel_for(n, workers, [&](std::size_t i) {
        std::mt19937_64 rng = substream(seed, i);
        RiskModel m = model;
        if (vary.params) m.theta = param_sampler->draw(rng);
        const MortalityTable* tab = &table;
        MortalityTable sampled;
        if (vary.r0 || vary.q0) {
            sampled = sample_mortality_table(table, vary.r0 ? r0_fits : nullptr,
                                             vary.q0 ? q0_fits : nullptr, rng, grid);
            tab = &sampled;
        }
        const ExposureHistory* hist = &base_history;
        ExposureHistory sampled_hist;
        if (vary.exposure) {
            sampled_hist = sample_exposure_history(scenario, grid, rng);
            hist = &sampled_hist;
        }
        out.values[i] = risk_measures(*tab, m, *hist, grid).value(measure);
    });
    return out;
}

std::pair<double, double> percentile_interval(std::vector<double> samples, double level) {
    if (samples.size() < 40)
        throw NumericError("percentile interval needs at least 40 samples");
    if (!(level > 0 && level < 1))
        throw NumericError("interval level must be in (0,1)");
    std::sort(samples.begin(), samples.end());
    const auto n = samples.size();
    const auto k = static_cast<std::size_t>(
        std::floor((1.0 - level) / 2.0 * static_cast<double>(n)));
    return {samples[k], samples[n - 1 - k]};
}

double constant_C(const MortalityTable& table, const ExposureHistory& h, const AgeGrid& grid) {
    const std::vector<double> s = survival_baseline(table, grid);
    double c = 0;
    for (int t = 0; t <= grid.t_max; ++t)
        c += table.r0[static_cast<std::size_t>(t)] * cumulative_exposure(h, t) *
             s[static_cast<std::size_t>(t)];
    return c;
}

UncertaintyResult analytic_linear(double beta_hat, double beta_se, double C, double level) {
    if (beta_se < 0 || C <= 0)
        throw NumericError("analytic interval needs se >= 0 and C > 0");
    const double z = normal_quantile((1 + level) / 2);
    const double mean = beta_hat * C;
    const double sd = beta_se * C;
    return make_uncertainty_result(mean, mean - z * sd, mean + z * sd, level,
                                   IntervalMethod::wald_analytic, 0, 0);
}

KdeResult kde(const std::vector<double>& samples, std::size_t grid_size, double bandwidth) {
    if (samples.size() < 2) throw NumericError("density estimate needs at least 2 samples");
    if (grid_size < 2) throw NumericError("density grid needs at least 2 points");
    double h = bandwidth;
    if (h <= 0) {
        std::vector<double> sorted(samples);
        std::sort(sorted.begin(), sorted.end());
        const double s = sd_sample(samples);
        const auto q = [&](double p) {
            const double idx = p * static_cast<double>(sorted.size() - 1);
            const auto lo = static_cast<std::size_t>(idx);
            const double frac = idx - static_cast<double>(lo);
            const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
            return sorted[lo] * (1 - frac) + sorted[hi] * frac;
        };
        const double iqr = q(0.75) - q(0.25);
        const double spread = std::min(s, iqr / 1.34);
        if (spread <= 0) throw NumericError("density estimate degenerate: zero spread");
        h = 0.9 * spread * std::pow(static_cast<double>(samples.size()), -0.2);
    }

    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *mn - 3 * h;
    const double hi = *mx + 3 * h;
    KdeResult out;
    out.bandwidth = h;
    out.x.resize(grid_size);
    out.density.assign(grid_size, 0.0);
    const double step = (hi - lo) / static_cast<double>(grid_size - 1);
    const double norm = 1.0 / (static_cast<double>(samples.size()) * h * std::sqrt(2 * M_PI));
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double x = lo + static_cast<double>(i) * step;
        out.x[i] = x;
        double d = 0;
        for (double v : samples) {
            const double u = (x - v) / h;
            d += std::exp(-u * u / 2);
        }
        out.density[i] = d * norm;
    }
    return out;
}

}  // namespace radrisk
