#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "radrisk/age_grid.hpp"
#include "radrisk/exposure.hpp"
#include "radrisk/lifetime.hpp"
#include "radrisk/mortality.hpp"
#include "radrisk/rate_fit.hpp"
#include "radrisk/risk_model.hpp"
#include "radrisk/uncertainty.hpp"

namespace radrisk {

// Lower-triangular Cholesky factor of a symmetric PSD matrix given as its
// row-major lower triangle. Semidefinite inputs get a diagonal jitter of
// 1e-12 times the largest diagonal entry; a genuinely indefinite matrix
// raises NumericError naming the offending leading minor.
std::vector<double> cholesky_lower(const std::vector<double>& lower_triangle,
                                   std::size_t dim);

struct MvnSampler {
    MvnSampler(std::vector<double> mean, const std::vector<double>& cov_lower_triangle);

    std::vector<double> draw(std::mt19937_64& rng) const;
    std::size_t dim() const { return mean_.size(); }

  private:
    std::vector<double> mean_;
    std::vector<double> chol_;  // dense row-major lower factor
};

std::vector<std::vector<double>> sample_mvn(const std::vector<double>& mean,
                                            const std::vector<double>& cov_lower_triangle,
                                            std::size_t n, std::mt19937_64& rng);

// Which inputs vary across Monte Carlo replicates.
struct VaryFlags {
    bool params = false;
    bool r0 = false;
    bool q0 = false;
    bool exposure = false;
};

struct SampleSet {
    std::vector<double> values;
    Measure measure = Measure::lear;
    std::uint64_t seed = 0;
};

// N replicates of the chosen measure. Each replicate i draws from its own
// seed-derived substream (parameters, then r0, then q0, then exposure), so
// the output is identical for any worker count.
SampleSet mc_distribution(const RiskModel& model, const MortalityTable& table,
                          const ScenarioSpec& scenario, Measure measure,
                          const VaryFlags& vary, std::size_t n, std::uint64_t seed,
                          unsigned workers = 1, const RateFits* r0_fits = nullptr,
                          const RateFits* q0_fits = nullptr, const AgeGrid& grid = {});

// Equal-tail sample interval dropping floor((1-level)/2 * n) per tail.
std::pair<double, double> percentile_interval(std::vector<double> samples, double level);

// Exposure-weighted survival constant C = sum r0(t) W(t) S(t); the linear
// model's LEAR is beta * C.
double constant_C(const MortalityTable& table, const ExposureHistory& h,
                  const AgeGrid& grid = {});

// Closed-form normal interval for the linear model: LEAR ~ N(beta*C, (se*C)^2).
UncertaintyResult analytic_linear(double beta_hat, double beta_se, double C,
                                  double level = 0.95);

struct KdeResult {
    std::vector<double> x;
    std::vector<double> density;
    double bandwidth = 0;
};

// Gaussian kernel density estimate; bandwidth 0 means Silverman's rule.
KdeResult kde(const std::vector<double>& samples, std::size_t grid_size = 512,
              double bandwidth = 0);

}  // namespace radrisk
