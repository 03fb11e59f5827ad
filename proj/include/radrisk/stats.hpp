#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace radrisk {

double mean(std::span<const double> x);
double variance_sample(std::span<const double> x);
double sd_sample(std::span<const double> x);
// Biased (1/n) moments, as used for distribution-shape diagnostics.
double variance_pop(std::span<const double> x);
double sd_pop(std::span<const double> x);
double skewness(std::span<const double> x);
double excess_kurtosis(std::span<const double> x);

double normal_quantile(double p);
double normal_cdf(double x);
double chi_squared_sf(double x, double df);
double digamma(double x);
double trigamma(double x);

// Kolmogorov-Smirnov distance between the empirical CDF of x and
// Normal(mu, sigma).
double ks_distance_normal(std::vector<double> x, double mu, double sigma);

}  // namespace radrisk
