#include "radrisk/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "radrisk/errors.hpp"

namespace radrisk {

double mean(std::span<const double> x) {
    if (x.empty()) throw NumericError("mean of empty sample");
    double s = 0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

static double central_moment_sum(std::span<const double> x, double m, int k) {
    double s = 0;
    for (double v : x) s += std::pow(v - m, k);
    return s;
}

double variance_sample(std::span<const double> x) {
    if (x.size() < 2) throw NumericError("sample variance needs at least 2 values");
    const double m = mean(x);
    return central_moment_sum(x, m, 2) / static_cast<double>(x.size() - 1);
}

double sd_sample(std::span<const double> x) { return std::sqrt(variance_sample(x)); }

double variance_pop(std::span<const double> x) {
    const double m = mean(x);
    return central_moment_sum(x, m, 2) / static_cast<double>(x.size());
}

double sd_pop(std::span<const double> x) { return std::sqrt(variance_pop(x)); }

double skewness(std::span<const double> x) {
    const double m = mean(x);
    const double s = sd_pop(x);
    if (s == 0) throw NumericError("skewness of zero-variance sample");
    return central_moment_sum(x, m, 3) / static_cast<double>(x.size()) / (s * s * s);
}

double excess_kurtosis(std::span<const double> x) {
    const double m = mean(x);
    const double s = sd_pop(x);
    if (s == 0) throw NumericError("kurtosis of zero-variance sample");
    return central_moment_sum(x, m, 4) / static_cast<double>(x.size()) / (s * s * s * s) - 3.0;
}

double normal_quantile(double p) {
    if (!(p > 0 && p < 1)) throw NumericError("normal quantile needs p in (0,1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double normal_cdf(double x) {
    return boost::math::cdf(boost::math::normal_distribution<double>(), x);
}

double chi_squared_sf(double x, double df) {
    if (x <= 0) return 1.0;
    return boost::math::cdf(
        boost::math::complement(boost::math::chi_squared_distribution<double>(df), x));
}

double digamma(double x) { return boost::math::digamma(x); }
double trigamma(double x) { return boost::math::trigamma(x); }

double ks_distance_normal(std::vector<double> x, double mu, double sigma) {
    if (x.empty() || sigma <= 0) throw NumericError("KS distance needs data and sigma > 0");
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = normal_cdf((x[i] - mu) / sigma);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

}  // namespace radrisk
