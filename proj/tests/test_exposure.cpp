#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "radrisk/errors.hpp"
#include "radrisk/exposure.hpp"
#include "radrisk/rng.hpp"
#include "radrisk/stats.hpp"

#include "util.hpp"

using namespace radrisk;

namespace {

ExposureHistory pulse(int age, double wlm, double wl = 0) {
    ExposureHistory h;
    h.wlm.assign(95, 0.0);
    h.rate_wl.assign(95, 0.0);
    h.wlm[static_cast<std::size_t>(age)] = wlm;
    h.rate_wl[static_cast<std::size_t>(age)] = wl;
    return h;
}

}  // namespace

TEST_CASE("occupational scenario fills the working years") {
    const ScenarioSpec spec;  // 2 WLM, ages 18-64
    const ExposureHistory h = occupational_scenario(spec);
    REQUIRE(h.wlm.size() == 95);
    CHECK(h.wlm[17] == 0.0);
    CHECK(h.wlm[18] == 2.0);
    CHECK(h.wlm[64] == 2.0);
    CHECK(h.wlm[65] == 0.0);
    CHECK(h.rate_wl[30] == doctest::Approx(2.0 / 12.0));
    CHECK(h.latency == 5);

    ScenarioSpec bad = spec;
    bad.age_to = 10;
    CHECK_THROWS_AS((void)occupational_scenario(bad), ConfigError);
    ScenarioSpec neg = spec;
    neg.annual_wlm = -1;
    CHECK_THROWS_AS((void)occupational_scenario(neg), ConfigError);
}

TEST_CASE("cumulative exposure lags by the latency") {
    const ExposureHistory h = occupational_scenario({});
    CHECK(cumulative_exposure(h, 18) == 0.0);
    CHECK(cumulative_exposure(h, 22) == 0.0);
    CHECK(cumulative_exposure(h, 23) == doctest::Approx(2.0));   // age 18 only
    CHECK(cumulative_exposure(h, 25) == doctest::Approx(6.0));   // ages 18-20
    CHECK(cumulative_exposure(h, 69) == doctest::Approx(94.0));  // all 47 years
    CHECK(cumulative_exposure(h, 94) == doctest::Approx(94.0));
}

TEST_CASE("median exposure age of the constant scenario at 70 is 41.5") {
    const ExposureHistory h = occupational_scenario({});
    const AmeTme a = ame_tme(h, 70);
    CHECK(a.ame == doctest::Approx(41.5).epsilon(1e-12));
    CHECK(a.tme == doctest::Approx(28.5).epsilon(1e-12));
}

TEST_CASE("median exposure age of a single pulse sits mid-year") {
    const ExposureHistory h = pulse(30, 10.0);
    const AmeTme a = ame_tme(h, 40);
    CHECK(a.ame == doctest::Approx(30.5).epsilon(1e-12));
    CHECK(a.tme == doctest::Approx(9.5).epsilon(1e-12));
}

TEST_CASE("median exposure age of a symmetric pair is the midpoint") {
    ExposureHistory h = pulse(20, 1.0);
    h.wlm[40] = 1.0;
    const AmeTme a = ame_tme(h, 50);
    CHECK(a.ame == doctest::Approx(30.0).epsilon(1e-12));
    CHECK(a.tme == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("median exposure age requires positive lagged exposure") {
    const ExposureHistory h = occupational_scenario({});
    CHECK_THROWS_AS((void)ame_tme(h, 20), NumericError);
}

TEST_CASE("time-since-exposure windows partition the lagged total") {
    const ExposureHistory h = occupational_scenario({});
    for (const int t : {30, 45, 60, 75, 94}) {
        const WindowExposures w = window_exposures(h, t);
        CHECK(w.total() == doctest::Approx(cumulative_exposure(h, t)).epsilon(1e-12));
    }
    // At 70 the scenario covers every window: 5-14 back = ages 56-64 (9 years),
    // 15-24 back = 46-55 (10), 25-34 back = 36-45 (10), 35+ back = 18-35 (18).
    const WindowExposures w = window_exposures(h, 70);
    CHECK(w.w5_14 == doctest::Approx(18.0));
    CHECK(w.w15_24 == doctest::Approx(20.0));
    CHECK(w.w25_34 == doctest::Approx(20.0));
    CHECK(w.w35p == doctest::Approx(36.0));
    CHECK(w.w25p() == doctest::Approx(56.0));
}

TEST_CASE("zero-sigma sampling reproduces the constant scenario") {
    const ScenarioSpec spec;
    auto rng = substream(7, 0);
    const ExposureHistory fixed = occupational_scenario(spec);
    const ExposureHistory drawn = sample_exposure_history(spec, {}, rng);
    CHECK(drawn.wlm == fixed.wlm);
    CHECK(drawn.rate_wl == fixed.rate_wl);
}

TEST_CASE("log-normal annual exposures keep the scenario mean") {
    ScenarioSpec spec;
    spec.sigma = 0.5;
    auto rng = substream(11, 0);
    std::vector<double> annual;
    for (int rep = 0; rep < 400; ++rep) {
        const ExposureHistory h = sample_exposure_history(spec, {}, rng);
        for (int age = spec.age_from; age <= spec.age_to; ++age) {
            const double w = h.wlm[static_cast<std::size_t>(age)];
            CHECK(w > 0.0);
            annual.push_back(w);
        }
    }
    // mean 2, sd = 2*sqrt(exp(sigma^2)-1) ~ 1.06; n ~ 18800 draws
    const double se = sd_sample(annual) / std::sqrt(static_cast<double>(annual.size()));
    CHECK(std::abs(mean(annual) - 2.0) < 4 * se);
}
