#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "vaclab/errors.hpp"
#include "vaclab/math.hpp"
#include "vaclab/rng.hpp"
#include "vaclab/staircase.hpp"

using namespace vaclab;

TEST_CASE("one correct answer leaves the level alone") {
    Staircase s(StaircaseConfig{});
    CHECK(s.level() == 1.0);
    s.update(true);
    CHECK(s.level() == 1.0);  // waiting for the second correct
}

TEST_CASE("two consecutive corrects step down, one error steps up") {
    Staircase s(StaircaseConfig{});
    s.update(true);
    s.update(true);
    CHECK(s.level() == doctest::Approx(0.794).epsilon(1e-12));
    s.update(false);
    CHECK(s.level() == doctest::Approx(0.794 * 1.26).epsilon(1e-12));
}

TEST_CASE("correct-error-correct-correct still requires two in a row") {
    Staircase s(StaircaseConfig{});
    s.update(true);
    s.update(false);  // resets the pair counter and moves up
    const double after_error = s.level();
    CHECK(after_error == doctest::Approx(1.26));
    s.update(true);
    CHECK(s.level() == after_error);
    s.update(true);
    CHECK(s.level() == doctest::Approx(1.26 * 0.794));
}

TEST_CASE("reversals are logged on direction changes and stop the run") {
    StaircaseConfig cfg;
    cfg.stop_reversals = 2;
    Staircase s(cfg);
    s.update(false);  // up
    CHECK(s.reversals() == 0);
    s.update(true);
    s.update(true);  // down: first reversal
    CHECK(s.reversals() == 1);
    CHECK(!s.done());
    s.update(false);  // up: second reversal
    CHECK(s.reversals() == 2);
    CHECK(s.done());
}

TEST_CASE("levels are clamped to the configured range") {
    StaircaseConfig cfg;
    cfg.start_level = 1.0;
    cfg.min_level = 0.5;
    cfg.max_level = 2.0;
    Staircase s(cfg);
    for (int i = 0; i < 20; ++i) s.update(false);
    CHECK(s.level() == 2.0);
}

TEST_CASE("config validation") {
    StaircaseConfig bad;
    bad.up_factor = 0.9;
    CHECK_THROWS_AS(Staircase{bad}, DomainError);
    bad = StaircaseConfig{};
    bad.down_factor = 1.1;
    CHECK_THROWS_AS(Staircase{bad}, DomainError);
    bad = StaircaseConfig{};
    bad.start_level = 0.0;
    CHECK_THROWS_AS(Staircase{bad}, DomainError);
}

TEST_CASE("staircase homes in on the 70.7% level of a synthetic observer") {
    // 1-up/2-down converges to the level with sqrt(1/2) correct probability.
    const double target_p = std::sqrt(0.5);
    Rng rng(71);
    for (double sigma : {0.2, 0.5, 1.0, 2.0}) {
        const double mu = 3.0;
        const double target_level = mu + sigma * normal_quantile(2.0 * target_p - 1.0);

        double log_estimate_sum = 0.0;
        const int runs = 200;
        for (int run = 0; run < runs; ++run) {
            StaircaseConfig cfg;
            cfg.start_level = 6.0;
            cfg.min_level = 1e-3;
            cfg.max_level = 50.0;
            Staircase s(cfg);
            while (!s.done()) {
                const double p = 0.5 + 0.5 * normal_cdf((s.level() - mu) / sigma);
                s.update(rng.bernoulli(p));
            }
            log_estimate_sum += std::log(s.reversal_mean(8));
        }
        const double estimate = std::exp(log_estimate_sum / runs);
        CHECK(std::abs(estimate - target_level) / target_level < 0.10);
    }
}
