#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "vaclab/conditions.hpp"
#include "vaclab/errors.hpp"
#include "vaclab/rng.hpp"

using namespace vaclab;

namespace {

DisplayGeometry geometry_at(double distance_m) {
    DisplayGeometry g;
    g.screen_distance_m = distance_m;
    return g;
}

}  // namespace

TEST_CASE("accommodative demand through a spectacle lens") {
    CHECK(accommodative_demand(Diopters{2.0}, Diopters{0.0}).value == 2.0);
    // A -1 D lens at the 0.5 m screen pushes the demand to 3.0 D, the
    // vergence distance of content one diopter in front of that screen.
    CHECK(accommodative_demand(Diopters{2.0}, Diopters{-1.0}).value == 3.0);
    CHECK(accommodative_demand(Diopters{0.5}, Diopters{-1.0}).value == 1.5);
    CHECK_THROWS_AS(accommodative_demand(Diopters{0.5}, Diopters{0.5}), DomainError);
    CHECK_THROWS_AS(accommodative_demand(Diopters{0.5}, Diopters{1.0}), DomainError);
}

TEST_CASE("dynamic lens power cancels the screen-fixation gap") {
    CHECK(dynamic_lens_power(Diopters{0.565}, Diopters{0.565}).value == 0.0);
    CHECK(dynamic_lens_power(Diopters{2.065}, Diopters{0.565}).value ==
          doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(dynamic_lens_power(Diopters{0.315}, Diopters{0.565}).value ==
          doctest::Approx(0.25).epsilon(1e-12));

    Rng rng(41);
    for (int i = 0; i < 300; ++i) {
        const Diopters screen{rng.uniform(0.3, 2.5)};
        const Diopters fixation{rng.uniform(0.3, 2.5)};
        const Diopters power = dynamic_lens_power(fixation, screen);
        CHECK(accommodative_demand(screen, power).value == doctest::Approx(fixation.value).epsilon(1e-15));
    }
}

TEST_CASE("fixed lens keeps both demands at the screen") {
    const auto demands = demands_for_fixation(ViewingCondition::fixed_lens(), geometry_at(1.77),
                                              Diopters{2.065});
    CHECK(demands.left.value == doctest::Approx(1.0 / 1.77).epsilon(1e-12));
    CHECK(demands.right.value == demands.left.value);
    CHECK(!demands.left_command.has_value());
    CHECK(!demands.right_command.has_value());
}

TEST_CASE("dynamic lens yokes both demands to the fixation") {
    const auto cond = ViewingCondition::dynamic_lens(default_lens_calibration());
    const auto demands = demands_for_fixation(cond, geometry_at(1.77), Diopters{2.065});
    CHECK(demands.left.value == 2.065);
    CHECK(demands.right.value == 2.065);
    REQUIRE(demands.left_command.has_value());
    REQUIRE(demands.right_command.has_value());
    CHECK(demands.left_command->current_ma == demands.right_command->current_ma);

    // Vergence-accommodation conflict vanishes across the whole window.
    Rng rng(42);
    const auto [dmin, dmax] = default_lens_calibration().demand_range();
    for (int i = 0; i < 300; ++i) {
        const Diopters fixation{rng.uniform(dmin.value, dmax.value)};
        const auto d = demands_for_fixation(cond, geometry_at(1.77), fixation);
        CHECK(va_conflict(fixation, d.left).value < 1e-9);
        CHECK(va_conflict(fixation, d.right).value < 1e-9);
    }
}

TEST_CASE("dynamic lens range handling honors the policy") {
    const auto cond = ViewingCondition::dynamic_lens(default_lens_calibration());
    const Diopters outside{2.5};
    CHECK_THROWS_AS(demands_for_fixation(cond, geometry_at(1.77), outside, RangePolicy::Strict),
                    RangeError);
    const auto clamped = demands_for_fixation(cond, geometry_at(1.77), outside, RangePolicy::Clamp);
    CHECK(clamped.clamped);
    CHECK(clamped.left.value == doctest::Approx(1.0 / 0.48).epsilon(1e-9));
}

TEST_CASE("monovision demands at the 0.5 m screen") {
    const auto cond = ViewingCondition::monovision(Diopters{0.0}, Diopters{-1.0});
    const auto demands = demands_for_fixation(cond, geometry_at(0.5), Diopters{3.0});
    CHECK(demands.left.value == 2.0);
    CHECK(demands.right.value == 3.0);  // exactly the 3.0 D vergence distance

    // The near eye matches the stereogram distance with zero tolerance.
    CHECK(va_conflict(Diopters{3.0}, demands.right).value == 0.0);
    CHECK(va_conflict(Diopters{3.0}, demands.left).value == 1.0);
    CHECK(binocular_conflict(Diopters{3.0}, demands).value == 0.0);
}

TEST_CASE("conflict metric is a plain magnitude") {
    CHECK(va_conflict(Diopters{2.065}, Diopters{0.565}).value == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(va_conflict(Diopters{1.0}, Diopters{1.0}).value == 0.0);
    CHECK(va_conflict(Diopters{0.5}, Diopters{1.25}).value == doctest::Approx(0.75));
}

TEST_CASE("fixed-lens conflict equals the relative offset") {
    const auto fixed = ViewingCondition::fixed_lens();
    const auto geom = geometry_at(1.77);
    Rng rng(43);
    for (int i = 0; i < 300; ++i) {
        const double offset = rng.uniform(-0.25, 1.5);
        const Diopters fixation = geom.screen_vergence() + Diopters{offset};
        const auto d = demands_for_fixation(fixed, geom, fixation);
        CHECK(va_conflict(fixation, d.left).value == doctest::Approx(std::abs(offset)).epsilon(1e-12));
    }
}

TEST_CASE("monovision min-conflict never exceeds the fixed-lens conflict") {
    const auto mono = ViewingCondition::monovision(Diopters{0.0}, Diopters{-1.0});
    const auto fixed = ViewingCondition::fixed_lens();
    const auto geom = geometry_at(0.5);
    const Diopters screen = geom.screen_vergence();
    // Case analysis over a grid spanning behind-screen to well in front.
    for (double offset = -0.4; offset <= 1.6; offset += 0.02) {
        const Diopters fixation = screen + Diopters{offset};
        const auto md = demands_for_fixation(mono, geom, fixation);
        const auto fd = demands_for_fixation(fixed, geom, fixation);
        const double mono_conflict = binocular_conflict(fixation, md).value;
        const double fixed_conflict = binocular_conflict(fixation, fd).value;
        if (fixation.value >= md.left.value && fixation.value <= md.right.value) {
            // Between the two demand distances one eye is always closer.
            CHECK(mono_conflict <= fixed_conflict + 1e-12);
        } else if (fixation.value < md.left.value) {
            // Behind both demands the far eye dominates and matches fixed.
            CHECK(mono_conflict == doctest::Approx(fixed_conflict).epsilon(1e-12));
        } else {
            // Nearer than both demands the near eye wins by the full offset.
            CHECK(mono_conflict == doctest::Approx(fixed_conflict - 1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("policy evaluation is stateless") {
    const auto cond = ViewingCondition::dynamic_lens(default_lens_calibration());
    const auto geom = geometry_at(1.77);
    const auto first = demands_for_fixation(cond, geom, Diopters{1.2});
    demands_for_fixation(cond, geom, Diopters{0.4});
    const auto again = demands_for_fixation(cond, geom, Diopters{1.2});
    CHECK(first.left.value == again.left.value);
    CHECK(first.left_command->current_ma == again.left_command->current_ma);
}

TEST_CASE("command log CSV layout") {
    std::ostringstream os;
    write_command_log_csv(os, {{0.0, Eye::Left, 200.0, Diopters{1.0}},
                               {16.7, Eye::Right, 210.5, Diopters{1.1}}});
    const std::string text = os.str();
    CHECK(text.find("t_ms,eye,current_mA,demand_D\n") == 0);
    CHECK(text.find("0,left,200,1\n") != std::string::npos);
    CHECK(text.find("16.7,right,210.5,1.1\n") != std::string::npos);
}

TEST_CASE("demands_for_fixation rejects non-positive fixation") {
    CHECK_THROWS_AS(
        demands_for_fixation(ViewingCondition::fixed_lens(), geometry_at(1.77), Diopters{0.0}),
        DomainError);
}
