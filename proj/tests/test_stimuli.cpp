#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "vaclab/errors.hpp"
#include "vaclab/rng.hpp"
#include "vaclab/stimuli.hpp"

using namespace vaclab;

namespace {

DisplayGeometry bench_geometry() {
    DisplayGeometry g;
    g.screen_distance_m = 1.77;
    g.pixel_pitch_mm = pixel_pitch_from_diagonal_mm(23.0, 1920, 1080);
    return g;
}

// Intensity-weighted centroid x (px) of above-background pixels in a box.
double centroid_x(const Image8& img, std::uint8_t background, int x_lo, int x_hi, int y_lo,
                  int y_hi) {
    double mass = 0.0, moment = 0.0;
    for (int y = std::max(0, y_lo); y <= std::min(img.height - 1, y_hi); ++y) {
        for (int x = std::max(0, x_lo); x <= std::min(img.width - 1, x_hi); ++x) {
            const double v = static_cast<double>(img.at(x, y)) - background;
            if (v > 0.0) {
                mass += v;
                moment += v * (x + 0.5);
            }
        }
    }
    REQUIRE(mass > 0.0);
    return moment / mass;
}

}  // namespace

TEST_CASE("diamond trajectory dwells, ramps, and repeats") {
    const DiamondStimulusParams p;
    const Diopters screen{1.0 / 1.77};

    // Far dwell spans the first half second exactly.
    CHECK(diamond_relative_depth_d(p, 0.0, screen) == -0.25);
    CHECK(diamond_relative_depth_d(p, 0.49, screen) == -0.25);
    // Near dwell after the 5.5 s travel.
    CHECK(diamond_relative_depth_d(p, 6.0, screen) == 1.5);
    CHECK(diamond_relative_depth_d(p, 6.49, screen) == 1.5);
    // Mid travel is the linear blend.
    CHECK(diamond_relative_depth_d(p, 0.5 + 2.75, screen) ==
          doctest::Approx(0.625).epsilon(1e-12));

    // Period is 2 * (5.5 + 0.5) = 12 s.
    for (double t : {0.1, 1.7, 3.0, 6.2, 9.9}) {
        CHECK(diamond_relative_depth_d(p, t, screen) ==
              doctest::Approx(diamond_relative_depth_d(p, t + 12.0, screen)).epsilon(1e-9));
    }

    // Continuity: no step exceeds the ramp slope times dt.
    const double slope = (p.near_offset_d - p.far_offset_d) / p.travel_time_s;
    double prev = diamond_relative_depth_d(p, 0.0, screen);
    for (double t = 0.005; t <= 24.0; t += 0.005) {
        const double cur = diamond_relative_depth_d(p, t, screen);
        CHECK(std::abs(cur - prev) <= slope * 0.005 + 1e-12);
        prev = cur;
    }

    CHECK_THROWS_AS(diamond_relative_depth_d(p, -1.0, screen), DomainError);
}

TEST_CASE("meter-linear trajectory hits the same extremes") {
    DiamondStimulusParams p;
    p.meter_linear = true;
    const Diopters screen{1.0 / 1.77};
    CHECK(diamond_relative_depth_d(p, 0.0, screen) == -0.25);
    CHECK(diamond_relative_depth_d(p, 6.0, screen) == 1.5);
    // Midpoint differs from the diopter-linear blend but stays in range.
    const double mid = diamond_relative_depth_d(p, 0.5 + 2.75, screen);
    CHECK(mid > -0.25);
    CHECK(mid < 1.5);
    CHECK(mid != doctest::Approx(0.625).epsilon(1e-6));
}

TEST_CASE("circle windows follow the 1 s on / 2 s off cadence") {
    const DiamondStimulusParams p;
    CHECK(diamond_circles_visible(p, 0.0));
    CHECK(diamond_circles_visible(p, 0.99));
    CHECK(!diamond_circles_visible(p, 1.01));
    CHECK(!diamond_circles_visible(p, 2.9));
    CHECK(diamond_circles_visible(p, 3.0));
    CHECK(diamond_window_index(p, 0.5) == 0);
    CHECK(diamond_window_index(p, 3.5) == 1);
    CHECK(diamond_window_index(p, 7.0) == 2);
}

TEST_CASE("zero target disparity leaves all circles at the diamond depth") {
    DiamondStimulusParams p;
    p.target_disparity_arcmin = 0.0;
    const auto pair = render_diamond_frame(p, bench_geometry(), 0.0);
    const double diamond = kv_get_double(pair.meta, "diamond_disparity_arcmin");
    for (int i = 0; i < 4; ++i) {
        const std::string key = "circle_" + std::to_string(i) + "_disparity_arcmin";
        CHECK(kv_get_double(pair.meta, key) == diamond);
    }
}

TEST_CASE("near-extreme disparity matches the geometry round trip") {
    const DiamondStimulusParams p;
    const auto geom = bench_geometry();
    const auto pair = render_diamond_frame(p, geom, 6.1);  // near dwell
    const double disp = kv_get_double(pair.meta, "diamond_disparity_arcmin");
    const double absolute = kv_get_double(pair.meta, "absolute_vergence_d");
    CHECK(absolute == doctest::Approx(geom.screen_vergence().value + 1.5).epsilon(1e-12));
    CHECK(disp ==
          doctest::Approx(onscreen_disparity_arcmin(geom, 1.0 / absolute)).epsilon(1e-9));
    CHECK(distance_for_onscreen_disparity(geom, disp) ==
          doctest::Approx(1.0 / absolute).epsilon(1e-9));
}

TEST_CASE("rendering is deterministic for a fixed seed") {
    DiamondStimulusParams p;
    p.jitter_seed = 99;
    const auto a = render_diamond_frame(p, bench_geometry(), 3.2);
    const auto b = render_diamond_frame(p, bench_geometry(), 3.2);
    CHECK(a.left == b.left);
    CHECK(a.right == b.right);

    p.jitter_seed = 100;
    const auto c = render_diamond_frame(p, bench_geometry(), 3.2);
    CHECK(a.left != c.left);  // jitter actually moved
}

TEST_CASE("element centroid shifts reproduce the metadata disparities") {
    DiamondStimulusParams p;
    p.jitter_seed = 7;
    p.target_disparity_arcmin = 3.0;
    const auto geom = bench_geometry();
    const double subtense = pixel_subtense_arcmin(geom);
    const auto pair = render_diamond_frame(p, geom, 3.5);  // mid travel, window on
    REQUIRE(kv_get(pair.meta, "circles_visible") == "1");

    for (int i = 0; i < 4; ++i) {
        const std::string prefix = "circle_" + std::to_string(i);
        const double cx = kv_get_double(pair.meta, prefix + "_x_arcmin");
        const double cy = kv_get_double(pair.meta, prefix + "_y_arcmin");
        const double disp = kv_get_double(pair.meta, prefix + "_disparity_arcmin");

        auto box_centroid = [&](const Image8& img, double center_arcmin) {
            const double px_center = center_arcmin / subtense + img.width / 2.0;
            const double py_center = cy / subtense + img.height / 2.0;
            const int reach = static_cast<int>((p.circle_radius_arcmin + 3.0) / subtense);
            return centroid_x(img, p.background, static_cast<int>(px_center) - reach,
                              static_cast<int>(px_center) + reach,
                              static_cast<int>(py_center) - reach,
                              static_cast<int>(py_center) + reach);
        };
        const double shift_px = box_centroid(pair.left, cx + disp / 2.0) -
                                box_centroid(pair.right, cx - disp / 2.0);
        CHECK(std::abs(shift_px - disp / subtense) < 0.5);
    }
}

TEST_CASE("rds with zero disparity renders identical eyes") {
    RdsParams p;
    p.peak_disparity_arcmin = 0.0;
    p.base_disparity_arcmin = 0.0;
    p.seed = 5;
    const auto pair = render_rds(p, bench_geometry());
    CHECK(pair.left == pair.right);
}

TEST_CASE("opposite orientations are exact mirrors") {
    RdsParams plus;
    plus.orientation_deg = 20.0;
    plus.seed = 11;
    RdsParams minus = plus;
    minus.orientation_deg = -20.0;

    const auto a = render_rds(plus, bench_geometry());
    const auto b = render_rds(minus, bench_geometry());
    CHECK(mirror_horizontal(a.left) == b.right);
    CHECK(mirror_horizontal(a.right) == b.left);
}

TEST_CASE("mean signed dot disparity is near zero") {
    RdsParams p;
    p.seed = 13;
    p.field_size_deg = 15.9;
    p.dot_density_per_deg2 = 4.0;  // keep the dot count manageable
    const auto dots = rds_dot_layout(p);
    REQUIRE(dots.size() >= 100);
    double sum = 0.0, sum2 = 0.0;
    for (const auto& d : dots) {
        const double disp = rds_disparity_at(p, d.x_arcmin, d.y_arcmin);
        sum += disp;
        sum2 += disp * disp;
    }
    const double n = static_cast<double>(dots.size());
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(mean) < 3.0 * se);
}

TEST_CASE("rds preconditions and warnings") {
    RdsParams sparse;
    sparse.field_size_deg = 2.2;
    sparse.dot_density_per_deg2 = 1.0;  // 5 dots
    CHECK_THROWS_AS(rds_dot_layout(sparse), DomainError);

    RdsParams ambiguous;
    ambiguous.seed = 3;
    ambiguous.peak_disparity_arcmin = 20.0;  // above the 12 arcmin spacing
    const auto pair = render_rds(ambiguous, bench_geometry());
    CHECK(kv_get(pair.meta, "warning_wallpaper") == "1");

    RdsParams fine;
    fine.seed = 3;
    const auto ok = render_rds(fine, bench_geometry());
    CHECK(kv_get(ok.meta, "warning_wallpaper") == "0");
}

TEST_CASE("dof blur: in-focus depth map is the identity") {
    Rng rng(63);
    Image8 img = Image8::filled(48, 32, 0);
    for (auto& px : img.pixels) px = static_cast<std::uint8_t>(rng.below(256));
    const std::vector<double> depth(img.pixels.size(), 1.3);
    const Image8 out = render_dof_blur(img, depth, Diopters{1.3}, 4.0, 0.5);
    CHECK(out == img);
}

namespace {

// Independent gather-convolution oracle with mirrored borders and full
// kernel normalization.
double gather_oracle(const Image8& img, int x, int y, double sigma_px) {
    const int reach = std::max(1, static_cast<int>(std::ceil(3.0 * sigma_px)));
    auto mirror = [](int i, int n) {
        while (i < 0 || i >= n) {
            if (i < 0) i = -i - 1;
            if (i >= n) i = 2 * n - 1 - i;
        }
        return i;
    };
    double total = 0.0, acc = 0.0;
    for (int dy = -reach; dy <= reach; ++dy) {
        for (int dx = -reach; dx <= reach; ++dx) {
            const double g = std::exp(-0.5 * (dx * dx + dy * dy) / (sigma_px * sigma_px));
            total += g;
            acc += g * img.at(mirror(x - dx, img.width), mirror(y - dy, img.height));
        }
    }
    return acc / total;
}

}  // namespace

TEST_CASE("dof blur: uniform offset equals a constant-sigma convolution") {
    Rng rng(64);
    Image8 img = Image8::filled(40, 28, 0);
    for (auto& px : img.pixels) px = static_cast<std::uint8_t>(rng.below(256));
    const std::vector<double> depth(img.pixels.size(), 2.0);
    const Diopters fixation{1.0};
    const double pupil = 4.0;
    const double arcmin_per_px = 0.515;
    const double sigma_scale = 0.5;
    const double sigma_px =
        sigma_scale * blur_circle_arcmin(Diopters{1.0}, pupil) / arcmin_per_px;

    const Image8 out = render_dof_blur(img, depth, fixation, pupil, arcmin_per_px, sigma_scale);
    for (int y = 0; y < img.height; y += 3) {
        for (int x = 0; x < img.width; x += 3) {
            const double expect = gather_oracle(img, x, y, sigma_px);
            CHECK(std::abs(out.at(x, y) - expect) <= 1.0);
        }
    }
}

TEST_CASE("dof blur conserves image mean") {
    Rng rng(65);
    Image8 img = Image8::filled(64, 48, 0);
    for (auto& px : img.pixels) px = static_cast<std::uint8_t>(rng.below(220));
    // Smooth depth gradient; blur kernels stay well inside the frame and
    // clipping never engages.
    std::vector<double> depth(img.pixels.size());
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            depth[static_cast<std::size_t>(y) * img.width + x] = 1.3 + 0.4 * x / img.width;
        }
    }

    const Image8 out = render_dof_blur(img, depth, Diopters{1.5}, 4.0, 0.515);
    double mean_in = 0.0, mean_out = 0.0;
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        mean_in += img.pixels[i];
        mean_out += out.pixels[i];
    }
    mean_in /= static_cast<double>(img.pixels.size());
    mean_out /= static_cast<double>(img.pixels.size());
    // Energy moves but is not created; quantization is the only loss and it
    // averages out over the frame.
    CHECK(std::abs(mean_in - mean_out) < 0.05);

    // With a uniform depth offset the operator is doubly stochastic, so a
    // constant image passes through untouched.
    const Image8 flat = Image8::filled(64, 48, 77);
    const std::vector<double> uniform_depth(flat.pixels.size(), 1.9);
    const Image8 flat_out = render_dof_blur(flat, uniform_depth, Diopters{1.5}, 4.0, 0.515);
    CHECK(flat_out == flat);
}

TEST_CASE("dof blur rejects mismatched depth maps") {
    const Image8 img = Image8::filled(8, 8, 0);
    const std::vector<double> depth(10, 1.0);
    CHECK_THROWS_AS(render_dof_blur(img, depth, Diopters{1.0}, 4.0, 0.5), DomainError);
}
