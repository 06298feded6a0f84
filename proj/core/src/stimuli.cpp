#include "vaclab/stimuli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "vaclab/errors.hpp"
#include "vaclab/math.hpp"
#include "vaclab/rng.hpp"

namespace vaclab {

namespace {

// Coverage accumulator. Element coverage is combined with max so overlap
// never overshoots; the final value interpolates background -> ink.
class Canvas {
public:
    Canvas(int width, int height, double arcmin_per_px)
        : width_(width), height_(height), scale_(arcmin_per_px),
          alpha_(static_cast<std::size_t>(width) * height, 0.0) {}

    double x_of_px(int px) const { return (px + 0.5 - 0.5 * width_) * scale_; }
    double y_of_px(int py) const { return (py + 0.5 - 0.5 * height_) * scale_; }

    void draw_disc(double cx, double cy, double radius_arcmin) {
        const double pad = scale_;
        for_box(cx - radius_arcmin - pad, cx + radius_arcmin + pad, cy - radius_arcmin - pad,
                cy + radius_arcmin + pad, [&](int px, int py) {
                    const double dx = x_of_px(px) - cx;
                    const double dy = y_of_px(py) - cy;
                    const double d = std::hypot(dx, dy) - radius_arcmin;
                    blend(px, py, 0.5 - d / scale_);
                });
    }

    // Outline of a square rotated 45 degrees (an L1 ball of radius R).
    void draw_diamond_ring(double cx, double cy, double radius_arcmin, double half_line_arcmin) {
        const double reach = radius_arcmin + half_line_arcmin * 1.4142135623730951 + scale_;
        for_box(cx - reach, cx + reach, cy - reach, cy + reach, [&](int px, int py) {
            const double dx = std::abs(x_of_px(px) - cx);
            const double dy = std::abs(y_of_px(py) - cy);
            const double d =
                std::abs(dx + dy - radius_arcmin) / 1.4142135623730951 - half_line_arcmin;
            blend(px, py, 0.5 - d / scale_);
        });
    }

    Image8 compose(std::uint8_t background, std::uint8_t ink) const {
        Image8 img = Image8::filled(width_, height_, background);
        for (std::size_t i = 0; i < alpha_.size(); ++i) {
            const double v = background + alpha_[i] * (static_cast<double>(ink) - background);
            img.pixels[i] = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
        }
        return img;
    }

private:
    template <typename F>
    void for_box(double x_lo, double x_hi, double y_lo, double y_hi, F&& f) {
        const int px_lo = std::max(0, static_cast<int>(std::floor(x_lo / scale_ + 0.5 * width_)));
        const int px_hi =
            std::min(width_ - 1, static_cast<int>(std::ceil(x_hi / scale_ + 0.5 * width_)));
        const int py_lo = std::max(0, static_cast<int>(std::floor(y_lo / scale_ + 0.5 * height_)));
        const int py_hi =
            std::min(height_ - 1, static_cast<int>(std::ceil(y_hi / scale_ + 0.5 * height_)));
        for (int py = py_lo; py <= py_hi; ++py) {
            for (int px = px_lo; px <= px_hi; ++px) f(px, py);
        }
    }

    void blend(int px, int py, double coverage) {
        if (coverage <= 0.0) return;
        double& a = alpha_[static_cast<std::size_t>(py) * width_ + px];
        a = std::max(a, std::min(coverage, 1.0));
    }

    int width_, height_;
    double scale_;
    std::vector<double> alpha_;
};

}  // namespace

void save_stereo_pair(const std::string& stem, const StereoPair& pair) {
    write_pgm_file(stem + "_L.pgm", pair.left);
    write_pgm_file(stem + "_R.pgm", pair.right);
    write_pgm_file(stem + "_SBS.pgm", cross_fuse_montage(pair.left, pair.right));
    std::ofstream meta(stem + "_meta.txt");
    if (!meta) throw ConfigError("cannot open for writing: " + stem + "_meta.txt");
    write_key_values(meta, pair.meta);
}

double diamond_relative_depth_d(const DiamondStimulusParams& params, double t_s,
                                Diopters screen) {
    if (t_s < 0.0) throw DomainError("diamond trajectory: time must be non-negative");
    const double period = 2.0 * (params.travel_time_s + params.pause_s);
    double u = std::fmod(t_s, period);

    auto interpolate = [&](double from_d, double to_d, double frac) {
        if (!params.meter_linear) return from_d + (to_d - from_d) * frac;
        const double from_m = meters_from_diopters(absolute_from_relative(screen, {from_d}));
        const double to_m = meters_from_diopters(absolute_from_relative(screen, {to_d}));
        const double at_m = from_m + (to_m - from_m) * frac;
        return diopters_from_meters(at_m).value - screen.value;
    };

    if (u < params.pause_s) return params.far_offset_d;
    u -= params.pause_s;
    if (u < params.travel_time_s) {
        return interpolate(params.far_offset_d, params.near_offset_d, u / params.travel_time_s);
    }
    u -= params.travel_time_s;
    if (u < params.pause_s) return params.near_offset_d;
    u -= params.pause_s;
    return interpolate(params.near_offset_d, params.far_offset_d, u / params.travel_time_s);
}

bool diamond_circles_visible(const DiamondStimulusParams& params, double t_s) {
    return std::fmod(t_s, params.circle_period_s) < params.circle_on_s;
}

int diamond_window_index(const DiamondStimulusParams& params, double t_s) {
    return static_cast<int>(std::floor(t_s / params.circle_period_s));
}

StereoPair render_diamond_frame(const DiamondStimulusParams& params, const DisplayGeometry& geom,
                                double t_s) {
    const double subtense = pixel_subtense_arcmin(geom);
    const Diopters screen = geom.screen_vergence();
    const double rel_d = diamond_relative_depth_d(params, t_s, screen);
    const Diopters absolute = absolute_from_relative(screen, {rel_d});
    const double diamond_disp =
        onscreen_disparity_arcmin(geom, meters_from_diopters(absolute));

    const bool visible = diamond_circles_visible(params, t_s);
    const int window = diamond_window_index(params, t_s);

    Canvas left(params.width_px, params.height_px, subtense);
    Canvas right(params.width_px, params.height_px, subtense);

    auto draw_both = [&](auto&& draw) {
        draw(left, +1.0);
        draw(right, -1.0);
    };

    draw_both([&](Canvas& canvas, double eye_sign) {
        canvas.draw_diamond_ring(eye_sign * diamond_disp / 2.0, 0.0, params.diamond_radius_arcmin,
                                 params.diamond_line_arcmin / 2.0);
    });

    StereoPair out;
    kv_set(out.meta, "kind", std::string("diamond"));
    kv_set(out.meta, "t_s", t_s);
    kv_set(out.meta, "seed", static_cast<long long>(params.jitter_seed));
    kv_set(out.meta, "pixel_subtense_arcmin", subtense);
    kv_set(out.meta, "relative_depth_d", rel_d);
    kv_set(out.meta, "absolute_vergence_d", absolute.value);
    kv_set(out.meta, "diamond_disparity_arcmin", diamond_disp);
    kv_set(out.meta, "trajectory_period_s", 2.0 * (params.travel_time_s + params.pause_s));
    kv_set(out.meta, "circles_visible", static_cast<long long>(visible ? 1 : 0));
    kv_set(out.meta, "window_index", static_cast<long long>(window));
    kv_set(out.meta, "target_index", static_cast<long long>(params.target_index));

    if (visible) {
        for (int i = 0; i < params.n_circles; ++i) {
            const double angle = 2.0 * kPi * i / params.n_circles;
            Rng jitter(mix_seed(params.jitter_seed, static_cast<std::uint64_t>(window),
                                static_cast<std::uint64_t>(i)));
            const double cx = params.circle_offset_arcmin * std::sin(angle) +
                              jitter.uniform(-params.jitter_arcmin, params.jitter_arcmin);
            const double cy = -params.circle_offset_arcmin * std::cos(angle) +
                              jitter.uniform(-params.jitter_arcmin, params.jitter_arcmin);
            const double extra =
                i == params.target_index ? params.target_disparity_arcmin : 0.0;
            const double disp = diamond_disp + extra;
            draw_both([&](Canvas& canvas, double eye_sign) {
                canvas.draw_disc(cx + eye_sign * disp / 2.0, cy, params.circle_radius_arcmin);
            });
            const std::string prefix = "circle_" + std::to_string(i);
            kv_set(out.meta, prefix + "_x_arcmin", cx);
            kv_set(out.meta, prefix + "_y_arcmin", cy);
            kv_set(out.meta, prefix + "_disparity_arcmin", disp);
            kv_set(out.meta, prefix + "_relative_disparity_arcmin", extra);
        }
    }

    out.left = left.compose(params.background, 255);
    out.right = right.compose(params.background, 255);
    return out;
}

std::vector<RdsDot> rds_dot_layout(const RdsParams& params) {
    const double field_arcmin = params.field_size_deg * 60.0;
    const long n = std::lround(params.dot_density_per_deg2 * params.field_size_deg *
                               params.field_size_deg);
    if (n < 100) {
        throw DomainError("rds: dot density yields only " + std::to_string(n) +
                          " dots; at least 100 are required");
    }
    Rng rng(mix_seed(params.seed, 0x7264735fULL));
    std::vector<RdsDot> dots(static_cast<std::size_t>(n));
    const double half = field_arcmin / 2.0;
    for (auto& dot : dots) {
        dot.x_arcmin = rng.uniform(-half, half);
        dot.y_arcmin = rng.uniform(-half, half);
    }
    if (params.orientation_deg < 0.0) {
        for (auto& dot : dots) dot.x_arcmin = -dot.x_arcmin;
    }
    return dots;
}

double rds_disparity_at(const RdsParams& params, double x_arcmin, double y_arcmin) {
    // Corrugation axis: u runs perpendicular to stripes tilted
    // orientation_deg from vertical. sin/cos are built from the magnitude so
    // opposite orientations are exact mirrors.
    const double theta = std::abs(params.orientation_deg) / kDegPerRad;
    const double sign = params.orientation_deg < 0.0 ? -1.0 : 1.0;
    const double s = sign * std::sin(theta);
    const double c = std::cos(theta);
    const double u_deg = (-x_arcmin * s + y_arcmin * c) / 60.0;
    return params.base_disparity_arcmin +
           params.peak_disparity_arcmin * std::sin(2.0 * kPi * params.corrugation_freq_cpd * u_deg);
}

StereoPair render_rds(const RdsParams& params, const DisplayGeometry& geom) {
    const auto dots = rds_dot_layout(params);
    return render_rds(params, geom, dots);
}

StereoPair render_rds(const RdsParams& params, const DisplayGeometry& geom,
                      std::span<const RdsDot> dots) {
    const double subtense = pixel_subtense_arcmin(geom);
    const double field_arcmin = params.field_size_deg * 60.0;
    const double margin = params.dot_diameter_arcmin +
                          2.0 * (std::abs(params.base_disparity_arcmin) +
                                 params.peak_disparity_arcmin);
    int width = params.width_px;
    int height = params.height_px;
    if (width <= 0) width = static_cast<int>(std::ceil((field_arcmin + margin) / subtense));
    if (height <= 0) height = static_cast<int>(std::ceil((field_arcmin + margin) / subtense));

    Canvas left(width, height, subtense);
    Canvas right(width, height, subtense);
    const double radius = params.dot_diameter_arcmin / 2.0;

    double sum_disp = 0.0, sum_disp2 = 0.0;
    for (const auto& dot : dots) {
        const double disp = rds_disparity_at(params, dot.x_arcmin, dot.y_arcmin);
        sum_disp += disp;
        sum_disp2 += disp * disp;
        left.draw_disc(dot.x_arcmin + disp / 2.0, dot.y_arcmin, radius);
        right.draw_disc(dot.x_arcmin - disp / 2.0, dot.y_arcmin, radius);
    }

    const double n = static_cast<double>(dots.size());
    const double mean_disp = sum_disp / n;
    const double mean_spacing = 60.0 / std::sqrt(params.dot_density_per_deg2);

    StereoPair out;
    out.left = left.compose(params.background, params.dot_value);
    out.right = right.compose(params.background, params.dot_value);
    kv_set(out.meta, "kind", std::string("rds"));
    kv_set(out.meta, "seed", static_cast<long long>(params.seed));
    kv_set(out.meta, "orientation_deg", params.orientation_deg);
    kv_set(out.meta, "field_size_deg", params.field_size_deg);
    kv_set(out.meta, "corrugation_freq_cpd", params.corrugation_freq_cpd);
    kv_set(out.meta, "peak_disparity_arcmin", params.peak_disparity_arcmin);
    kv_set(out.meta, "base_disparity_arcmin", params.base_disparity_arcmin);
    kv_set(out.meta, "dot_density_per_deg2", params.dot_density_per_deg2);
    kv_set(out.meta, "dot_diameter_arcmin", params.dot_diameter_arcmin);
    kv_set(out.meta, "n_dots", static_cast<long long>(dots.size()));
    kv_set(out.meta, "pixel_subtense_arcmin", subtense);
    kv_set(out.meta, "mean_disparity_arcmin", mean_disp);
    kv_set(out.meta, "sd_disparity_arcmin",
           std::sqrt(std::max(0.0, sum_disp2 / n - mean_disp * mean_disp)));
    kv_set(out.meta, "mean_dot_spacing_arcmin", mean_spacing);
    kv_set(out.meta, "warning_wallpaper",
           static_cast<long long>(params.peak_disparity_arcmin > mean_spacing ? 1 : 0));
    return out;
}

Image8 render_dof_blur(const Image8& image, std::span<const double> depth_d, Diopters fixation,
                       double pupil_mm, double arcmin_per_px, double sigma_scale) {
    if (depth_d.size() != image.pixels.size()) {
        throw DomainError("render_dof_blur: depth map must match the image dimensions");
    }
    if (!(arcmin_per_px > 0.0)) {
        throw DomainError("render_dof_blur: arcmin_per_px must be positive");
    }

    const int w = image.width, h = image.height;
    std::vector<double> accum(image.pixels.size(), 0.0);

    auto mirror = [](int i, int n) {
        while (i < 0 || i >= n) {
            if (i < 0) i = -i - 1;
            if (i >= n) i = 2 * n - 1 - i;
        }
        return i;
    };

    std::vector<double> weights;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * w + x;
            const double value = image.pixels[idx];
            const Diopters defocus{depth_d[idx] - fixation.value};
            const double sigma_px =
                sigma_scale * blur_circle_arcmin(defocus, pupil_mm) / arcmin_per_px;
            if (sigma_px < 1e-6) {
                accum[idx] += value;
                continue;
            }
            const int reach = std::max(1, static_cast<int>(std::ceil(3.0 * sigma_px)));
            const int size = 2 * reach + 1;
            weights.assign(static_cast<std::size_t>(size) * size, 0.0);
            double total = 0.0;
            for (int dy = -reach; dy <= reach; ++dy) {
                for (int dx = -reach; dx <= reach; ++dx) {
                    const double g =
                        std::exp(-0.5 * (dx * dx + dy * dy) / (sigma_px * sigma_px));
                    weights[static_cast<std::size_t>(dy + reach) * size + (dx + reach)] = g;
                    total += g;
                }
            }
            // Every source pixel spreads exactly its own energy.
            for (int dy = -reach; dy <= reach; ++dy) {
                const int ty = mirror(y + dy, h);
                for (int dx = -reach; dx <= reach; ++dx) {
                    const int tx = mirror(x + dx, w);
                    const double g =
                        weights[static_cast<std::size_t>(dy + reach) * size + (dx + reach)];
                    accum[static_cast<std::size_t>(ty) * w + tx] += value * g / total;
                }
            }
        }
    }

    Image8 out;
    out.width = w;
    out.height = h;
    out.pixels.resize(accum.size());
    for (std::size_t i = 0; i < accum.size(); ++i) {
        out.pixels[i] = static_cast<std::uint8_t>(std::lround(std::clamp(accum[i], 0.0, 255.0)));
    }
    return out;
}

}  // namespace vaclab
