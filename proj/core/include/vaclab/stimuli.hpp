#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vaclab/image.hpp"
#include "vaclab/optics.hpp"
#include "vaclab/report.hpp"
#include "vaclab/stereo.hpp"

// Stimulus generation for the two tasks, plus depth-of-field blur rendering.
// Everything is deterministic for a fixed seed; frames for different times
// may be rendered in parallel. Sub-pixel disparities are realized with
// anti-aliased coverage so the independent variable is not quantized to the
// pixel grid.

namespace vaclab {

struct StereoPair {
    Image8 left;
    Image8 right;
    KeyValues meta;
};

// Writes `<stem>_L.pgm`, `<stem>_R.pgm`, `<stem>_SBS.pgm` (cross-fuse
// montage) and the `<stem>_meta.txt` sidecar.
void save_stereo_pair(const std::string& stem, const StereoPair& pair);

// ---------------------------------------------------------------------------
// Diamond depth-motion stimulus: an outlined diamond with four circles that
// oscillates in depth; one circle periodically carries extra crossed
// disparity and must be spotted (4AFC).

struct DiamondStimulusParams {
    // Depth trajectory, relative to the screen in diopters.
    double near_offset_d = 1.5;
    double far_offset_d = -0.25;
    double travel_time_s = 5.5;
    double pause_s = 0.5;
    bool meter_linear = false;  // interpolate in meters instead of diopters

    // Circle appearance cadence: on for `circle_on_s`, then a response gap.
    double circle_period_s = 3.0;
    double circle_on_s = 1.0;

    int n_circles = 4;
    int target_index = 0;
    double target_disparity_arcmin = 2.0;
    std::uint64_t jitter_seed = 0;
    double jitter_arcmin = 3.0;

    // Layout (arcmin) and raster size. Sizes are legibility choices recorded
    // in the metadata, not measurements.
    double diamond_radius_arcmin = 55.0;
    double diamond_line_arcmin = 2.5;
    double circle_offset_arcmin = 28.0;
    double circle_radius_arcmin = 7.0;
    int width_px = 1024;
    int height_px = 640;
    std::uint8_t background = 128;
};

// Relative depth of the diamond at time t: a triangle wave between the far
// and near offsets with an exact dwell at each extreme.
double diamond_relative_depth_d(const DiamondStimulusParams& params, double t_s,
                                Diopters screen);

bool diamond_circles_visible(const DiamondStimulusParams& params, double t_s);
int diamond_window_index(const DiamondStimulusParams& params, double t_s);

StereoPair render_diamond_frame(const DiamondStimulusParams& params,
                                const DisplayGeometry& geom, double t_s);

// ---------------------------------------------------------------------------
// Random-dot stereogram with a sinusoidal depth corrugation oriented either
// +20 degrees or -20 degrees from vertical (2AFC).

struct RdsParams {
    double orientation_deg = 20.0;  // sign selects the alternative
    double field_size_deg = 2.2;
    double corrugation_freq_cpd = 1.0;
    double peak_disparity_arcmin = 6.0;
    double base_disparity_arcmin = 0.0;  // uniform shift of the whole field
    double dot_density_per_deg2 = 25.0;
    double dot_diameter_arcmin = 5.0;
    std::uint64_t seed = 0;
    int width_px = 0;  // 0: derived from the field size
    int height_px = 0;
    std::uint8_t background = 0;
    std::uint8_t dot_value = 255;
};

struct RdsDot {
    double x_arcmin = 0.0;
    double y_arcmin = 0.0;
};

// Uniform dot layout drawn from the seed. Negative orientations mirror the
// layout about the vertical axis so the two alternatives are exact mirror
// images of one another.
std::vector<RdsDot> rds_dot_layout(const RdsParams& params);

// Disparity carried by a dot at field position (x, y) in arcmin.
double rds_disparity_at(const RdsParams& params, double x_arcmin, double y_arcmin);

StereoPair render_rds(const RdsParams& params, const DisplayGeometry& geom);
StereoPair render_rds(const RdsParams& params, const DisplayGeometry& geom,
                      std::span<const RdsDot> dots);

// ---------------------------------------------------------------------------
// Depth-of-field rendering: each pixel is spread by a Gaussian whose sigma is
// sigma_scale times its blur-circle angle; pixels at the fixation depth stay
// untouched. Scatter formulation with mirrored borders, so total image energy
// is conserved to rounding.

Image8 render_dof_blur(const Image8& image, std::span<const double> depth_d, Diopters fixation,
                       double pupil_mm, double arcmin_per_px, double sigma_scale = 0.5);

}  // namespace vaclab
