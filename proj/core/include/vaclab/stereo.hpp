#pragma once

#include "vaclab/optics.hpp"

// Binocular viewing geometry: disparity/distance conversions, vergence
// angles, and pixel angular subtense. Sign convention throughout: crossed
// (positive) disparity places a target nearer than the screen.

namespace vaclab {

struct DisplayGeometry {
    double screen_distance_m = 1.77;
    double pixel_pitch_mm = 0.2652;
    int width_px = 1920;
    int height_px = 1080;
    double ipd_mm = 62.0;

    Diopters screen_vergence() const { return diopters_from_meters(screen_distance_m); }
};

// How a disparity is specified before resolution to on-screen arcmin.
enum class DisparityKind {
    VergenceDistance,     // absolute target vergence, value in diopters
    OnscreenOffset,       // value in arcmin, crossed positive
    RelativeToReference,  // arcmin offset added to a reference disparity
};

struct DisparitySpec {
    DisparityKind kind = DisparityKind::OnscreenOffset;
    double value = 0.0;
};

// Resolves a spec to on-screen arcmin; `reference_arcmin` only matters for
// RelativeToReference.
double resolve_disparity_arcmin(const DisparitySpec& spec, const DisplayGeometry& geom,
                                double reference_arcmin = 0.0);

// Pixel pitch implied by a panel diagonal (inches) and resolution.
double pixel_pitch_from_diagonal_mm(double diagonal_in, int width_px, int height_px);

// Angular size of one pixel at the viewing distance, in arcmin.
double pixel_subtense_arcmin(const DisplayGeometry& geom);

// Full binocular vergence angle to a target at `distance_m`, in degrees.
// Throws DomainError for non-positive distance.
double vergence_angle_deg(double ipd_mm, double distance_m);

// On-screen disparity that places a target at `target_distance_m`:
// vergence(target) - vergence(screen) in arcmin, zero at the screen.
double onscreen_disparity_arcmin(const DisplayGeometry& geom, double target_distance_m);

// Exact inverse of onscreen_disparity_arcmin. Throws RangeError when the
// disparity implies non-intersecting lines of sight.
double distance_for_onscreen_disparity(const DisplayGeometry& geom, double disparity_arcmin);

// Small-angle scale between vergence expressed in diopters and on-screen
// disparity in arcmin: ipd (m) * 1 D is the vergence angle in radians.
double disparity_arcmin_per_diopter(double ipd_mm);

}  // namespace vaclab
