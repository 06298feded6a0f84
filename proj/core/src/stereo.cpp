#include "vaclab/stereo.hpp"

#include <cmath>
#include <string>

#include "vaclab/errors.hpp"
#include "vaclab/math.hpp"

namespace vaclab {

double pixel_pitch_from_diagonal_mm(double diagonal_in, int width_px, int height_px) {
    if (!(diagonal_in > 0.0) || width_px <= 0 || height_px <= 0) {
        throw DomainError("pixel_pitch_from_diagonal: diagonal and resolution must be positive");
    }
    const double diag_mm = diagonal_in * 25.4;
    const double aspect = static_cast<double>(width_px) / static_cast<double>(height_px);
    const double width_mm = diag_mm * aspect / std::sqrt(1.0 + aspect * aspect);
    return width_mm / width_px;
}

double pixel_subtense_arcmin(const DisplayGeometry& geom) {
    const double pitch_m = geom.pixel_pitch_mm / 1000.0;
    return 2.0 * std::atan(pitch_m / (2.0 * geom.screen_distance_m)) * kArcminPerRad;
}

double vergence_angle_deg(double ipd_mm, double distance_m) {
    if (!(distance_m > 0.0)) {
        throw DomainError("vergence_angle: distance must be positive, got " +
                          std::to_string(distance_m));
    }
    const double ipd_m = ipd_mm / 1000.0;
    return 2.0 * std::atan(ipd_m / (2.0 * distance_m)) * kDegPerRad;
}

double onscreen_disparity_arcmin(const DisplayGeometry& geom, double target_distance_m) {
    const double target_deg = vergence_angle_deg(geom.ipd_mm, target_distance_m);
    const double screen_deg = vergence_angle_deg(geom.ipd_mm, geom.screen_distance_m);
    return (target_deg - screen_deg) * 60.0;
}

double distance_for_onscreen_disparity(const DisplayGeometry& geom, double disparity_arcmin) {
    const double screen_deg = vergence_angle_deg(geom.ipd_mm, geom.screen_distance_m);
    const double target_deg = screen_deg + disparity_arcmin / 60.0;
    if (!(target_deg > 0.0)) {
        throw RangeError("disparity " + std::to_string(disparity_arcmin) +
                         " arcmin exceeds the screen vergence angle; the lines of sight diverge");
    }
    const double ipd_m = geom.ipd_mm / 1000.0;
    return ipd_m / (2.0 * std::tan(0.5 * target_deg / kDegPerRad));
}

double disparity_arcmin_per_diopter(double ipd_mm) {
    return (ipd_mm / 1000.0) * kArcminPerRad;
}

double resolve_disparity_arcmin(const DisparitySpec& spec, const DisplayGeometry& geom,
                                double reference_arcmin) {
    switch (spec.kind) {
        case DisparityKind::VergenceDistance:
            return onscreen_disparity_arcmin(geom, meters_from_diopters(Diopters{spec.value}));
        case DisparityKind::OnscreenOffset:
            return spec.value;
        case DisparityKind::RelativeToReference:
            return reference_arcmin + spec.value;
    }
    throw DomainError("resolve_disparity_arcmin: unknown disparity kind");
}

}  // namespace vaclab
