#include "vaclab/optics.hpp"

#include <cmath>
#include <string>

#include "vaclab/errors.hpp"
#include "vaclab/math.hpp"

namespace vaclab {

Diopters diopters_from_meters(double meters) {
    if (!std::isfinite(meters) || meters <= 0.0) {
        throw DomainError("diopters_from_meters: distance must be finite and positive, got " +
                          std::to_string(meters));
    }
    return {1.0 / meters};
}

double meters_from_diopters(Diopters d) {
    if (!std::isfinite(d.value) || d.value <= 0.0) {
        throw DomainError("meters_from_diopters: demand must be finite and positive, got " +
                          std::to_string(d.value));
    }
    return 1.0 / d.value;
}

Diopters absolute_from_relative(Diopters screen, Diopters offset) {
    const Diopters absolute = screen + offset;
    if (!(absolute.value > 0.0)) {
        throw DomainError("absolute_from_relative: result " + std::to_string(absolute.value) +
                          " D is at or behind optical infinity");
    }
    return absolute;
}

double blur_circle_arcmin(Diopters defocus, double pupil_mm) {
    if (!(pupil_mm > 0.0)) {
        throw DomainError("blur_circle_arcmin: pupil must be positive, got " +
                          std::to_string(pupil_mm));
    }
    // aperture (m) * defocus (1/m) is the blur-circle angle in radians.
    return std::abs(defocus.value) * (pupil_mm / 1000.0) * kArcminPerRad;
}

}  // namespace vaclab
