#pragma once

#include <compare>

// Diopter/distance arithmetic and defocus blur geometry. Values are never
// rounded here; two-decimal rounding is applied only when reports are written.

namespace vaclab {

// A vergence or accommodative demand in diopters (reciprocal meters).
struct Diopters {
    double value = 0.0;

    constexpr auto operator<=>(const Diopters&) const = default;
};

constexpr Diopters operator+(Diopters a, Diopters b) { return {a.value + b.value}; }
constexpr Diopters operator-(Diopters a, Diopters b) { return {a.value - b.value}; }
constexpr Diopters operator-(Diopters a) { return {-a.value}; }
constexpr Diopters operator*(double s, Diopters a) { return {s * a.value}; }

// 1/d for a distance in meters. Throws DomainError for d <= 0 or non-finite d.
Diopters diopters_from_meters(double meters);

// Inverse conversion. Throws DomainError for non-positive demand.
double meters_from_diopters(Diopters d);

// Absolute demand from a screen demand plus a relative offset
// (positive offset = nearer than the screen). Throws DomainError when the
// result is at or behind optical infinity.
Diopters absolute_from_relative(Diopters screen, Diopters offset);

// Geometric blur-circle angle for a defocused eye: |defocus| * aperture,
// expressed in arcmin. Even in defocus, linear in both factors.
// Throws DomainError for non-positive pupil.
double blur_circle_arcmin(Diopters defocus, double pupil_mm);

}  // namespace vaclab
