#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vaclab/optics.hpp"

// Focus-tunable lens model: a linear map between drive current and
// accommodative distance, fitted from measured samples, plus its inversion
// for scheduling drive currents. No hardware I/O; currents are only clamped
// to the drive range.

namespace vaclab {

struct CalibrationSample {
    double current_ma = 0.0;
    double distance_m = 0.0;
};

// The paper-style plot fits distance-vs-current in meters; diopter space is
// available since the hardware may be more linear there.
enum class CalibrationSpace { Meters, Diopters };

struct LensCommand {
    double current_ma = 0.0;
    double settle_time_ms = 0.0;
};

inline constexpr double kMaxDriveCurrentMa = 300.0;
inline constexpr double kDefaultSettleTimeMs = 5.0;

class LensCalibration {
public:
    // Ordinary least-squares line through the samples in the requested space.
    // Requires >= 2 samples with distinct currents, currents within
    // [0, 300] mA, and positive distances. A zero-slope fit is rejected since
    // it cannot be inverted.
    static LensCalibration fit(std::span<const CalibrationSample> samples,
                               CalibrationSpace space = CalibrationSpace::Meters,
                               double settle_time_ms = kDefaultSettleTimeMs);

    CalibrationSpace space() const { return space_; }
    double slope() const { return slope_; }
    double intercept() const { return intercept_; }
    double settle_time_ms() const { return settle_time_ms_; }
    const std::vector<CalibrationSample>& samples() const { return samples_; }

    // Residuals in fit space, one per sample.
    const std::vector<double>& residuals() const { return residuals_; }
    double max_abs_residual() const;

    // [lo, hi] in mA, the fitted domain.
    std::pair<double, double> current_range_ma() const { return current_range_; }

    // Achievable accommodative demand window [min, max] in diopters.
    std::pair<Diopters, Diopters> demand_range() const;
    std::pair<double, double> distance_range_m() const;

    // Inverts the fitted line (demand -> distance -> current). Throws
    // RangeError naming the achievable window when the demand is outside it.
    LensCommand command_for_demand(Diopters demand) const;

    // Same inversion, but demands outside the window are clamped to the
    // nearest endpoint; `clamped` reports whether that happened. Used for
    // continuous trajectories where an error would be wrong.
    LensCommand command_for_demand_clamped(Diopters demand, bool* clamped = nullptr) const;

    Diopters demand_for_current(double current_ma) const;

    // Human-readable key-value block with slope, intercept, ranges, and a
    // per-sample residual table.
    std::string serialize() const;

private:
    LensCalibration() = default;

    double demand_to_current(Diopters demand) const;

    CalibrationSpace space_ = CalibrationSpace::Meters;
    double slope_ = 0.0;
    double intercept_ = 0.0;
    double settle_time_ms_ = kDefaultSettleTimeMs;
    std::pair<double, double> current_range_{0.0, 0.0};
    std::vector<CalibrationSample> samples_;
    std::vector<double> residuals_;
};

// Parses a plain-text sample table: one `current_mA<TAB>distance_m` pair per
// line, `#` comments and blank lines allowed.
std::vector<CalibrationSample> parse_calibration_samples(std::istream& in);
std::vector<CalibrationSample> load_calibration_samples(const std::string& path);

// Emulated bench lens: a synthetic line whose achievable window is exactly
// 0.48-3.2 m over 150-250 mA drive.
LensCalibration default_lens_calibration();

}  // namespace vaclab
