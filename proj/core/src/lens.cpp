#include "vaclab/lens.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vaclab/errors.hpp"

namespace vaclab {

namespace {

std::string format_fixed(double v, int decimals) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(decimals);
    os << v;
    return os.str();
}

}  // namespace

LensCalibration LensCalibration::fit(std::span<const CalibrationSample> samples,
                                     CalibrationSpace space, double settle_time_ms) {
    if (samples.size() < 2) {
        throw FitError("lens calibration: need at least 2 samples, got " +
                       std::to_string(samples.size()));
    }
    for (const auto& s : samples) {
        if (!(s.current_ma >= 0.0 && s.current_ma <= kMaxDriveCurrentMa)) {
            throw DomainError("lens calibration: current " + std::to_string(s.current_ma) +
                              " mA outside the 0-" + format_fixed(kMaxDriveCurrentMa, 0) +
                              " mA drive range");
        }
        if (!(s.distance_m > 0.0) || !std::isfinite(s.distance_m)) {
            throw DomainError("lens calibration: distances must be positive, got " +
                              std::to_string(s.distance_m));
        }
    }

    const auto [lo_it, hi_it] =
        std::minmax_element(samples.begin(), samples.end(),
                            [](const auto& a, const auto& b) { return a.current_ma < b.current_ma; });
    if (lo_it->current_ma == hi_it->current_ma) {
        throw FitError("lens calibration: all samples share one current; the fit is singular");
    }

    auto ordinate = [space](const CalibrationSample& s) {
        return space == CalibrationSpace::Meters ? s.distance_m : 1.0 / s.distance_m;
    };

    const double n = static_cast<double>(samples.size());
    double sum_i = 0.0, sum_y = 0.0;
    for (const auto& s : samples) {
        sum_i += s.current_ma;
        sum_y += ordinate(s);
    }
    const double mean_i = sum_i / n;
    const double mean_y = sum_y / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& s : samples) {
        const double di = s.current_ma - mean_i;
        sxx += di * di;
        sxy += di * (ordinate(s) - mean_y);
    }

    LensCalibration cal;
    cal.space_ = space;
    cal.slope_ = sxy / sxx;
    cal.intercept_ = mean_y - cal.slope_ * mean_i;
    cal.settle_time_ms_ = settle_time_ms;
    cal.current_range_ = {lo_it->current_ma, hi_it->current_ma};
    cal.samples_.assign(samples.begin(), samples.end());
    cal.residuals_.reserve(samples.size());
    for (const auto& s : samples) {
        cal.residuals_.push_back(ordinate(s) - (cal.slope_ * s.current_ma + cal.intercept_));
    }

    if (cal.slope_ == 0.0) {
        throw FitError("lens calibration: fitted line has zero slope and cannot be inverted");
    }
    // Inversion needs the fitted quantity to stay positive over the domain.
    for (double endpoint : {cal.current_range_.first, cal.current_range_.second}) {
        if (cal.slope_ * endpoint + cal.intercept_ <= 0.0) {
            throw FitError("lens calibration: fitted line crosses zero inside the current range");
        }
    }
    return cal;
}

double LensCalibration::max_abs_residual() const {
    double m = 0.0;
    for (double r : residuals_) m = std::max(m, std::abs(r));
    return m;
}

std::pair<double, double> LensCalibration::distance_range_m() const {
    auto distance_at = [this](double current) {
        const double y = slope_ * current + intercept_;
        return space_ == CalibrationSpace::Meters ? y : 1.0 / y;
    };
    const double a = distance_at(current_range_.first);
    const double b = distance_at(current_range_.second);
    return {std::min(a, b), std::max(a, b)};
}

std::pair<Diopters, Diopters> LensCalibration::demand_range() const {
    const auto [near_m, far_m] = distance_range_m();
    return {diopters_from_meters(far_m), diopters_from_meters(near_m)};
}

double LensCalibration::demand_to_current(Diopters demand) const {
    const double y = space_ == CalibrationSpace::Meters ? meters_from_diopters(demand) : demand.value;
    return (y - intercept_) / slope_;
}

LensCommand LensCalibration::command_for_demand(Diopters demand) const {
    const double current = demand_to_current(demand);
    const auto [lo, hi] = current_range_;
    // Tolerate rounding right at the endpoints.
    const double slack = 1e-9 * (hi - lo);
    if (current < lo - slack || current > hi + slack) {
        const auto [dmin, dmax] = demand_range();
        throw RangeError("lens demand " + format_fixed(demand.value, 2) +
                         " D outside the achievable range " + format_fixed(dmin.value, 2) + "-" +
                         format_fixed(dmax.value, 2) + " D");
    }
    return {std::clamp(current, lo, hi), settle_time_ms_};
}

LensCommand LensCalibration::command_for_demand_clamped(Diopters demand, bool* clamped) const {
    const double current = demand_to_current(demand);
    const auto [lo, hi] = current_range_;
    const double bounded = std::clamp(current, lo, hi);
    if (clamped != nullptr) *clamped = bounded != current;
    return {bounded, settle_time_ms_};
}

Diopters LensCalibration::demand_for_current(double current_ma) const {
    const double y = slope_ * current_ma + intercept_;
    return space_ == CalibrationSpace::Meters ? diopters_from_meters(y) : Diopters{y};
}

std::string LensCalibration::serialize() const {
    std::ostringstream os;
    os.precision(12);
    const auto [dmin, dmax] = demand_range();
    const auto [near_m, far_m] = distance_range_m();
    os << "space = " << (space_ == CalibrationSpace::Meters ? "meters" : "diopters") << "\n"
       << "slope = " << slope_ << "\n"
       << "intercept = " << intercept_ << "\n"
       << "settle_time_ms = " << settle_time_ms_ << "\n"
       << "current_range_ma = " << current_range_.first << " " << current_range_.second << "\n"
       << "distance_range_m = " << near_m << " " << far_m << "\n"
       << "demand_range_d = " << dmin.value << " " << dmax.value << "\n"
       << "demand_range_display = " << format_fixed(dmin.value, 2) << "-"
       << format_fixed(dmax.value, 2) << " D\n"
       << "samples = " << samples_.size() << "\n"
       << "# current_ma measured fitted residual\n";
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const double measured = space_ == CalibrationSpace::Meters ? samples_[i].distance_m
                                                                   : 1.0 / samples_[i].distance_m;
        os << "sample_" << i << " = " << samples_[i].current_ma << " " << measured << " "
           << measured - residuals_[i] << " " << residuals_[i] << "\n";
    }
    return os.str();
}

std::vector<CalibrationSample> parse_calibration_samples(std::istream& in) {
    std::vector<CalibrationSample> samples;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        CalibrationSample s;
        if (!(fields >> s.current_ma)) continue;  // blank or comment-only line
        if (!(fields >> s.distance_m)) {
            throw ConfigError("calibration samples: line " + std::to_string(line_no) +
                              " is missing the distance column");
        }
        double extra;
        if (fields >> extra) {
            throw ConfigError("calibration samples: line " + std::to_string(line_no) +
                              " has trailing fields");
        }
        samples.push_back(s);
    }
    return samples;
}

std::vector<CalibrationSample> load_calibration_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open calibration samples file: " + path);
    }
    return parse_calibration_samples(in);
}

LensCalibration default_lens_calibration() {
    // distance = -0.0272 * I + 7.28, so 150 mA -> 3.2 m and 250 mA -> 0.48 m.
    const CalibrationSample samples[] = {
        {150.0, 3.2},
        {200.0, 1.84},
        {250.0, 0.48},
    };
    return LensCalibration::fit(samples, CalibrationSpace::Meters);
}

}  // namespace vaclab
