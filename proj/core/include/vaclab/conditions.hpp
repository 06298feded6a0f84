#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vaclab/lens.hpp"
#include "vaclab/optics.hpp"
#include "vaclab/stereo.hpp"

// Per-eye accommodative-demand policies for the three viewing conditions,
// and the vergence-accommodation conflict metric. Policy evaluation is
// stateless: the same fixation always yields the same demands.

namespace vaclab {

enum class Eye { Left, Right };

inline const char* eye_name(Eye e) { return e == Eye::Left ? "left" : "right"; }

// Both eyes accommodate to the display screen.
struct FixedLens {};

// Tunable lenses track the fixation distance; both lenses receive the same
// power. Each eye still carries its own calibration for current scheduling.
struct DynamicLens {
    LensCalibration left;
    LensCalibration right;
};

// Fixed spectacle powers, generally unequal (e.g. 0 D and -1 D).
struct Monovision {
    Diopters left_power{0.0};
    Diopters right_power{-1.0};
};

struct ViewingCondition {
    std::variant<FixedLens, DynamicLens, Monovision> policy = FixedLens{};
    std::string name = "fixed";

    static ViewingCondition fixed_lens();
    static ViewingCondition dynamic_lens(LensCalibration calibration);
    static ViewingCondition dynamic_lens(LensCalibration left, LensCalibration right);
    static ViewingCondition monovision(Diopters left_power, Diopters right_power);

    bool is_dynamic() const { return std::holds_alternative<DynamicLens>(policy); }
    bool is_monovision() const { return std::holds_alternative<Monovision>(policy); }
};

struct EyeDemands {
    Diopters left{0.0};
    Diopters right{0.0};
    std::optional<LensCommand> left_command;
    std::optional<LensCommand> right_command;
    bool clamped = false;

    Diopters demand(Eye e) const { return e == Eye::Left ? left : right; }
};

// How out-of-window fixations are treated under a dynamic lens: static
// scheduling requests should fail loudly, continuous trajectories clamp to
// the nearest achievable demand and flag the sample.
enum class RangePolicy { Strict, Clamp };

// Demand seen through a spectacle lens: screen - lens_power (a -1 D lens
// raises the demand by 1 D). Throws DomainError when the result lands at or
// behind optical infinity.
Diopters accommodative_demand(Diopters screen, Diopters lens_power);

// Lens power that moves the accommodative demand from the screen to the
// fixation distance, so accommodative_demand(screen, power) == fixation.
Diopters dynamic_lens_power(Diopters fixation, Diopters screen);

// Per-eye accommodative demands for a fixation distance under a condition.
EyeDemands demands_for_fixation(const ViewingCondition& condition, const DisplayGeometry& geom,
                                Diopters fixation, RangePolicy policy = RangePolicy::Strict);

// |vergence - demand| in diopters.
Diopters va_conflict(Diopters vergence, Diopters demand);

// Binocular effective conflict: the minimum of the two eyes' conflicts
// (the percept follows the eye focused closer to the vergence distance).
Diopters binocular_conflict(Diopters vergence, const EyeDemands& demands);

// One scheduled lens command, timestamped for ordered replay.
struct LensCommandLogRow {
    double t_ms = 0.0;
    Eye eye = Eye::Left;
    double current_ma = 0.0;
    Diopters demand{0.0};
};

// CSV rows `t_ms,eye,current_mA,demand_D` with a header.
void write_command_log_csv(std::ostream& out, const std::vector<LensCommandLogRow>& rows);

}  // namespace vaclab
