#include "vaclab/conditions.hpp"

#include <cmath>
#include <ostream>

#include "vaclab/errors.hpp"

namespace vaclab {

ViewingCondition ViewingCondition::fixed_lens() {
    return {FixedLens{}, "fixed"};
}

ViewingCondition ViewingCondition::dynamic_lens(LensCalibration calibration) {
    DynamicLens d{calibration, calibration};
    return {std::move(d), "dynamic"};
}

ViewingCondition ViewingCondition::dynamic_lens(LensCalibration left, LensCalibration right) {
    return {DynamicLens{std::move(left), std::move(right)}, "dynamic"};
}

ViewingCondition ViewingCondition::monovision(Diopters left_power, Diopters right_power) {
    return {Monovision{left_power, right_power}, "monovision"};
}

Diopters accommodative_demand(Diopters screen, Diopters lens_power) {
    const Diopters demand = screen - lens_power;
    if (!(demand.value > 0.0)) {
        throw DomainError("accommodative_demand: " + std::to_string(demand.value) +
                          " D lies at or behind optical infinity");
    }
    return demand;
}

Diopters dynamic_lens_power(Diopters fixation, Diopters screen) {
    return screen - fixation;
}

namespace {

EyeDemands dynamic_demands(const DynamicLens& lenses, Diopters screen, Diopters fixation,
                           RangePolicy policy) {
    EyeDemands out;
    if (policy == RangePolicy::Strict) {
        out.left_command = lenses.left.command_for_demand(fixation);
        out.right_command = lenses.right.command_for_demand(fixation);
        out.left = out.right = fixation;
    } else {
        bool clamped_left = false, clamped_right = false;
        out.left_command = lenses.left.command_for_demand_clamped(fixation, &clamped_left);
        out.right_command = lenses.right.command_for_demand_clamped(fixation, &clamped_right);
        out.left = lenses.left.demand_for_current(out.left_command->current_ma);
        out.right = lenses.right.demand_for_current(out.right_command->current_ma);
        out.clamped = clamped_left || clamped_right;
        if (!out.clamped) {
            // Inside the window the demand is met exactly; avoid round-trip noise.
            out.left = out.right = fixation;
        }
    }
    (void)screen;
    return out;
}

}  // namespace

EyeDemands demands_for_fixation(const ViewingCondition& condition, const DisplayGeometry& geom,
                                Diopters fixation, RangePolicy policy) {
    if (!(fixation.value > 0.0)) {
        throw DomainError("demands_for_fixation: fixation must be a positive demand, got " +
                          std::to_string(fixation.value) + " D");
    }
    const Diopters screen = geom.screen_vergence();
    EyeDemands out;
    if (const auto* mono = std::get_if<Monovision>(&condition.policy)) {
        out.left = accommodative_demand(screen, mono->left_power);
        out.right = accommodative_demand(screen, mono->right_power);
    } else if (const auto* dyn = std::get_if<DynamicLens>(&condition.policy)) {
        out = dynamic_demands(*dyn, screen, fixation, policy);
    } else {
        out.left = out.right = screen;
    }
    return out;
}

Diopters va_conflict(Diopters vergence, Diopters demand) {
    return {std::abs(vergence.value - demand.value)};
}

Diopters binocular_conflict(Diopters vergence, const EyeDemands& demands) {
    return {std::min(va_conflict(vergence, demands.left).value,
                     va_conflict(vergence, demands.right).value)};
}

void write_command_log_csv(std::ostream& out, const std::vector<LensCommandLogRow>& rows) {
    out << "t_ms,eye,current_mA,demand_D\n";
    out.precision(9);
    for (const auto& row : rows) {
        out << row.t_ms << ',' << eye_name(row.eye) << ',' << row.current_ma << ','
            << row.demand.value << '\n';
    }
}

}  // namespace vaclab
