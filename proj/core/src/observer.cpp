#include "vaclab/observer.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "vaclab/errors.hpp"
#include "vaclab/math.hpp"

namespace vaclab {

namespace {

void check_gain(double g, const char* name) {
    if (!(g > 0.0 && g <= 1.2)) {
        throw DomainError(std::string("observer params: ") + name + " must lie in (0, 1.2], got " +
                          std::to_string(g));
    }
}

std::string params_summary(const ObserverParams& p) {
    std::ostringstream os;
    os << "tau_a=" << p.tau_accommodation_s << " tau_v=" << p.tau_vergence_s
       << " g_a=" << p.accommodation_gain << " g_v=" << p.vergence_gain
       << " g_ca=" << p.disparity_to_accommodation_gain << " g_av=" << p.blur_to_vergence_gain;
    return os.str();
}

void refresh_defocus(ObserverState& s, const ObserverStimulus& stim) {
    s.defocus_left_d = stim.demand_left.value - s.accommodation_d;
    s.defocus_right_d = stim.demand_right.value - s.accommodation_d;
}

bool within_fusion_limit(const ObserverParams& p, const ObserverState& s,
                         const ObserverStimulus& stim) {
    const double error_arcmin =
        std::abs(stim.vergence.value - s.vergence_d) * p.disparity_scale_arcmin_per_d;
    return error_arcmin <= p.fusion_limit_arcmin;
}

}  // namespace

void ObserverParams::validate() const {
    if (!(tau_accommodation_s > 0.0) || !(tau_vergence_s > 0.0)) {
        throw DomainError("observer params: time constants must be positive");
    }
    check_gain(accommodation_gain, "accommodation_gain");
    check_gain(vergence_gain, "vergence_gain");
    check_gain(disparity_to_accommodation_gain, "disparity_to_accommodation_gain");
    check_gain(blur_to_vergence_gain, "blur_to_vergence_gain");
    if (!(pupil_mm > 0.0)) throw DomainError("observer params: pupil must be positive");
    if (!(sigma0_arcmin > 0.0)) throw DomainError("observer params: sigma0 must be positive");
    if (blur_penalty < 0.0 || suppression_penalty_arcmin_per_d < 0.0) {
        throw DomainError("observer params: noise penalties must be non-negative");
    }
    if (!(lapse_rate >= 0.0 && lapse_rate <= 0.06)) {
        throw DomainError("observer params: lapse rate must lie in [0, 0.06], got " +
                          std::to_string(lapse_rate));
    }
    if (!(fusion_limit_arcmin > 0.0) || !(sharpness_limit_arcmin > 0.0)) {
        throw DomainError("observer params: criterion limits must be positive");
    }
    if (!(disparity_scale_arcmin_per_d > 0.0)) {
        throw DomainError("observer params: disparity scale must be positive");
    }
}

ObserverParams ObserverParams::with_geometry(const DisplayGeometry& geom) const {
    ObserverParams p = *this;
    p.disparity_scale_arcmin_per_d = disparity_arcmin_per_diopter(geom.ipd_mm);
    return p;
}

ObserverStimulus stimulus_for_fixation(const ViewingCondition& condition,
                                       const DisplayGeometry& geom, Diopters fixation,
                                       RangePolicy policy) {
    const EyeDemands demands = demands_for_fixation(condition, geom, fixation, policy);
    return {fixation, demands.left, demands.right};
}

ObserverState step(const ObserverParams& params, const ObserverState& state,
                   const ObserverStimulus& stimulus, double dt_s) {
    if (!(dt_s > 0.0 && dt_s <= 0.05)) {
        throw DomainError("observer step: dt must lie in (0, 50 ms], got " + std::to_string(dt_s));
    }

    const double demand = stimulus.demand(params.sighting_dominant).value;
    const double vergence_stim = stimulus.vergence.value;

    const double accommodation_drive =
        params.accommodation_gain * (demand - state.accommodation_d) +
        params.disparity_to_accommodation_gain * (vergence_stim - state.accommodation_d);
    const double vergence_drive =
        params.vergence_gain * (vergence_stim - state.vergence_d) +
        params.blur_to_vergence_gain * (demand - state.vergence_d);

    ObserverState next = state;
    next.accommodation_d += dt_s * accommodation_drive / params.tau_accommodation_s;
    next.vergence_d += dt_s * vergence_drive / params.tau_vergence_s;
    next.time_s += dt_s;
    refresh_defocus(next, stimulus);
    next.fused = within_fusion_limit(params, next, stimulus);

    if (std::abs(next.accommodation_d) > 20.0 || std::abs(next.vergence_d) > 20.0 ||
        !std::isfinite(next.accommodation_d) || !std::isfinite(next.vergence_d)) {
        throw DivergenceError("observer dynamics diverged (" + params_summary(params) +
                              " dt=" + std::to_string(dt_s) + ")");
    }
    return next;
}

ObserverState steady_state(const ObserverParams& params, const ObserverStimulus& stimulus) {
    const double demand = stimulus.demand(params.sighting_dominant).value;
    const double vergence_stim = stimulus.vergence.value;
    ObserverState s;
    s.accommodation_d = (params.accommodation_gain * demand +
                         params.disparity_to_accommodation_gain * vergence_stim) /
                        (params.accommodation_gain + params.disparity_to_accommodation_gain);
    s.vergence_d =
        (params.vergence_gain * vergence_stim + params.blur_to_vergence_gain * demand) /
        (params.vergence_gain + params.blur_to_vergence_gain);
    refresh_defocus(s, stimulus);
    s.fused = within_fusion_limit(params, s, stimulus);
    return s;
}

Eye dominant_eye(double defocus_left_d, double defocus_right_d, Eye sighting) {
    const double left = std::abs(defocus_left_d);
    const double right = std::abs(defocus_right_d);
    if (left < right) return Eye::Left;
    if (right < left) return Eye::Right;
    return sighting;
}

double effective_defocus_d(const ObserverState& state) {
    return std::min(std::abs(state.defocus_left_d), std::abs(state.defocus_right_d));
}

double effective_sigma_arcmin(const ObserverParams& params, const ObserverState& state) {
    const double blur = blur_circle_arcmin(Diopters{effective_defocus_d(state)}, params.pupil_mm);
    const double imbalance = std::abs(state.defocus_left_d - state.defocus_right_d);
    return params.sigma0_arcmin + params.blur_penalty * blur +
           params.suppression_penalty_arcmin_per_d * imbalance;
}

double p_correct_disparity(const ObserverParams& params, const ObserverState& state,
                           double target_disparity_arcmin, int n_alternatives) {
    if (n_alternatives != 2 && n_alternatives != 4) {
        throw DomainError("p_correct_disparity: n_alternatives must be 2 or 4");
    }
    const double gamma = 1.0 / n_alternatives;
    const double sigma = effective_sigma_arcmin(params, state);
    return gamma +
           (1.0 - gamma - params.lapse_rate) * normal_cdf(target_disparity_arcmin / sigma);
}

FuseResult time_to_fuse(const ObserverParams& params, const ViewingCondition& condition,
                        const DisplayGeometry& geom, Diopters target_vergence, double dt_s) {
    params.validate();
    const Diopters screen = geom.screen_vergence();

    // 2 s of zero-disparity fixation at the screen settles the observer;
    // start from that equilibrium.
    const ObserverStimulus rest = stimulus_for_fixation(condition, geom, screen);
    ObserverState state = steady_state(params, rest);
    state.time_s = 0.0;

    const ObserverStimulus target = stimulus_for_fixation(condition, geom, target_vergence);

    auto criterion = [&](const ObserverState& s) {
        const double blur =
            blur_circle_arcmin(Diopters{effective_defocus_d(s)}, params.pupil_mm);
        return s.fused && blur <= params.sharpness_limit_arcmin;
    };

    // Evaluate at t = 0 against the new stimulus.
    refresh_defocus(state, target);
    state.fused = std::abs(target.vergence.value - state.vergence_d) *
                      params.disparity_scale_arcmin_per_d <=
                  params.fusion_limit_arcmin;

    double window_start = criterion(state) ? 0.0 : -1.0;
    while (state.time_s < params.fuse_cap_s) {
        state = step(params, state, target, dt_s);
        if (criterion(state)) {
            if (window_start < 0.0) window_start = state.time_s;
            if (state.time_s - window_start >= params.fusion_hold_s) {
                return {window_start, true};
            }
        } else {
            window_start = -1.0;
        }
    }
    return {params.fuse_cap_s, false};
}

std::vector<ObserverState> simulate(const ObserverParams& params, const ObserverState& initial,
                                    const std::function<ObserverStimulus(double)>& stimulus_at,
                                    double duration_s, double dt_s) {
    std::vector<ObserverState> trace;
    trace.reserve(static_cast<std::size_t>(duration_s / dt_s) + 2);
    ObserverState state = initial;
    trace.push_back(state);
    while (state.time_s < duration_s) {
        state = step(params, state, stimulus_at(state.time_s), dt_s);
        trace.push_back(state);
    }
    return trace;
}

void write_trajectory_csv(std::ostream& out, const std::vector<ObserverState>& states) {
    out << "t_s,A_D,V_D,defocus_L,defocus_R,fused\n";
    out.precision(9);
    for (const auto& s : states) {
        out << s.time_s << ',' << s.accommodation_d << ',' << s.vergence_d << ','
            << s.defocus_left_d << ',' << s.defocus_right_d << ',' << (s.fused ? 1 : 0) << '\n';
    }
}

}  // namespace vaclab
