#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "vaclab/conditions.hpp"
#include "vaclab/optics.hpp"
#include "vaclab/stereo.hpp"

// Parameterized binocular observer: cross-coupled accommodation/vergence
// dynamics, defocus-dependent disparity sensitivity, monovision eye
// dominance, and the fused-and-sharp criterion behind time-to-fuse.
//
// Dynamics are linear and first order. Each response relaxes toward a
// gain-weighted mix of its own stimulus and the other system's stimulus:
//
//   tau_a * dA/dt = g_a*(demand - A) + g_ca*(vergence - A)
//   tau_v * dV/dt = g_v*(vergence - V) + g_av*(demand - V)
//
// which expands to the error-driven form g_a*b + g_ca*d minus a leak
// proportional to (A - V). Concordant stimuli at the current state are an
// exact fixed point; discordant stimuli settle to the 2x2 linear compromise.
// The blur drive uses the sighting eye's demand (accommodation is yoked;
// the sighting eye sets the response).

namespace vaclab {

struct ObserverParams {
    double tau_accommodation_s = 0.3;
    double tau_vergence_s = 0.2;
    double accommodation_gain = 0.95;  // g_a, blur-driven accommodation
    double vergence_gain = 0.95;       // g_v, disparity-driven vergence
    double disparity_to_accommodation_gain = 0.6;  // g_ca
    double blur_to_vergence_gain = 0.6;            // g_av

    double pupil_mm = 4.0;
    // Disparity detection noise: sigma = sigma0 + blur_penalty * blur +
    // suppression_penalty * |defocus_L - defocus_R|.
    double sigma0_arcmin = 1.6;
    double blur_penalty = 0.3;  // arcmin of sigma per arcmin of blur
    double suppression_penalty_arcmin_per_d = 0.1;

    // Fused-and-sharp criterion.
    double fusion_limit_arcmin = 150.0;    // tolerated vergence error
    double sharpness_limit_arcmin = 12.0;  // tolerated blur circle
    double fusion_hold_s = 0.1;            // criterion must hold this long
    double fuse_cap_s = 10.0;              // give up marker

    double lapse_rate = 0.02;
    Eye sighting_dominant = Eye::Left;

    // Conversion between vergence expressed in diopters and on-screen
    // disparity in arcmin; set from the display geometry's IPD.
    double disparity_scale_arcmin_per_d = 213.14450618070555;

    // Throws DomainError when a parameter leaves its legal range.
    void validate() const;

    ObserverParams with_geometry(const DisplayGeometry& geom) const;
};

struct ObserverStimulus {
    Diopters vergence{0.0};
    Diopters demand_left{0.0};
    Diopters demand_right{0.0};

    Diopters demand(Eye e) const { return e == Eye::Left ? demand_left : demand_right; }
};

ObserverStimulus stimulus_for_fixation(const ViewingCondition& condition,
                                       const DisplayGeometry& geom, Diopters fixation,
                                       RangePolicy policy = RangePolicy::Clamp);

struct ObserverState {
    double accommodation_d = 0.0;  // yoked, one value for both eyes
    double vergence_d = 0.0;
    double defocus_left_d = 0.0;  // signed: demand - accommodation
    double defocus_right_d = 0.0;
    bool fused = false;
    double time_s = 0.0;
};

// One forward-Euler update. dt must lie in (0, 50 ms]. Throws
// DivergenceError (naming the offending parameters) if a response leaves
// +/-20 D.
ObserverState step(const ObserverParams& params, const ObserverState& state,
                   const ObserverStimulus& stimulus, double dt_s);

// Equilibrium of the dynamics under a held stimulus.
ObserverState steady_state(const ObserverParams& params, const ObserverStimulus& stimulus);

// Eye with the smaller absolute defocus; ties go to the sighting eye.
Eye dominant_eye(double defocus_left_d, double defocus_right_d, Eye sighting);

// min(|defocus_L|, |defocus_R|): the dominance rule's effective defocus.
double effective_defocus_d(const ObserverState& state);

// Disparity noise given the current retinal state.
double effective_sigma_arcmin(const ObserverParams& params, const ObserverState& state);

// gamma + (1 - gamma - lambda) * Phi(disparity / sigma_eff) for a
// forced-choice task with 2 or 4 alternatives.
double p_correct_disparity(const ObserverParams& params, const ObserverState& state,
                           double target_disparity_arcmin, int n_alternatives);

struct FuseResult {
    double seconds = 0.0;
    bool fused = false;
};

// Time until the fused-and-sharp criterion holds for a sustained
// fusion_hold_s, starting from steady fixation on a zero-disparity cross at
// the screen. Returns the start of the sustained window; caps at fuse_cap_s
// with fused = false.
FuseResult time_to_fuse(const ObserverParams& params, const ViewingCondition& condition,
                        const DisplayGeometry& geom, Diopters target_vergence,
                        double dt_s = 0.002);

// Integrates the dynamics under a time-varying stimulus, sampling every step.
std::vector<ObserverState> simulate(const ObserverParams& params, const ObserverState& initial,
                                    const std::function<ObserverStimulus(double)>& stimulus_at,
                                    double duration_s, double dt_s);

// CSV rows `t_s,A_D,V_D,defocus_L,defocus_R,fused` with a header.
void write_trajectory_csv(std::ostream& out, const std::vector<ObserverState>& states);

}  // namespace vaclab
