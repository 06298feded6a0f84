#pragma once

#include <cstdint>
#include <span>
#include <vector>

// Maximum-likelihood cumulative-Gaussian psychometric fitting with a fixed
// chance floor, a bounded lapse rate, criterion-crossing thresholds, and
// parametric bootstrap confidence intervals.

namespace vaclab {

struct PsychTrial {
    double level = 0.0;
    bool correct = false;
};

struct PsychometricFit {
    double mu = 0.0;
    double sigma = 1.0;
    double lapse = 0.0;
    double gamma = 0.5;
    double criterion = 0.75;
    double threshold = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool has_ci = false;
    double log_likelihood = 0.0;
    int n_trials = 0;
    bool threshold_extrapolated = false;

    // gamma + (1 - gamma - lapse) * Phi((x - mu) / sigma)
    double p_correct(double level) const;
};

// Level at which a curve crosses the criterion. Throws DomainError when the
// criterion is unreachable, i.e. outside (gamma, 1 - lapse).
double threshold_for(double mu, double sigma, double lapse, double gamma, double criterion);

// Derivative-free ML fit with five multi-start initializations. The lapse
// rate is constrained to [0, lapse_max]. Throws FitError on non-identifiable
// data: fewer than two distinct levels, or all responses equal.
PsychometricFit fit_psychometric(std::span<const PsychTrial> trials, double gamma,
                                 double criterion, double lapse_max = 0.06);

// Parametric bootstrap 95% CI on the threshold: responses are resimulated
// from the fitted curve at the observed levels and refit. Requires
// n_resamples >= 500; throws FitError when more than 20% of resamples fail
// to fit.
std::pair<double, double> bootstrap_ci(std::span<const PsychTrial> trials,
                                       const PsychometricFit& fit, int n_resamples,
                                       std::uint64_t seed, int threads = 1);

// Pools trial sets (no per-subject weighting) and fits the concatenation.
PsychometricFit fit_pooled(std::span<const std::vector<PsychTrial>> trial_sets, double gamma,
                           double criterion, double lapse_max = 0.06);

}  // namespace vaclab
