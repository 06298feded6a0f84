#include "vaclab/psychometric.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "vaclab/errors.hpp"
#include "vaclab/math.hpp"
#include "vaclab/parallel.hpp"
#include "vaclab/rng.hpp"

namespace vaclab {

double PsychometricFit::p_correct(double level) const {
    return gamma + (1.0 - gamma - lapse) * normal_cdf((level - mu) / sigma);
}

double threshold_for(double mu, double sigma, double lapse, double gamma, double criterion) {
    const double span = 1.0 - gamma - lapse;
    const double frac = (criterion - gamma) / span;
    if (!(frac > 0.0 && frac < 1.0)) {
        throw DomainError("threshold criterion " + std::to_string(criterion) +
                          " is unreachable for chance " + std::to_string(gamma) + " and lapse " +
                          std::to_string(lapse));
    }
    return mu + sigma * normal_quantile(frac);
}

namespace {

struct LevelCounts {
    double level;
    int n;
    int correct;
};

std::vector<LevelCounts> aggregate(std::span<const PsychTrial> trials) {
    std::map<double, std::pair<int, int>> by_level;
    for (const auto& t : trials) {
        auto& [n, k] = by_level[t.level];
        ++n;
        if (t.correct) ++k;
    }
    std::vector<LevelCounts> counts;
    counts.reserve(by_level.size());
    for (const auto& [level, nk] : by_level) counts.push_back({level, nk.first, nk.second});
    return counts;
}

double negative_log_likelihood(const std::vector<LevelCounts>& counts, double gamma, double mu,
                               double sigma, double lapse) {
    double nll = 0.0;
    for (const auto& c : counts) {
        double p = gamma + (1.0 - gamma - lapse) * normal_cdf((c.level - mu) / sigma);
        p = std::clamp(p, 1e-9, 1.0 - 1e-9);
        nll -= c.correct * std::log(p) + (c.n - c.correct) * std::log(1.0 - p);
    }
    return nll;
}

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

}  // namespace

PsychometricFit fit_psychometric(std::span<const PsychTrial> trials, double gamma,
                                 double criterion, double lapse_max) {
    const auto counts = aggregate(trials);
    if (counts.size() < 2) {
        throw FitError("psychometric fit: need at least 2 distinct levels, got " +
                       std::to_string(counts.size()));
    }
    int total = 0, total_correct = 0;
    for (const auto& c : counts) {
        total += c.n;
        total_correct += c.correct;
    }
    if (total_correct == 0 || total_correct == total) {
        throw FitError("psychometric fit: responses are all " +
                       std::string(total_correct == 0 ? "wrong" : "correct") +
                       "; the curve is not identifiable");
    }

    const double lo = counts.front().level;
    const double hi = counts.back().level;
    const double spread = std::max(hi - lo, 1e-6 * std::max(std::abs(hi), 1.0));

    // Parameters are searched as (mu, log sigma, logit-scaled lapse).
    const bool fit_lapse = lapse_max > 0.0;
    auto unpack = [&](std::span<const double> x, double& mu, double& sigma, double& lapse) {
        mu = x[0];
        sigma = std::exp(x[1]);
        lapse = fit_lapse ? lapse_max * logistic(x[2]) : 0.0;
    };
    auto objective = [&](std::span<const double> x) {
        double mu, sigma, lapse;
        unpack(x, mu, sigma, lapse);
        return negative_log_likelihood(counts, gamma, mu, sigma, lapse);
    };

    const int dims = fit_lapse ? 3 : 2;
    std::vector<double> best_x;
    double best_f = 0.0;
    for (int start = 0; start < 5; ++start) {
        const double mu0 = lo + spread * (0.15 + 0.175 * start);
        std::vector<double> x0 = {mu0, std::log(spread / 4.0)};
        std::vector<double> step = {spread / 4.0, 0.7};
        if (fit_lapse) {
            x0.push_back(-3.0);  // small initial lapse
            step.push_back(1.5);
        }
        const auto r = nelder_mead(objective, x0, step, 1200 * dims, 1e-11);
        if (best_x.empty() || r.fx < best_f) {
            best_x = r.x;
            best_f = r.fx;
        }
    }

    PsychometricFit fit;
    unpack(best_x, fit.mu, fit.sigma, fit.lapse);
    fit.gamma = gamma;
    fit.criterion = criterion;
    fit.log_likelihood = -best_f;
    fit.n_trials = total;
    fit.threshold = threshold_for(fit.mu, fit.sigma, fit.lapse, gamma, criterion);
    fit.threshold_extrapolated = fit.threshold < lo || fit.threshold > hi;
    return fit;
}

std::pair<double, double> bootstrap_ci(std::span<const PsychTrial> trials,
                                       const PsychometricFit& fit, int n_resamples,
                                       std::uint64_t seed, int threads) {
    if (n_resamples < 500) {
        throw DomainError("bootstrap_ci: need at least 500 resamples, got " +
                          std::to_string(n_resamples));
    }
    std::vector<double> thresholds(n_resamples);
    std::vector<char> failed(n_resamples, 0);

    std::vector<PsychTrial> base(trials.begin(), trials.end());
    parallel_for(n_resamples, threads, [&](int r) {
        Rng rng(mix_seed(seed, 0xb007u, static_cast<std::uint64_t>(r)));
        std::vector<PsychTrial> resampled = base;
        for (auto& t : resampled) t.correct = rng.bernoulli(fit.p_correct(t.level));
        try {
            const auto refit =
                fit_psychometric(resampled, fit.gamma, fit.criterion, fit.lapse > 0.0 ? 0.06 : 0.0);
            thresholds[r] = refit.threshold;
        } catch (const Error&) {
            failed[r] = 1;
        }
    });

    std::vector<double> ok;
    ok.reserve(n_resamples);
    for (int r = 0; r < n_resamples; ++r) {
        if (!failed[r]) ok.push_back(thresholds[r]);
    }
    if (ok.size() < 0.8 * n_resamples) {
        throw FitError("bootstrap_ci: " + std::to_string(n_resamples - ok.size()) + " of " +
                       std::to_string(n_resamples) + " resamples failed to fit; CI is unstable");
    }
    std::sort(ok.begin(), ok.end());
    auto quantile = [&](double q) {
        const double pos = q * (ok.size() - 1);
        const std::size_t i = static_cast<std::size_t>(pos);
        if (i + 1 >= ok.size()) return ok.back();
        const double frac = pos - i;
        return ok[i] * (1.0 - frac) + ok[i + 1] * frac;
    };
    return {quantile(0.025), quantile(0.975)};
}

PsychometricFit fit_pooled(std::span<const std::vector<PsychTrial>> trial_sets, double gamma,
                           double criterion, double lapse_max) {
    std::vector<PsychTrial> pooled;
    for (const auto& set : trial_sets) pooled.insert(pooled.end(), set.begin(), set.end());
    if (pooled.empty()) throw FitError("fit_pooled: no trials to pool");
    return fit_psychometric(pooled, gamma, criterion, lapse_max);
}

}  // namespace vaclab
