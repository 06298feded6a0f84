#pragma once

#include <span>

// Wilcoxon signed-rank test for paired differences. Zero differences are
// dropped, tied magnitudes are mid-ranked. Up to m = 20 the tail probability
// comes from the exact distribution over all 2^m sign assignments; above
// that a normal approximation with tie correction and continuity correction
// is used.

namespace vaclab {

enum class Tail { TwoSided, Greater, Less };

struct WilcoxonResult {
    double p = 1.0;
    double w_plus = 0.0;  // sum of ranks of positive differences
    int m = 0;            // non-zero differences used
    bool exact = false;
};

// `Greater` tests for positive-leaning differences. Throws FitError when
// fewer than 5 non-zero differences remain.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> differences, Tail tail);

}  // namespace vaclab
