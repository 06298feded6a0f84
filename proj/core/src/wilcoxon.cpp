#include "vaclab/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "vaclab/errors.hpp"
#include "vaclab/math.hpp"

namespace vaclab {

namespace {

struct Ranked {
    std::vector<int> doubled_ranks;  // 2x midrank per non-zero difference, integer-exact
    std::vector<bool> positive;
    double tie_correction = 0.0;  // sum of (t^3 - t) over tie groups
};

Ranked rank_differences(std::span<const double> differences) {
    struct Entry {
        double magnitude;
        bool positive;
    };
    std::vector<Entry> entries;
    for (double d : differences) {
        if (d != 0.0) entries.push_back({std::abs(d), d > 0.0});
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.magnitude < b.magnitude; });

    Ranked out;
    out.doubled_ranks.resize(entries.size());
    out.positive.resize(entries.size());
    std::size_t i = 0;
    while (i < entries.size()) {
        std::size_t j = i;
        while (j + 1 < entries.size() && entries[j + 1].magnitude == entries[i].magnitude) ++j;
        // Midrank of 1-based positions i+1 .. j+1, doubled to stay integral.
        const int doubled_midrank = static_cast<int>(i + 1 + j + 1);
        const double t = static_cast<double>(j - i + 1);
        out.tie_correction += t * t * t - t;
        for (std::size_t k = i; k <= j; ++k) {
            out.doubled_ranks[k] = doubled_midrank;
            out.positive[k] = entries[k].positive;
        }
        i = j + 1;
    }
    return out;
}

// Exact distribution of the doubled positive-rank sum by dynamic programming
// over sign assignments; equivalent to enumerating all 2^m cases.
double exact_tail(const Ranked& ranked, long long w2_obs, bool upper) {
    int total = 0;
    for (int r : ranked.doubled_ranks) total += r;
    std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
    count[0] = 1.0;
    int reach = 0;
    for (int r : ranked.doubled_ranks) {
        reach += r;
        for (int s = reach; s >= r; --s) count[s] += count[s - r];
    }
    double tail = 0.0;
    if (upper) {
        for (long long s = w2_obs; s <= total; ++s) tail += count[static_cast<std::size_t>(s)];
    } else {
        for (long long s = 0; s <= w2_obs; ++s) tail += count[static_cast<std::size_t>(s)];
    }
    return tail / std::ldexp(1.0, static_cast<int>(ranked.doubled_ranks.size()));
}

double approx_tail(const Ranked& ranked, double w_plus, bool upper) {
    const double m = static_cast<double>(ranked.doubled_ranks.size());
    const double mean = m * (m + 1.0) / 4.0;
    const double variance = m * (m + 1.0) * (2.0 * m + 1.0) / 24.0 - ranked.tie_correction / 48.0;
    const double sd = std::sqrt(variance);
    if (upper) return 1.0 - normal_cdf((w_plus - mean - 0.5) / sd);
    return normal_cdf((w_plus - mean + 0.5) / sd);
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> differences, Tail tail) {
    const Ranked ranked = rank_differences(differences);
    const int m = static_cast<int>(ranked.doubled_ranks.size());
    if (m < 5) {
        throw FitError("wilcoxon: need at least 5 non-zero differences, got " + std::to_string(m));
    }

    long long w2_plus = 0;
    for (int i = 0; i < m; ++i) {
        if (ranked.positive[i]) w2_plus += ranked.doubled_ranks[i];
    }

    WilcoxonResult result;
    result.m = m;
    result.w_plus = static_cast<double>(w2_plus) / 2.0;
    result.exact = m <= 20;

    auto tail_p = [&](bool upper) {
        return result.exact ? exact_tail(ranked, w2_plus, upper)
                            : approx_tail(ranked, result.w_plus, upper);
    };

    switch (tail) {
        case Tail::Greater:
            result.p = tail_p(true);
            break;
        case Tail::Less:
            result.p = tail_p(false);
            break;
        case Tail::TwoSided:
            result.p = std::min(1.0, 2.0 * std::min(tail_p(true), tail_p(false)));
            break;
    }
    return result;
}

}  // namespace vaclab
