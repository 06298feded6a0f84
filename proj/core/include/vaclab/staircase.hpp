#pragma once

#include <utility>
#include <vector>

// Adaptive 1-up/2-down staircase with multiplicative steps (equal in log
// space), converging on the ~70.7%-correct level. The step sizes and the
// reversal-count stopping rule are session defaults, not measurements.

namespace vaclab {

struct StaircaseConfig {
    double start_level = 1.0;
    double up_factor = 1.26;
    double down_factor = 0.794;
    int stop_reversals = 12;
    double min_level = 1e-3;
    double max_level = 1e3;
};

class Staircase {
public:
    explicit Staircase(const StaircaseConfig& config);

    double level() const { return level_; }
    bool done() const { return reversal_levels_.size() >= static_cast<std::size_t>(config_.stop_reversals); }
    int reversals() const { return static_cast<int>(reversal_levels_.size()); }
    int trials() const { return static_cast<int>(history_.size()); }

    // Applies the 1-up/2-down rule: every error raises the level, every
    // second consecutive correct lowers it. Logs a reversal whenever the
    // direction of movement changes.
    void update(bool correct);

    const std::vector<std::pair<double, bool>>& history() const { return history_; }
    const std::vector<double>& reversal_levels() const { return reversal_levels_; }

    // Geometric mean of the last `count` reversal levels.
    double reversal_mean(int count) const;

private:
    void move(double factor, int direction);

    StaircaseConfig config_;
    double level_;
    int consecutive_correct_ = 0;
    int last_direction_ = 0;  // +1 up, -1 down, 0 before any move
    std::vector<std::pair<double, bool>> history_;
    std::vector<double> reversal_levels_;
};

}  // namespace vaclab
