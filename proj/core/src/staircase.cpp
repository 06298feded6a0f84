#include "vaclab/staircase.hpp"

#include <algorithm>
#include <cmath>

#include "vaclab/errors.hpp"

namespace vaclab {

Staircase::Staircase(const StaircaseConfig& config) : config_(config), level_(config.start_level) {
    if (!(config.start_level > 0.0) || !(config.min_level > 0.0) ||
        !(config.max_level > config.min_level)) {
        throw DomainError("staircase: levels must be positive with min < max");
    }
    if (!(config.up_factor > 1.0) || !(config.down_factor > 0.0) || !(config.down_factor < 1.0)) {
        throw DomainError("staircase: need up_factor > 1 and down_factor in (0, 1)");
    }
}

void Staircase::move(double factor, int direction) {
    if (last_direction_ != 0 && direction != last_direction_) {
        reversal_levels_.push_back(level_);
    }
    last_direction_ = direction;
    level_ = std::clamp(level_ * factor, config_.min_level, config_.max_level);
}

void Staircase::update(bool correct) {
    history_.emplace_back(level_, correct);
    if (!correct) {
        consecutive_correct_ = 0;
        move(config_.up_factor, +1);
        return;
    }
    if (++consecutive_correct_ >= 2) {
        consecutive_correct_ = 0;
        move(config_.down_factor, -1);
    }
}

double Staircase::reversal_mean(int count) const {
    const int n = static_cast<int>(reversal_levels_.size());
    const int use = std::min(count, n);
    if (use == 0) throw FitError("staircase: no reversals recorded yet");
    double log_sum = 0.0;
    for (int i = n - use; i < n; ++i) log_sum += std::log(reversal_levels_[i]);
    return std::exp(log_sum / use);
}

}  // namespace vaclab
