#ifndef FASTSCAN_BASELINES_HPP_
#define FASTSCAN_BASELINES_HPP_

#include <vector>

#include "fastscan/predictor.hpp"

namespace fastscan {

struct BaselineParams {
  Seconds bba_reservoir_s = 10;
  Seconds bba_cushion_s = 30;
  double festive_alpha = 12.0;
  int festive_history = 5;
};

// Rate-based: highest level whose nominal rate is strictly below the
// prediction, clamped to level 0.
int rb_decide(double prediction_bps, const std::vector<double>& level_rates_bps);

// Buffer-based: level 0 up to the reservoir, top level beyond the cushion,
// linear in between (floor-rounded).
int bba_decide(double buffer_s, const BaselineParams& params, int num_levels);

// Festive-style score minimization over {current-1, current, current+1}:
// stability = recent switch count (+1 for switching now), efficiency =
// |rate(n) / min(prediction, rate(n)) - 1|; minimize stability +
// alpha * efficiency, ties toward the lower level. `recent_levels` holds the
// last decisions, oldest first.
int festive_decide(const ThroughputHistory& history, int current_level,
                   const std::vector<double>& level_rates_bps,
                   const std::vector<int>& recent_levels,
                   const BaselineParams& params);

}  // namespace fastscan

#endif  // FASTSCAN_BASELINES_HPP_
