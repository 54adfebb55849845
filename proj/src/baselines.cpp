#include "fastscan/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fastscan {

int rb_decide(double prediction_bps,
              const std::vector<double>& level_rates_bps) {
  if (level_rates_bps.empty())
    throw std::invalid_argument("rb needs at least one level rate");
  int pick = 0;
  for (int n = 0; n < static_cast<int>(level_rates_bps.size()); ++n) {
    if (level_rates_bps[static_cast<size_t>(n)] < prediction_bps) pick = n;
  }
  return pick;
}

int bba_decide(double buffer_s, const BaselineParams& params, int num_levels) {
  if (num_levels < 1) throw std::invalid_argument("bba needs at least one level");
  if (!(params.bba_reservoir_s < params.bba_cushion_s))
    throw std::invalid_argument("reservoir must be below the cushion");
  const int top = num_levels - 1;
  if (buffer_s <= static_cast<double>(params.bba_reservoir_s)) return 0;
  if (buffer_s >= static_cast<double>(params.bba_cushion_s)) return top;
  const double span = static_cast<double>(params.bba_cushion_s -
                                          params.bba_reservoir_s);
  const double frac = (buffer_s - static_cast<double>(params.bba_reservoir_s)) / span;
  return std::min(top, static_cast<int>(std::floor(top * frac)));
}

int festive_decide(const ThroughputHistory& history, int current_level,
                   const std::vector<double>& level_rates_bps,
                   const std::vector<int>& recent_levels,
                   const BaselineParams& params) {
  if (history.empty()) throw std::invalid_argument("festive needs history");
  const int top = static_cast<int>(level_rates_bps.size()) - 1;
  const double prediction = predict_harmonic(history);
  // Efficiency is measured against the throughput-target rate, so the score
  // pulls toward the highest sustainable level rather than rewarding any
  // rate below the prediction equally.
  const int reference = rb_decide(prediction, level_rates_bps);
  const double ref_rate = level_rates_bps[static_cast<size_t>(reference)];

  int switches = 0;
  const int depth = params.festive_history;
  const int start = std::max(0, static_cast<int>(recent_levels.size()) - depth);
  for (int i = start + 1; i < static_cast<int>(recent_levels.size()); ++i) {
    if (recent_levels[static_cast<size_t>(i)] !=
        recent_levels[static_cast<size_t>(i - 1)])
      ++switches;
  }

  int best = current_level;
  double best_score = 0;
  bool have = false;
  for (int n = std::max(0, current_level - 1);
       n <= std::min(top, current_level + 1); ++n) {
    const double rate = level_rates_bps[static_cast<size_t>(n)];
    const double efficiency =
        std::abs(rate / std::min(prediction, ref_rate) - 1.0);
    const double stability = switches + (n != current_level ? 1 : 0);
    const double total = stability + params.festive_alpha * efficiency;
    if (!have || total < best_score ||
        (total == best_score && n < best)) {
      best = n;
      best_score = total;
      have = true;
    }
  }
  return best;
}

}  // namespace fastscan
