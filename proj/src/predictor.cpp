#include "fastscan/predictor.hpp"

#include <algorithm>
#include <stdexcept>

#include "fastscan/errors.hpp"

namespace fastscan {

ThroughputHistory::ThroughputHistory(int capacity, double floor_bps)
    : capacity_(capacity), floor_bps_(floor_bps) {
  if (capacity < 1) throw std::invalid_argument("history capacity must be >= 1");
  if (!(floor_bps > 0)) throw std::invalid_argument("rate floor must be positive");
}

void ThroughputHistory::push(double rate_bps) {
  samples_.push_back(std::max(rate_bps, floor_bps_));
  if (static_cast<int>(samples_.size()) > capacity_)
    samples_.erase(samples_.begin());
}

void ThroughputHistory::record(Bytes bytes, double seconds) {
  push(seconds > 0 ? bytes / seconds : 0.0);
}

double predict_harmonic(const ThroughputHistory& history) {
  if (history.empty()) throw NoPredictionError();
  double inv_sum = 0.0;
  for (double b : history.samples()) inv_sum += 1.0 / b;
  return static_cast<double>(history.size()) / inv_sum;
}

double predict_ewma(const ThroughputHistory& history, double weight) {
  if (history.empty()) throw NoPredictionError();
  if (!(weight > 0.0 && weight < 1.0))
    throw std::invalid_argument("ewma weight must lie in (0,1)");
  const auto& s = history.samples();
  double value = s.front();
  for (size_t i = 1; i < s.size(); ++i)
    value = (1.0 - weight) * value + weight * s[i];
  return value;
}

}  // namespace fastscan
