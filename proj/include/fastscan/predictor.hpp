#ifndef FASTSCAN_PREDICTOR_HPP_
#define FASTSCAN_PREDICTOR_HPP_

#include <vector>

#include "fastscan/types.hpp"

namespace fastscan {

// Ring of the last eta per-chunk throughput measurements (bytes per second,
// each one chunk's bytes divided by its download time). Zero or negative
// measurements are clamped to a configured floor so the harmonic mean stays
// defined.
class ThroughputHistory {
 public:
  explicit ThroughputHistory(int capacity, double floor_bps = 1.0);

  void push(double rate_bps);
  void record(Bytes bytes, double seconds);

  bool empty() const { return samples_.empty(); }
  int size() const { return static_cast<int>(samples_.size()); }
  int capacity() const { return capacity_; }
  double floor_bps() const { return floor_bps_; }

  // Oldest to newest.
  const std::vector<double>& samples() const { return samples_; }

 private:
  int capacity_;
  double floor_bps_;
  std::vector<double> samples_;
};

// Harmonic mean of the stored samples: k / sum(1/B_t). Damps outliers, the
// default predictor. Throws NoPredictionError on an empty history.
double predict_harmonic(const ThroughputHistory& history);

// Exponentially weighted moving average, newest sample weighted highest.
double predict_ewma(const ThroughputHistory& history, double weight);

}  // namespace fastscan

#endif  // FASTSCAN_PREDICTOR_HPP_
