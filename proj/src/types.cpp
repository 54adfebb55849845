#include "fastscan/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fastscan {

VideoManifest::VideoManifest(Seconds chunk_duration_s, Seconds startup_delay_s,
                             std::vector<std::vector<Bytes>> sizes,
                             std::vector<double> nominal_rate_bps,
                             std::vector<std::string> level_names)
    : chunk_duration_s_(chunk_duration_s),
      startup_delay_s_(startup_delay_s),
      sizes_(std::move(sizes)),
      nominal_rate_bps_(std::move(nominal_rate_bps)),
      level_names_(std::move(level_names)) {
  validate();
}

void VideoManifest::validate() const {
  if (chunk_duration_s_ <= 0) throw std::invalid_argument("chunk duration must be positive");
  if (startup_delay_s_ < 0) throw std::invalid_argument("startup delay must be non-negative");
  if (sizes_.empty()) throw std::invalid_argument("manifest needs at least one chunk");
  const size_t levels = sizes_[0].size();
  if (levels == 0) throw std::invalid_argument("manifest needs at least one quality level");
  for (size_t i = 0; i < sizes_.size(); ++i) {
    const auto& row = sizes_[i];
    if (row.size() != levels)
      throw std::invalid_argument("chunk " + std::to_string(i + 1) +
                                  " has a different level count");
    if (row[0] < 0 || !std::isfinite(row[0]))
      throw std::invalid_argument("chunk sizes must be finite and non-negative");
    for (size_t n = 1; n < levels; ++n) {
      if (!(row[n] > row[n - 1]) || !std::isfinite(row[n]))
        throw std::invalid_argument("chunk " + std::to_string(i + 1) +
                                    " sizes must be strictly increasing in level");
    }
  }
  if (!nominal_rate_bps_.empty() && nominal_rate_bps_.size() != levels)
    throw std::invalid_argument("nominal rates must match the level count");
}

std::vector<Bytes> VideoManifest::level_sizes(int level) const {
  std::vector<Bytes> out;
  out.reserve(sizes_.size());
  for (const auto& row : sizes_) out.push_back(row[static_cast<size_t>(level)]);
  return out;
}

bool VideoManifest::is_cbr() const {
  for (size_t n = 0; n < sizes_[0].size(); ++n) {
    for (size_t i = 1; i < sizes_.size(); ++i) {
      if (sizes_[i][n] != sizes_[0][n]) return false;
    }
  }
  return true;
}

BandwidthTimeline::BandwidthTimeline(std::vector<Bytes> samples)
    : samples_(std::move(samples)) {
  for (Bytes b : samples_) {
    if (b < 0 || !std::isfinite(b))
      throw std::invalid_argument("bandwidth samples must be finite and non-negative");
  }
  cumulative_.resize(samples_.size() + 1, 0.0);
  for (size_t j = 0; j < samples_.size(); ++j)
    cumulative_[j + 1] = cumulative_[j] + samples_[j];
}

BandwidthTimeline BandwidthTimeline::extended(Slot horizon) const {
  if (horizon <= num_slots() || samples_.empty()) return *this;
  std::vector<Bytes> out = samples_;
  out.resize(static_cast<size_t>(horizon), samples_.back());
  return BandwidthTimeline(std::move(out));
}

}  // namespace fastscan
