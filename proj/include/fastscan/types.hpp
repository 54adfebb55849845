#ifndef FASTSCAN_TYPES_HPP_
#define FASTSCAN_TYPES_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace fastscan {

// Time is discretized to 1-second slots, indexed from 1. Chunk durations,
// startup delay, deadlines and stalls are whole seconds; byte amounts are
// doubles so partial-slot fetches stay exact for integer and dyadic inputs.
using Slot = std::int64_t;
using Seconds = std::int64_t;
using Bytes = double;

constexpr double kBytesPerMbpsSecond = 125000.0;  // 1 Mbps over a 1 s slot

// Per-chunk, per-level encoded sizes plus the video timing parameters.
// Chunks are 1-based throughout (matching deadline(i) = S + (i-1)L),
// quality levels 0-based.
class VideoManifest {
 public:
  VideoManifest() = default;
  VideoManifest(Seconds chunk_duration_s, Seconds startup_delay_s,
                std::vector<std::vector<Bytes>> sizes,
                std::vector<double> nominal_rate_bps = {},
                std::vector<std::string> level_names = {});

  Seconds chunk_duration_s() const { return chunk_duration_s_; }
  Seconds startup_delay_s() const { return startup_delay_s_; }
  int num_chunks() const { return static_cast<int>(sizes_.size()); }
  int num_levels() const {
    return sizes_.empty() ? 0 : static_cast<int>(sizes_[0].size());
  }
  int top_level() const { return num_levels() - 1; }

  // X_{n,i}
  Bytes size(int chunk, int level) const {
    return sizes_[static_cast<size_t>(chunk - 1)][static_cast<size_t>(level)];
  }
  // Y_{n,i} = X_{n,i} - X_{n-1,i}, with Y_{0,i} = X_{0,i}
  Bytes incremental(int chunk, int level) const {
    const auto& row = sizes_[static_cast<size_t>(chunk - 1)];
    return level == 0 ? row[0]
                      : row[static_cast<size_t>(level)] -
                            row[static_cast<size_t>(level - 1)];
  }
  std::vector<Bytes> level_sizes(int level) const;

  // True when every level has identical chunk sizes across the video.
  bool is_cbr() const;

  const std::vector<double>& nominal_rate_bps() const {
    return nominal_rate_bps_;
  }
  const std::vector<std::string>& level_names() const { return level_names_; }

 private:
  void validate() const;

  Seconds chunk_duration_s_ = 0;
  Seconds startup_delay_s_ = 0;
  std::vector<std::vector<Bytes>> sizes_;
  std::vector<double> nominal_rate_bps_;
  std::vector<std::string> level_names_;
};

// Per-slot available bandwidth B(j) with prefix sums c(j).
class BandwidthTimeline {
 public:
  BandwidthTimeline() = default;
  explicit BandwidthTimeline(std::vector<Bytes> samples);

  Slot num_slots() const { return static_cast<Slot>(samples_.size()); }

  // B(j); slots beyond the known horizon carry no bandwidth.
  Bytes at(Slot j) const {
    return (j >= 1 && j <= num_slots()) ? samples_[static_cast<size_t>(j - 1)]
                                        : 0.0;
  }
  // c(j) = sum of B(1..j), clamped to the known horizon; c(0) = 0.
  Bytes cum(Slot j) const {
    if (j <= 0) return 0.0;
    if (j > num_slots()) j = num_slots();
    return cumulative_[static_cast<size_t>(j)];
  }

  const std::vector<Bytes>& samples() const { return samples_; }

  // Copy extended to `horizon` slots by holding the last sample.
  BandwidthTimeline extended(Slot horizon) const;

 private:
  std::vector<Bytes> samples_;
  std::vector<Bytes> cumulative_;  // cumulative_[j] = c(j), size + 1
};

// One decision window: chunks i'..C, entered at slot j' with s seconds of
// startup delay plus stalls already behind us.
struct WindowContext {
  int first_chunk = 1;   // i'
  int last_chunk = 1;    // C = min(i' + W - 1, V)
  Slot current_slot = 1; // j'
  Seconds chunk_duration_s = 1;  // L
  Seconds prior_stall_s = 0;  // s = S + sum of alpha(k) for k < i'
  Seconds buffer_cap_s = 0;   // B_m
  BandwidthTimeline predicted;
  // Deadlines of chunks downloaded before this window that are still
  // sitting in the playback buffer (ascending). They count against B_m.
  std::vector<Slot> buffered_deadlines;

  int window_size() const { return last_chunk - first_chunk + 1; }
};

// Quality decisions for one window: level per chunk, the implied composite
// size X(i), per-chunk stall d(i) and the playback deadline.
struct DecisionSet {
  int first_chunk = 1;
  int last_chunk = 0;
  std::vector<int> level;          // decided quality level per chunk
  std::vector<Bytes> target_size;  // X(i) = X_{level(i), i}
  std::vector<Seconds> stall_before;  // d(i), non-decreasing
  std::vector<Slot> deadline;         // absolute slot

  int window_size() const { return last_chunk - first_chunk + 1; }
  Seconds total_stall() const {
    return stall_before.empty() ? 0 : stall_before.back();
  }
  // I_{n,i} in the indicator form: chunk decided at level >= n.
  bool indicator(int n, int chunk) const {
    return level[static_cast<size_t>(chunk - first_chunk)] >= n;
  }
};

// One fetch action: `amount` bytes of chunk `chunk`'s level-`level`
// increment during slot `slot`. A schedule is the feasibility witness.
struct FetchRecord {
  int chunk = 0;
  int level = 0;
  Slot slot = 0;
  Bytes amount = 0;
};

struct FetchSchedule {
  std::vector<FetchRecord> records;
  std::vector<Seconds> buffer_s;  // occupancy at integer times 1..horizon
  Slot horizon = 0;
};

}  // namespace fastscan

#endif  // FASTSCAN_TYPES_HPP_
