#ifndef FASTSCAN_SIMULATOR_HPP_
#define FASTSCAN_SIMULATOR_HPP_

#include <string>
#include <vector>

#include "fastscan/baselines.hpp"
#include "fastscan/qoe.hpp"
#include "fastscan/types.hpp"

namespace fastscan {

enum class Algorithm { kFastScan, kRb, kBba, kFestive };
enum class PredictorKind {
  kHarmonic,
  kEwma,
  kOracle,  // reads the actual trace: for offline-equivalence runs only
};

Algorithm algorithm_from_name(const std::string& name);
const char* algorithm_name(Algorithm algo);

struct SessionConfig {
  Algorithm algorithm = Algorithm::kFastScan;
  PredictorKind predictor = PredictorKind::kHarmonic;
  int window = 5;                  // W
  int eta = 5;                     // throughput history depth
  double beta = 0.1;
  double lambda = 10.0;
  Seconds buffer_cap_s = 60;       // B_m, one minute
  Seconds low_buffer_threshold_s = 5;
  double ewma_weight = 0.8;
  // Used before the first chunk completes; zero picks the lowest level's
  // nominal rate (ground truth would leak the trace).
  double bootstrap_rate_bps = 0;
  double history_floor_bps = 1250;  // 0.01 Mbps
  Slot progress_timeout_slots = 3600;
  BaselineParams baseline;
};

struct ChunkRecord {
  int index = 0;
  int level = 0;
  bool fallback = false;  // low-buffer rule knocked the level down one
  Bytes bytes = 0;
  double start_s = 0;  // download start, fractional seconds
  double end_s = 0;
  Slot first_byte_slot = 0;
  Slot finish_slot = 0;  // ceil(end_s)
  Slot deadline = 0;     // after this chunk's own stall
  Seconds stall_s = 0;   // alpha(i)
};

struct SessionLog {
  std::string algorithm;
  int num_chunks = 0;
  int num_levels = 0;
  Seconds startup_delay_s = 0;
  Seconds total_stall_s = 0;
  bool trace_extended = false;  // ran past the supplied trace (held last value)
  std::vector<ChunkRecord> chunks;
  std::vector<Seconds> buffer_s;  // occupancy at integer times 1..horizon
  std::vector<int> level_pmf;     // chunks fetched at exactly each level
  int quality_switches = 0;
  double qoe = 0;
};

// Trace-driven playback loop: after every chunk download the configured
// algorithm re-decides the next chunk's level from predicted bandwidth, the
// chunk is downloaded byte-accurately against the actual trace, and stalls
// accrue whenever a chunk misses its deadline. Downloads continue during
// stalls; the buffer cap is enforced by idling the link.
SessionLog run_session(const VideoManifest& manifest,
                       const BandwidthTimeline& actual,
                       const SessionConfig& config);

struct NamedTrace {
  std::string name;
  BandwidthTimeline timeline;
};

struct ComparisonEntry {
  std::string trace;
  std::string algorithm;
  bool ok = false;
  std::string error;
  SessionLog log;
};

struct ComparisonReport {
  std::vector<ComparisonEntry> entries;  // ordered by (trace, config)
  Summary summary;
};

// Runs every (trace, config) pair, aggregating per-pair failures instead of
// aborting the batch. Normalization is against the FastScan entry when one
// is present, else the first config.
ComparisonReport run_comparison(const VideoManifest& manifest,
                                const std::vector<NamedTrace>& traces,
                                const std::vector<SessionConfig>& configs);

}  // namespace fastscan

#endif  // FASTSCAN_SIMULATOR_HPP_
