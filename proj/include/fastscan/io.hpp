#ifndef FASTSCAN_IO_HPP_
#define FASTSCAN_IO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "fastscan/simulator.hpp"
#include "fastscan/types.hpp"

namespace fastscan {

// Manifest JSON:
// {
//   "chunk_duration_s": 4, "startup_delay_s": 2,
//   "levels": [{"name": "360p", "nominal_mbps": 0.338}, ...],
//   "chunks": [{"sizes_bytes": [...one per level...]}, ...]
// }
VideoManifest parse_manifest_json(const std::string& text);
std::string manifest_to_json(const VideoManifest& manifest);
VideoManifest load_manifest(const std::string& path);
void save_manifest(const VideoManifest& manifest, const std::string& path);

// Trace files: one non-negative Mbps value per line, one line per 1-second
// slot; '#' starts a comment. Stored internally as bytes per slot
// (1 Mbps = 125000 bytes).
BandwidthTimeline parse_trace_text(const std::string& text);
std::string trace_to_text(const BandwidthTimeline& timeline);
BandwidthTimeline load_trace(const std::string& path);
void save_trace(const BandwidthTimeline& timeline, const std::string& path);

struct TraceGenParams {
  std::string model = "constant";  // constant | markov-2state | ou
  Slot length_s = 300;
  double mean_mbps = 1.0;
  double stddev_mbps = 0.5;
  double switch_prob = 0.15;  // markov-2state
  double reversion = 0.2;     // ou
  std::uint64_t seed = 1;
};
BandwidthTimeline generate_trace(const TraceGenParams& params);

struct ManifestGenParams {
  int num_chunks = 65;
  int num_levels = 5;
  Seconds chunk_duration_s = 4;
  Seconds startup_delay_s = 2;
  double vbr_jitter_percent = 0;  // 0 => CBR
  std::vector<double> nominal_mbps;  // empty => stock five-level ladder
  std::uint64_t seed = 1;
};
VideoManifest generate_manifest(const ManifestGenParams& params);

// Stock five-level ladder used when no rates are given.
const std::vector<double>& default_ladder_mbps();

std::string session_log_to_json(const SessionLog& log);
std::string session_log_to_csv(const SessionLog& log);
std::string comparison_to_json(const ComparisonReport& report);
std::string comparison_to_csv(const ComparisonReport& report);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace fastscan

#endif  // FASTSCAN_IO_HPP_
