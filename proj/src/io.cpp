#include "fastscan/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fastscan {

using nlohmann::json;

namespace {

json summary_row_json(const TraceSummary& row) {
  return json{{"trace", row.trace},
              {"algorithm", row.algorithm},
              {"qoe", row.qoe},
              {"normalized_qoe", row.normalized_qoe},
              {"total_stall_s", row.total_stall_s},
              {"level_pmf", row.level_pmf},
              {"percent_level0", row.percent_level0},
              {"quality_switches", row.quality_switches}};
}

}  // namespace

const std::vector<double>& default_ladder_mbps() {
  static const std::vector<double> ladder = {0.338, 0.583, 0.959, 1.898,
                                             2.806};
  return ladder;
}

VideoManifest parse_manifest_json(const std::string& text) {
  json doc = json::parse(text);
  const Seconds duration = doc.at("chunk_duration_s").get<Seconds>();
  const Seconds startup = doc.at("startup_delay_s").get<Seconds>();
  std::vector<double> rates;
  std::vector<std::string> names;
  for (const auto& level : doc.at("levels")) {
    rates.push_back(level.at("nominal_mbps").get<double>() *
                    kBytesPerMbpsSecond);
    names.push_back(level.value("name", ""));
  }
  std::vector<std::vector<Bytes>> sizes;
  for (const auto& chunk : doc.at("chunks")) {
    sizes.push_back(chunk.at("sizes_bytes").get<std::vector<Bytes>>());
    if (sizes.back().size() != rates.size())
      throw std::invalid_argument("chunk sizes_bytes must match the level count");
  }
  return VideoManifest(duration, startup, std::move(sizes), std::move(rates),
                       std::move(names));
}

std::string manifest_to_json(const VideoManifest& manifest) {
  json levels = json::array();
  for (int n = 0; n < manifest.num_levels(); ++n) {
    json level;
    level["name"] = n < static_cast<int>(manifest.level_names().size())
                        ? manifest.level_names()[static_cast<size_t>(n)]
                        : ("level-" + std::to_string(n));
    level["nominal_mbps"] =
        manifest.nominal_rate_bps().empty()
            ? 0.0
            : manifest.nominal_rate_bps()[static_cast<size_t>(n)] /
                  kBytesPerMbpsSecond;
    levels.push_back(level);
  }
  json chunks = json::array();
  for (int i = 1; i <= manifest.num_chunks(); ++i) {
    std::vector<Bytes> row;
    for (int n = 0; n < manifest.num_levels(); ++n)
      row.push_back(manifest.size(i, n));
    chunks.push_back(json{{"sizes_bytes", row}});
  }
  json doc{{"chunk_duration_s", manifest.chunk_duration_s()},
           {"startup_delay_s", manifest.startup_delay_s()},
           {"levels", levels},
           {"chunks", chunks}};
  return doc.dump(2) + "\n";
}

BandwidthTimeline parse_trace_text(const std::string& text) {
  std::vector<Bytes> samples;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string token;
    if (!(ls >> token)) continue;  // blank or comment-only line
    std::string extra;
    double mbps = 0;
    try {
      size_t used = 0;
      mbps = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw std::invalid_argument("trace line " + std::to_string(line_no) +
                                  ": not a number: " + token);
    }
    if (ls >> extra)
      throw std::invalid_argument("trace line " + std::to_string(line_no) +
                                  ": one value per line expected");
    if (!(mbps >= 0) || !std::isfinite(mbps))
      throw std::invalid_argument("trace line " + std::to_string(line_no) +
                                  ": value must be finite and non-negative");
    samples.push_back(mbps * kBytesPerMbpsSecond);
  }
  if (samples.empty())
    throw std::invalid_argument("trace holds no samples");
  return BandwidthTimeline(std::move(samples));
}

std::string trace_to_text(const BandwidthTimeline& timeline) {
  std::ostringstream out;
  out.precision(17);
  for (Bytes b : timeline.samples()) out << b / kBytesPerMbpsSecond << "\n";
  return out.str();
}

BandwidthTimeline generate_trace(const TraceGenParams& params) {
  if (params.length_s < 1)
    throw std::invalid_argument("trace length must be at least 1 s");
  if (params.mean_mbps < 0 || params.stddev_mbps < 0)
    throw std::invalid_argument("trace mean and stddev must be non-negative");
  std::mt19937_64 rng(params.seed);
  std::vector<Bytes> samples;
  samples.reserve(static_cast<size_t>(params.length_s));

  if (params.model == "constant") {
    samples.assign(static_cast<size_t>(params.length_s),
                   params.mean_mbps * kBytesPerMbpsSecond);
  } else if (params.model == "markov-2state") {
    const double high = params.mean_mbps + params.stddev_mbps;
    const double low = std::max(0.0, params.mean_mbps - params.stddev_mbps);
    std::bernoulli_distribution flip(params.switch_prob);
    bool in_high = (params.seed % 2) == 0;
    for (Slot t = 0; t < params.length_s; ++t) {
      if (flip(rng)) in_high = !in_high;
      samples.push_back((in_high ? high : low) * kBytesPerMbpsSecond);
    }
  } else if (params.model == "ou") {
    std::normal_distribution<double> noise(0.0, params.stddev_mbps);
    double x = params.mean_mbps;
    for (Slot t = 0; t < params.length_s; ++t) {
      x += params.reversion * (params.mean_mbps - x) + noise(rng);
      x = std::max(0.0, x);
      samples.push_back(x * kBytesPerMbpsSecond);
    }
  } else {
    throw std::invalid_argument("unknown trace model: " + params.model);
  }
  return BandwidthTimeline(std::move(samples));
}

VideoManifest generate_manifest(const ManifestGenParams& params) {
  if (params.num_chunks < 1 || params.num_levels < 1)
    throw std::invalid_argument("manifest needs chunks and levels");
  if (params.vbr_jitter_percent < 0 || params.vbr_jitter_percent >= 100)
    throw std::invalid_argument("jitter must lie in [0, 100)");
  std::vector<double> ladder = params.nominal_mbps;
  if (ladder.empty()) {
    ladder = default_ladder_mbps();
    if (params.num_levels != static_cast<int>(ladder.size())) {
      // Geometric fill between the stock endpoints for other level counts.
      ladder.clear();
      const double lo = default_ladder_mbps().front();
      const double hi = default_ladder_mbps().back();
      for (int n = 0; n < params.num_levels; ++n) {
        const double f = params.num_levels == 1
                             ? 0.0
                             : static_cast<double>(n) / (params.num_levels - 1);
        ladder.push_back(lo * std::pow(hi / lo, f));
      }
    }
  }
  if (static_cast<int>(ladder.size()) != params.num_levels)
    throw std::invalid_argument("rate ladder must match the level count");
  for (size_t n = 1; n < ladder.size(); ++n)
    if (!(ladder[n] > ladder[n - 1]))
      throw std::invalid_argument("rate ladder must be strictly increasing");

  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<std::vector<Bytes>> sizes;
  std::vector<std::string> names;
  for (int n = 0; n < params.num_levels; ++n)
    names.push_back("level-" + std::to_string(n));
  for (int i = 0; i < params.num_chunks; ++i) {
    std::vector<Bytes> row;
    for (int n = 0; n < params.num_levels; ++n) {
      double bytes = ladder[static_cast<size_t>(n)] * kBytesPerMbpsSecond *
                     static_cast<double>(params.chunk_duration_s);
      if (params.vbr_jitter_percent > 0)
        bytes *= 1.0 + (params.vbr_jitter_percent / 100.0) * unit(rng);
      bytes = std::round(bytes);
      if (!row.empty() && bytes <= row.back()) bytes = row.back() + 1;
      row.push_back(bytes);
    }
    sizes.push_back(std::move(row));
  }
  std::vector<double> rates;
  for (double mbps : ladder) rates.push_back(mbps * kBytesPerMbpsSecond);
  return VideoManifest(params.chunk_duration_s, params.startup_delay_s,
                       std::move(sizes), std::move(rates), std::move(names));
}

std::string session_log_to_json(const SessionLog& log) {
  json chunks = json::array();
  for (const auto& c : log.chunks) {
    chunks.push_back(json{{"index", c.index},
                          {"level", c.level},
                          {"fallback", c.fallback},
                          {"bytes", c.bytes},
                          {"start_s", c.start_s},
                          {"end_s", c.end_s},
                          {"first_byte_slot", c.first_byte_slot},
                          {"finish_slot", c.finish_slot},
                          {"deadline", c.deadline},
                          {"stall_s", c.stall_s}});
  }
  json doc{{"algorithm", log.algorithm},
           {"num_chunks", log.num_chunks},
           {"num_levels", log.num_levels},
           {"startup_delay_s", log.startup_delay_s},
           {"total_stall_s", log.total_stall_s},
           {"trace_extended", log.trace_extended},
           {"qoe", log.qoe},
           {"level_pmf", log.level_pmf},
           {"quality_switches", log.quality_switches},
           {"buffer_s", log.buffer_s},
           {"chunks", chunks}};
  return doc.dump(2) + "\n";
}

std::string session_log_to_csv(const SessionLog& log) {
  std::ostringstream out;
  out.precision(17);
  out << "index,level,bytes,start,end,deadline,stall_s\n";
  for (const auto& c : log.chunks) {
    out << c.index << "," << c.level << "," << c.bytes << "," << c.start_s
        << "," << c.end_s << "," << c.deadline << "," << c.stall_s << "\n";
  }
  return out.str();
}

std::string comparison_to_json(const ComparisonReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    json entry{{"trace", e.trace}, {"algorithm", e.algorithm}, {"ok", e.ok}};
    if (e.ok) {
      entry["qoe"] = e.log.qoe;
      entry["total_stall_s"] = e.log.total_stall_s;
      entry["level_pmf"] = e.log.level_pmf;
      entry["quality_switches"] = e.log.quality_switches;
    } else {
      entry["error"] = e.error;
    }
    entries.push_back(std::move(entry));
  }
  json rows = json::array();
  for (const auto& row : report.summary.rows) rows.push_back(summary_row_json(row));
  json doc{{"reference_algorithm", report.summary.reference_algorithm},
           {"entries", entries},
           {"summary", rows}};
  return doc.dump(2) + "\n";
}

std::string comparison_to_csv(const ComparisonReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "trace,algorithm,qoe,normalized_qoe,total_stall_s,percent_level0,"
         "quality_switches\n";
  for (const auto& row : report.summary.rows) {
    out << row.trace << "," << row.algorithm << "," << row.qoe << ","
        << row.normalized_qoe << "," << row.total_stall_s << ","
        << row.percent_level0 << "," << row.quality_switches << "\n";
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

VideoManifest load_manifest(const std::string& path) {
  return parse_manifest_json(read_file(path));
}

void save_manifest(const VideoManifest& manifest, const std::string& path) {
  write_file(path, manifest_to_json(manifest));
}

BandwidthTimeline load_trace(const std::string& path) {
  return parse_trace_text(read_file(path));
}

void save_trace(const BandwidthTimeline& timeline, const std::string& path) {
  write_file(path, trace_to_text(timeline));
}

}  // namespace fastscan
