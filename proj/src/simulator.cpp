#include "fastscan/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fastscan/engine.hpp"
#include "fastscan/errors.hpp"
#include "fastscan/feasibility.hpp"
#include "fastscan/predictor.hpp"

namespace fastscan {

namespace {

constexpr Bytes kEps = 1e-9;

double nominal_rate(const VideoManifest& manifest, int level) {
  if (!manifest.nominal_rate_bps().empty())
    return manifest.nominal_rate_bps()[static_cast<size_t>(level)];
  // Fall back to the mean chunk rate when the manifest carries no rates.
  double total = 0;
  for (int i = 1; i <= manifest.num_chunks(); ++i)
    total += manifest.size(i, level);
  return total / static_cast<double>(manifest.num_chunks() *
                                     manifest.chunk_duration_s());
}

std::vector<double> level_rates(const VideoManifest& manifest) {
  std::vector<double> rates;
  for (int n = 0; n < manifest.num_levels(); ++n)
    rates.push_back(nominal_rate(manifest, n));
  return rates;
}

}  // namespace

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "fastscan") return Algorithm::kFastScan;
  if (name == "rb") return Algorithm::kRb;
  if (name == "bba") return Algorithm::kBba;
  if (name == "festive") return Algorithm::kFestive;
  throw std::invalid_argument("unknown algorithm: " + name);
}

const char* algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::kFastScan: return "fastscan";
    case Algorithm::kRb: return "rb";
    case Algorithm::kBba: return "bba";
    case Algorithm::kFestive: return "festive";
  }
  return "unknown";
}

SessionLog run_session(const VideoManifest& manifest,
                       const BandwidthTimeline& actual,
                       const SessionConfig& config) {
  if (actual.num_slots() < 1)
    throw std::invalid_argument("actual trace must hold at least one sample");
  if (config.window < 1 || config.eta < 1)
    throw std::invalid_argument("window and eta must be at least 1");
  const Seconds L = manifest.chunk_duration_s();
  if (config.buffer_cap_s < L)
    throw std::invalid_argument("buffer must hold at least one chunk");
  if (config.algorithm == Algorithm::kFastScan)
    validate_beta(config.beta, config.window, manifest.top_level());

  const int V = manifest.num_chunks();
  const Seconds S = manifest.startup_delay_s();
  const std::vector<double> rates = level_rates(manifest);
  const double bootstrap = config.bootstrap_rate_bps > 0
                               ? config.bootstrap_rate_bps
                               : rates.front();

  SessionLog log;
  log.algorithm = algorithm_name(config.algorithm);
  log.num_chunks = V;
  log.num_levels = manifest.num_levels();
  log.startup_delay_s = S;

  ThroughputHistory history(config.eta, config.history_floor_bps);
  std::vector<int> recent_levels;
  int previous_level = 0;

  auto actual_at = [&](Slot j) -> Bytes {
    if (j <= actual.num_slots()) return actual.at(j);
    log.trace_extended = true;
    return actual.at(actual.num_slots());  // hold the last sample
  };

  double pos = 0.0;       // link time consumed, fractional seconds
  Seconds alpha_sum = 0;  // realized stalls so far
  std::vector<Slot> finished_deadlines;  // ascending, for buffer occupancy

  auto occupancy_chunks = [&](double t) {
    int n = 0;
    for (auto it = finished_deadlines.rbegin(); it != finished_deadlines.rend();
         ++it) {
      if (static_cast<double>(*it) > t)
        ++n;
      else
        break;
    }
    return n;
  };

  for (int i = 1; i <= V; ++i) {
    const Seconds s_i = S + alpha_sum;
    const Slot deadline_pre = s_i + (static_cast<Seconds>(i) - 1) * L;

    // The cap admits a new chunk only when the buffered-but-unplayed count
    // leaves room; idle the link until the next deadline frees a slot.
    {
      Slot j0 = static_cast<Slot>(std::floor(pos)) + 1;
      while ((occupancy_chunks(static_cast<double>(j0)) + 1) * L >
             config.buffer_cap_s)
        ++j0;
      pos = std::max(pos, static_cast<double>(j0 - 1));
    }

    const Slot start_slot = static_cast<Slot>(std::floor(pos)) + 1;
    const double frac = pos - std::floor(pos);
    const double buffer_now = static_cast<double>(
        occupancy_chunks(pos) * L);

    // Predicted rate from history (never from the unseen future).
    double predicted_rate = bootstrap;
    if (!history.empty()) {
      predicted_rate = config.predictor == PredictorKind::kEwma
                           ? predict_ewma(history, config.ewma_weight)
                           : predict_harmonic(history);
    }
    predicted_rate = std::max(predicted_rate, config.history_floor_bps);

    int level = 0;
    switch (config.algorithm) {
      case Algorithm::kFastScan: {
        const int last = std::min(V, i + config.window - 1);
        Bytes base_need = 0, top_need = 0;
        for (int k = i; k <= last; ++k) {
          base_need += manifest.size(k, 0);
          top_need += manifest.size(k, manifest.top_level());
        }
        WindowContext ctx;
        ctx.first_chunk = i;
        ctx.last_chunk = last;
        ctx.current_slot = start_slot;
        ctx.chunk_duration_s = L;
        ctx.prior_stall_s = s_i;
        ctx.buffer_cap_s = config.buffer_cap_s;
        for (Slot d : finished_deadlines)
          if (d > start_slot - 1) ctx.buffered_deadlines.push_back(d);

        std::vector<Bytes> predicted(static_cast<size_t>(start_slot - 1), 0.0);
        if (config.predictor == PredictorKind::kOracle) {
          Bytes covered = 0;
          Slot j = start_slot;
          predicted.push_back(actual_at(j) * (1.0 - frac));
          covered += predicted.back();
          const Bytes need = base_need + 2 * top_need;
          const Slot hard_cap = start_slot + s_i +
                                static_cast<Slot>(last) * L +
                                config.progress_timeout_slots;
          while ((covered < need ||
                  static_cast<Slot>(predicted.size()) <
                      s_i + static_cast<Slot>(last) * L + 8) &&
                 j < hard_cap) {
            ++j;
            predicted.push_back(actual_at(j));
            covered += predicted.back();
          }
        } else {
          const Slot horizon =
              s_i + static_cast<Slot>(last) * L +
              static_cast<Slot>(
                  std::ceil((base_need + 2 * top_need) / predicted_rate)) +
              8;
          predicted.push_back(predicted_rate * (1.0 - frac));
          while (static_cast<Slot>(predicted.size()) < horizon)
            predicted.push_back(predicted_rate);
        }
        ctx.predicted = BandwidthTimeline(std::move(predicted));
        try {
          const DecisionSet plan =
              fastscan_window(ctx, manifest, config.beta, config.lambda);
          level = plan.level.front();
        } catch (const InsufficientTraceError&) {
          level = 0;  // prediction horizon too short: play safe
        }
        break;
      }
      case Algorithm::kRb:
        level = rb_decide(predicted_rate, rates);
        break;
      case Algorithm::kBba:
        level = bba_decide(buffer_now, config.baseline, manifest.num_levels());
        break;
      case Algorithm::kFestive:
        if (history.empty()) {
          level = 0;
        } else {
          level = festive_decide(history, previous_level, rates, recent_levels,
                                 config.baseline);
        }
        break;
    }

    bool fallback = false;
    if (buffer_now < static_cast<double>(config.low_buffer_threshold_s) &&
        level > 0) {
      --level;
      fallback = true;
    }

    // Download the decided size against the actual per-slot bandwidth.
    const Bytes size = manifest.size(i, level);
    const double start_pos = pos;
    Bytes remaining = size;
    Slot first_byte_slot = 0;
    Slot dead_slots = 0;
    while (remaining > kEps) {
      const Slot slot = static_cast<Slot>(std::floor(pos)) + 1;
      const double slot_end = static_cast<double>(slot);
      const Bytes rate = actual_at(slot);
      const Bytes can = rate * (slot_end - pos);
      if (can <= kEps) {
        pos = slot_end;
        if (++dead_slots > config.progress_timeout_slots)
          throw ProgressTimeoutError(i, slot);
        continue;
      }
      dead_slots = 0;
      if (first_byte_slot == 0) first_byte_slot = slot;
      if (remaining >= can - kEps) {
        pos = slot_end;
        remaining -= can;
        if (remaining < kEps) remaining = 0;
      } else {
        pos += remaining / rate;
        remaining = 0;
      }
    }

    const Slot finish_slot = static_cast<Slot>(std::ceil(pos - kEps));
    const Seconds alpha = std::max<Seconds>(0, finish_slot - deadline_pre);
    alpha_sum += alpha;
    const Slot deadline_final = deadline_pre + alpha;
    finished_deadlines.push_back(deadline_final);

    ChunkRecord rec;
    rec.index = i;
    rec.level = level;
    rec.fallback = fallback;
    rec.bytes = size;
    rec.start_s = start_pos;
    rec.end_s = pos;
    rec.first_byte_slot = first_byte_slot == 0 ? start_slot : first_byte_slot;
    rec.finish_slot = finish_slot;
    rec.deadline = deadline_final;
    rec.stall_s = alpha;
    log.chunks.push_back(rec);

    history.record(size, pos - start_pos);
    recent_levels.push_back(level);
    if (static_cast<int>(recent_levels.size()) > config.baseline.festive_history)
      recent_levels.erase(recent_levels.begin());
    previous_level = level;
  }

  log.total_stall_s = alpha_sum;

  Slot horizon = 0;
  for (const auto& c : log.chunks)
    horizon = std::max({horizon, c.deadline, c.finish_slot});
  log.buffer_s.assign(static_cast<size_t>(horizon), 0);
  for (Slot t = 1; t <= horizon; ++t) {
    int active = 0;
    for (const auto& c : log.chunks)
      if (c.first_byte_slot <= t && c.deadline > t) ++active;
    log.buffer_s[static_cast<size_t>(t - 1)] = active * L;
  }

  log.level_pmf.assign(static_cast<size_t>(manifest.num_levels()), 0);
  for (const auto& c : log.chunks)
    ++log.level_pmf[static_cast<size_t>(c.level)];
  for (size_t k = 1; k < log.chunks.size(); ++k)
    if (log.chunks[k].level != log.chunks[k - 1].level) ++log.quality_switches;
  log.qoe = score(log, QoeParams{config.beta, config.lambda});
  return log;
}

ComparisonReport run_comparison(const VideoManifest& manifest,
                                const std::vector<NamedTrace>& traces,
                                const std::vector<SessionConfig>& configs) {
  ComparisonReport report;
  if (configs.empty()) return report;

  std::string reference = algorithm_name(configs.front().algorithm);
  for (const auto& c : configs) {
    if (c.algorithm == Algorithm::kFastScan) {
      reference = algorithm_name(c.algorithm);
      break;
    }
  }
  const QoeParams params{configs.front().beta, configs.front().lambda};

  for (const auto& trace : traces) {
    std::vector<SessionLog> trace_logs;
    std::vector<size_t> entry_index;
    for (const auto& config : configs) {
      ComparisonEntry entry;
      entry.trace = trace.name;
      entry.algorithm = algorithm_name(config.algorithm);
      try {
        entry.log = run_session(manifest, trace.timeline, config);
        entry.ok = true;
        trace_logs.push_back(entry.log);
        entry_index.push_back(report.entries.size());
      } catch (const std::exception& e) {
        entry.ok = false;
        entry.error = e.what();
      }
      report.entries.push_back(std::move(entry));
    }
    if (!trace_logs.empty()) {
      Summary trace_summary = summarize(trace_logs, params, reference);
      for (auto& row : trace_summary.rows) row.trace = trace.name;
      report.summary.reference_algorithm = reference;
      report.summary.rows.insert(report.summary.rows.end(),
                                 trace_summary.rows.begin(),
                                 trace_summary.rows.end());
    }
  }
  return report;
}

}  // namespace fastscan
