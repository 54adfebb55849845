#include "fastscan/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "fastscan/buffer.hpp"
#include "fastscan/errors.hpp"

namespace fastscan {

namespace {
// Absolute slack for byte comparisons; inputs measured in bytes, so this is
// far below one bit of payload while absorbing double rounding on VBR sizes.
constexpr Bytes kEps = 1e-6;
}  // namespace

bool validate_beta(double beta, int window, int top_level) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("beta must lie strictly inside (0,1)");
  if (window < 1) throw std::invalid_argument("window must hold at least one chunk");
  if (top_level < 0) throw std::invalid_argument("top level must be non-negative");
  for (int n = 0; n <= top_level; ++n) {
    double tail = 0.0;
    for (int k = top_level; k > n; --k) tail += std::pow(beta, k);
    if (!(window * tail < std::pow(beta, n))) return false;
  }
  return true;
}

const char* constraint_name(ConstraintFamily family) {
  switch (family) {
    case ConstraintFamily::kBaseCoverage: return "base-coverage";
    case ConstraintFamily::kLevelMonotone: return "level-monotonicity";
    case ConstraintFamily::kSlotBandwidth: return "slot-bandwidth";
    case ConstraintFamily::kBufferCap: return "buffer-cap";
    case ConstraintFamily::kDeadline: return "deadline";
    case ConstraintFamily::kCompleteness: return "completeness";
    case ConstraintFamily::kStallSign: return "stall-sign";
  }
  return "unknown";
}

FetchSchedule replay_decisions(const VideoManifest& manifest,
                               const BandwidthTimeline& timeline,
                               const WindowContext& ctx,
                               const DecisionSet& decisions) {
  const Seconds L = manifest.chunk_duration_s();
  const Seconds cap = ctx.buffer_cap_s;
  const int count = decisions.window_size();

  FetchSchedule out;
  BufferTracker buffer;
  for (Slot d : ctx.buffered_deadlines) buffer.add(d);

  std::vector<Bytes> bw = timeline.samples();
  auto avail = [&](Slot j) -> Bytes& { return bw[static_cast<size_t>(j - 1)]; };

  Slot j = ctx.current_slot;
  Slot horizon = ctx.current_slot;
  for (int k = 0; k < count; ++k) {
    const int chunk = decisions.first_chunk + k;
    const Slot deadline = decisions.deadline[static_cast<size_t>(k)];
    horizon = std::max(horizon, deadline);
    Bytes remaining = decisions.target_size[static_cast<size_t>(k)];
    if (remaining <= kEps) continue;

    // Level split offsets: bytes [0, Y0) belong to level 0, then Y1, ...
    const int decided_level = decisions.level[static_cast<size_t>(k)];
    Bytes fetched_so_far = 0;
    bool started = false;

    while (remaining > kEps && j <= timeline.num_slots()) {
      if (!started && deadline > j &&
          (buffer.active(j) + 1) * L > cap) {
        ++j;
        continue;
      }
      if (j > deadline) break;  // no bytes may land after the deadline
      Bytes take = std::min(avail(j), remaining);
      if (take > 0) {
        // Attribute the bytes to level increments in order.
        Bytes offset = fetched_so_far;
        Bytes left = take;
        Bytes boundary = 0;
        for (int n = 0; n <= decided_level && left > kEps; ++n) {
          boundary += manifest.incremental(chunk, n);
          if (offset < boundary - kEps) {
            Bytes part = std::min(left, boundary - offset);
            out.records.push_back({chunk, n, j, part});
            offset += part;
            left -= part;
          }
        }
        avail(j) -= take;
        remaining -= take;
        fetched_so_far += take;
        if (!started) {
          started = true;
          buffer.add(deadline);
        }
      }
      if (remaining <= kEps) {
        if (avail(j) <= kEps) ++j;  // exhausted slot hands over
        break;
      }
      if (avail(j) <= kEps) ++j;
    }
    if (remaining > kEps) {
      // Could not complete in time; later chunks still get their turn so the
      // checker sees the full picture.
      continue;
    }
  }

  horizon = std::max(horizon, std::min(j, timeline.num_slots()));
  out.horizon = horizon;

  // Buffer trajectory from the records themselves.
  std::map<int, Slot> first_byte;
  for (const auto& r : out.records) {
    auto it = first_byte.find(r.chunk);
    if (it == first_byte.end() || r.slot < it->second) first_byte[r.chunk] = r.slot;
  }
  out.buffer_s.assign(static_cast<size_t>(horizon), 0);
  auto deadline_of = [&](int chunk) {
    return decisions.deadline[static_cast<size_t>(chunk - decisions.first_chunk)];
  };
  for (Slot t = 1; t <= horizon; ++t) {
    int active = 0;
    for (const auto& [chunk, start] : first_byte) {
      if (start <= t && deadline_of(chunk) > t) ++active;
    }
    for (Slot d : ctx.buffered_deadlines) {
      if (d > t) ++active;
    }
    out.buffer_s[static_cast<size_t>(t - 1)] = active * L;
  }
  return out;
}

FeasibilityReport check_feasibility(const VideoManifest& manifest,
                                    const BandwidthTimeline& timeline,
                                    const WindowContext& ctx,
                                    const DecisionSet& decisions,
                                    const FetchSchedule& schedule) {
  const int count = decisions.window_size();
  if (count <= 0 || decisions.first_chunk < 1 ||
      decisions.last_chunk > manifest.num_chunks())
    throw StructuralError("decision window does not fit the manifest");
  if (decisions.level.size() != static_cast<size_t>(count) ||
      decisions.target_size.size() != static_cast<size_t>(count) ||
      decisions.stall_before.size() != static_cast<size_t>(count) ||
      decisions.deadline.size() != static_cast<size_t>(count))
    throw StructuralError("decision vectors disagree on the window size");
  for (const auto& r : schedule.records) {
    if (r.chunk < decisions.first_chunk || r.chunk > decisions.last_chunk ||
        r.level < 0 || r.level >= manifest.num_levels() || r.slot < 1)
      throw StructuralError("schedule record outside the decision window");
  }

  FeasibilityReport report;
  std::optional<Violation> first;
  auto fail = [&](ConstraintFamily family, int chunk, int level, Slot slot,
                  std::string detail) {
    if (!first) first = Violation{family, chunk, level, slot, std::move(detail)};
  };

  const Seconds L = manifest.chunk_duration_s();
  const int N = manifest.top_level();

  // Base coverage + level monotonicity (levels are stored as a single
  // decided level per chunk, so monotone indicators hold by construction;
  // what can break is a level outside [0, N] or a size that does not match).
  report.base_coverage = true;
  report.level_monotone = true;
  for (int k = 0; k < count; ++k) {
    const int chunk = decisions.first_chunk + k;
    const int level = decisions.level[static_cast<size_t>(k)];
    if (level < 0) {
      report.base_coverage = false;
      fail(ConstraintFamily::kBaseCoverage, chunk, level, 0,
           "chunk skipped below level 0");
      break;
    }
    if (level > N ||
        std::abs(decisions.target_size[static_cast<size_t>(k)] -
                 manifest.size(chunk, level)) > kEps) {
      report.level_monotone = false;
      fail(ConstraintFamily::kLevelMonotone, chunk, level, 0,
           "target size inconsistent with decided level");
      break;
    }
  }

  // Stall signs and the deadline identity deadline(i) = s + (i-1)L + d(i).
  report.stall_sign = true;
  for (int k = 0; k < count && report.stall_sign; ++k) {
    const int chunk = decisions.first_chunk + k;
    const Seconds d = decisions.stall_before[static_cast<size_t>(k)];
    if (d < 0 ||
        (k > 0 && d < decisions.stall_before[static_cast<size_t>(k - 1)])) {
      report.stall_sign = false;
      fail(ConstraintFamily::kStallSign, chunk, -1, 0,
           "stalls must be non-negative and non-decreasing");
      break;
    }
    const Slot expected =
        ctx.prior_stall_s + (static_cast<Seconds>(chunk) - 1) * L + d;
    if (decisions.deadline[static_cast<size_t>(k)] != expected) {
      report.stall_sign = false;
      fail(ConstraintFamily::kStallSign, chunk, -1,
           decisions.deadline[static_cast<size_t>(k)],
           "deadline does not equal s + (i-1)L + d(i)");
      break;
    }
  }

  // Per-slot bandwidth.
  report.slot_bandwidth = true;
  {
    std::map<Slot, Bytes> per_slot;
    for (const auto& r : schedule.records) per_slot[r.slot] += r.amount;
    for (const auto& [slot, total] : per_slot) {
      if (total > timeline.at(slot) + kEps) {
        report.slot_bandwidth = false;
        fail(ConstraintFamily::kSlotBandwidth, 0, -1, slot,
             "slot fetch total exceeds available bandwidth");
        break;
      }
    }
  }

  // Deadline cutoffs and non-negative amounts.
  report.deadline = true;
  for (const auto& r : schedule.records) {
    const Slot deadline =
        decisions.deadline[static_cast<size_t>(r.chunk - decisions.first_chunk)];
    if (r.amount < -kEps || r.slot > deadline) {
      report.deadline = false;
      fail(ConstraintFamily::kDeadline, r.chunk, r.level, r.slot,
           "bytes fetched after the chunk deadline");
      break;
    }
  }

  // Completeness: per (chunk, level) totals equal I_{n,i} * Y_{n,i}.
  report.completeness = true;
  {
    std::map<std::pair<int, int>, Bytes> totals;
    for (const auto& r : schedule.records) totals[{r.chunk, r.level}] += r.amount;
    for (int k = 0; k < count && report.completeness; ++k) {
      const int chunk = decisions.first_chunk + k;
      const int level = decisions.level[static_cast<size_t>(k)];
      for (int n = 0; n <= N; ++n) {
        const Bytes expected =
            n <= level ? manifest.incremental(chunk, n) : 0.0;
        auto it = totals.find({chunk, n});
        const Bytes got = it == totals.end() ? 0.0 : it->second;
        if (std::abs(got - expected) > kEps) {
          report.completeness = false;
          fail(ConstraintFamily::kCompleteness, chunk, n, 0,
               "fetched bytes do not match the decided increment");
          break;
        }
      }
    }
  }

  // Buffer cap at every integer time: started chunks not yet due, plus
  // whatever the session already had buffered when the window began.
  report.buffer_cap = true;
  {
    std::map<int, Slot> first_byte;
    Slot horizon = schedule.horizon;
    for (const auto& r : schedule.records) {
      auto it = first_byte.find(r.chunk);
      if (it == first_byte.end() || r.slot < it->second) first_byte[r.chunk] = r.slot;
      horizon = std::max(horizon, r.slot);
    }
    for (int k = 0; k < count; ++k)
      horizon = std::max(horizon, decisions.deadline[static_cast<size_t>(k)]);
    for (Slot t = 1; t <= horizon && report.buffer_cap; ++t) {
      int active = 0;
      for (const auto& [chunk, start] : first_byte) {
        const Slot deadline = decisions.deadline[static_cast<size_t>(
            chunk - decisions.first_chunk)];
        if (start <= t && deadline > t) ++active;
      }
      for (Slot d : ctx.buffered_deadlines)
        if (d > t) ++active;
      if (active * L > ctx.buffer_cap_s) {
        report.buffer_cap = false;
        fail(ConstraintFamily::kBufferCap, 0, -1, t,
             "buffer occupancy exceeds the cap");
      }
    }
  }

  report.first_violation = first;
  report.ok = report.base_coverage && report.level_monotone &&
              report.slot_bandwidth && report.buffer_cap && report.deadline &&
              report.completeness && report.stall_sign;
  return report;
}

}  // namespace fastscan
