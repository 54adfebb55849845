#include "fastscan/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "fastscan/buffer.hpp"
#include "fastscan/engine.hpp"
#include "fastscan/errors.hpp"

namespace fastscan {

namespace {

constexpr Bytes kEps = 1e-9;

// Copyable in-order fetch state for the stall-placement search.
struct PackState {
  std::vector<Bytes> bw;
  Slot j = 1;
  std::vector<Slot> committed_deadlines;  // ascending, for buffer counts

  int active(Slot t) const {
    int n = 0;
    for (auto it = committed_deadlines.rbegin();
         it != committed_deadlines.rend(); ++it) {
      if (*it > t)
        ++n;
      else
        break;
    }
    return n;
  }
};

// Greedy fetch of one chunk under a fixed deadline; returns the finish slot
// or -1 when the timeline ends first.
Slot fetch_chunk(PackState& st, const WindowContext& ctx, Bytes size,
                 Slot deadline) {
  const Seconds L = ctx.chunk_duration_s;
  const Seconds cap = ctx.buffer_cap_s;
  if (size <= kEps) return st.j;
  bool started = false;
  Bytes remaining = size;
  while (true) {
    if (st.j > static_cast<Slot>(st.bw.size())) return -1;
    if (!started && deadline > st.j && (st.active(st.j) + 1) * L > cap) {
      ++st.j;
      continue;
    }
    Bytes& slot_bw = st.bw[static_cast<size_t>(st.j - 1)];
    const Bytes take = std::min(slot_bw, remaining);
    if (take > 0) {
      slot_bw -= take;
      remaining -= take;
      started = true;
    }
    if (remaining <= kEps) {
      const Slot finish = st.j;
      if (slot_bw <= kEps) ++st.j;  // exhausted slot hands over
      return finish;
    }
    if (slot_bw <= kEps) ++st.j;
  }
}

bool place_stalls(const WindowContext& ctx, const std::vector<Bytes>& sizes,
                  int k, Seconds d_prev, Seconds budget, const PackState& st) {
  if (k == static_cast<int>(sizes.size())) return true;
  const int chunk = ctx.first_chunk + k;
  for (Seconds d = d_prev; d <= budget; ++d) {
    const Slot deadline =
        ctx.prior_stall_s + (static_cast<Seconds>(chunk) - 1) *
                                ctx.chunk_duration_s + d;
    PackState next = st;
    const Slot finish =
        fetch_chunk(next, ctx, sizes[static_cast<size_t>(k)], deadline);
    if (finish < 0 || finish > deadline) continue;
    if (sizes[static_cast<size_t>(k)] > kEps)
      next.committed_deadlines.push_back(deadline);
    if (place_stalls(ctx, sizes, k + 1, d, budget, next)) return true;
  }
  return false;
}

}  // namespace

Seconds min_stall_bruteforce(const VideoManifest& manifest,
                             const BandwidthTimeline& timeline,
                             const WindowContext& ctx) {
  const int count = ctx.window_size();
  if (count > 6)
    throw SizeGuardError("min-stall search is limited to 6 chunks");

  std::vector<Bytes> sizes;
  for (int i = ctx.first_chunk; i <= ctx.last_chunk; ++i)
    sizes.push_back(manifest.size(i, 0));

  WindowContext local = ctx;
  local.predicted = timeline;
  const Level0Result greedy = level0_forward(local, sizes);
  const Seconds greedy_total =
      greedy.stall_before.empty() ? 0 : greedy.stall_before.back();

  PackState initial;
  initial.bw = timeline.samples();
  initial.j = ctx.current_slot;
  for (Slot d : ctx.buffered_deadlines) initial.committed_deadlines.push_back(d);

  for (Seconds budget = 0; budget < greedy_total; ++budget) {
    if (place_stalls(local, sizes, 0, 0, budget, initial)) return budget;
  }
  return greedy_total;
}

OracleResult enumerate_optimal(const VideoManifest& manifest,
                               const BandwidthTimeline& timeline,
                               const WindowContext& ctx, double beta,
                               double lambda) {
  const int count = ctx.window_size();
  const int levels = manifest.num_levels();
  if (count > 10)
    throw SizeGuardError("oracle enumeration is limited to 10 chunks");
  double combos = std::pow(static_cast<double>(levels), count);
  if (combos > 1e6)
    throw SizeGuardError("oracle enumeration is limited to 1e6 assignments");

  WindowContext local = ctx;
  local.predicted = timeline;
  const QoeParams params{beta, lambda};
  const int top = manifest.top_level();

  OracleResult out;
  bool have_best = false;
  std::vector<int> assignment(static_cast<size_t>(count), 0);
  std::vector<Bytes> sizes(static_cast<size_t>(count), 0);

  while (true) {
    ++out.enumerated;
    for (int k = 0; k < count; ++k)
      sizes[static_cast<size_t>(k)] =
          manifest.size(ctx.first_chunk + k, assignment[static_cast<size_t>(k)]);
    bool feasible = true;
    Level0Result packed;
    try {
      packed = level0_forward(local, sizes);
    } catch (const InsufficientTraceError&) {
      feasible = false;  // cannot complete within the known horizon
    }
    if (feasible) {
      const Seconds stall =
          packed.stall_before.empty() ? 0 : packed.stall_before.back();
      const double qoe = score_levels(assignment, top, stall, params);
      if (!have_best || qoe > out.best_qoe) {
        have_best = true;
        out.best_qoe = qoe;
        out.best_stall = stall;
        out.optimal_levels.clear();
        out.optimal_levels.push_back(assignment);
        out.best_counts = level_counts(assignment, top);

        DecisionSet best;
        best.first_chunk = ctx.first_chunk;
        best.last_chunk = ctx.last_chunk;
        best.level = assignment;
        best.target_size = sizes;
        best.stall_before = packed.stall_before;
        best.deadline = packed.deadline;
        out.best_decisions = std::move(best);
      } else if (qoe == out.best_qoe) {
        out.optimal_levels.push_back(assignment);
      }
    }
    // Odometer: the last chunk's level moves fastest, so the first vector
    // reaching the optimum is the lexicographically smallest one.
    int k = count - 1;
    while (k >= 0 && assignment[static_cast<size_t>(k)] == levels - 1) {
      assignment[static_cast<size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
    ++assignment[static_cast<size_t>(k)];
  }
  if (!have_best)
    throw InsufficientTraceError(ctx.first_chunk, timeline.num_slots());
  return out;
}

}  // namespace fastscan
