#include "fastscan/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fastscan/buffer.hpp"
#include "fastscan/errors.hpp"
#include "fastscan/feasibility.hpp"

namespace fastscan {

namespace {

constexpr Bytes kEps = 1e-9;

std::uint64_t* counter(ScanStats* stats) {
  static thread_local std::uint64_t sink = 0;
  return stats ? &stats->iterations : &sink;
}

// deadline(i) = s + (i-1)L + d(i)
Slot deadline_at(const WindowContext& ctx, int chunk, Seconds stall) {
  return ctx.prior_stall_s +
         (static_cast<Seconds>(chunk) - 1) * ctx.chunk_duration_s + stall;
}

}  // namespace

// NOTE: level0_forward below doubles as the oracle's stall evaluator, so it
// accepts arbitrary per-chunk sizes, not just the base row.

Level0Result level0_forward(const WindowContext& ctx,
                            const VideoManifest& manifest, ScanStats* stats) {
  std::vector<Bytes> sizes;
  sizes.reserve(static_cast<size_t>(ctx.window_size()));
  for (int i = ctx.first_chunk; i <= ctx.last_chunk; ++i)
    sizes.push_back(manifest.size(i, 0));
  return level0_forward(ctx, sizes, stats);
}

Level0Result level0_forward(const WindowContext& ctx,
                            const std::vector<Bytes>& sizes,
                            ScanStats* stats) {
  const int count = ctx.window_size();
  if (static_cast<int>(sizes.size()) != count)
    throw std::invalid_argument("size vector does not match the window");
  const Seconds L = ctx.chunk_duration_s;
  const Seconds cap = ctx.buffer_cap_s;
  std::uint64_t* iters = counter(stats);

  std::vector<Bytes> bw = ctx.predicted.samples();
  BufferTracker buffer;
  for (Slot d : ctx.buffered_deadlines) buffer.add(d);

  Level0Result out;
  out.stall_before.assign(static_cast<size_t>(count), 0);
  out.deadline.assign(static_cast<size_t>(count), 0);

  Slot j = ctx.current_slot;
  Seconds stall = 0;  // d so far, propagated forward
  for (int k = 0; k < count; ++k) {
    const int chunk = ctx.first_chunk + k;
    Slot deadline = deadline_at(ctx, chunk, stall);
    Bytes remaining = sizes[static_cast<size_t>(k)];
    bool started = remaining <= kEps;  // zero-size chunks never enter the buffer
    while (remaining > kEps) {
      ++*iters;
      if (j > ctx.predicted.num_slots()) throw InsufficientTraceError(chunk, j);
      if (!started && deadline > j && (buffer.active(j) + 1) * L > cap) {
        ++j;  // buffer full: the slot passes unused
        continue;
      }
      Bytes& slot_bw = bw[static_cast<size_t>(j - 1)];
      const Bytes take = std::min(slot_bw, remaining);
      if (take > 0) {
        slot_bw -= take;
        remaining -= take;
        started = true;
      }
      if (remaining <= kEps) {
        if (j > deadline) {  // finished late: the overshoot becomes stall
          stall += j - deadline;
          deadline = j;
        }
        if (slot_bw <= kEps) ++j;  // slot spent, hand over to the next chunk
        break;
      }
      if (slot_bw <= kEps) ++j;
    }
    out.stall_before[static_cast<size_t>(k)] = stall;
    out.deadline[static_cast<size_t>(k)] = deadline;
    if (sizes[static_cast<size_t>(k)] > kEps) buffer.add(deadline);
  }
  return out;
}

Level0Result level0_backward(const WindowContext& ctx,
                             const std::vector<Bytes>& sizes,
                             const Level0Result& forward, ScanStats* stats) {
  const int count = ctx.window_size();
  if (static_cast<int>(sizes.size()) != count ||
      static_cast<int>(forward.stall_before.size()) != count)
    throw std::invalid_argument("forward result does not match the window");
  const Seconds L = ctx.chunk_duration_s;
  const Seconds cap = ctx.buffer_cap_s;
  std::uint64_t* iters = counter(stats);

  std::vector<Bytes> bw = ctx.predicted.samples();
  auto bw_at = [&](Slot j) -> Bytes {
    return (j >= 1 && j <= ctx.predicted.num_slots())
               ? bw[static_cast<size_t>(j - 1)]
               : 0.0;
  };
  auto draw = [&](Slot j, Bytes amount) {
    if (j >= 1 && j <= ctx.predicted.num_slots())
      bw[static_cast<size_t>(j - 1)] -= amount;
  };

  Level0Result out;
  out.stall_before.assign(static_cast<size_t>(count), 0);
  out.deadline.assign(static_cast<size_t>(count), 0);

  // Reverse-pack start slots collected so far (non-increasing); the buffer
  // peaks just before a chunk's deadline, where every later chunk that has
  // started by then is still waiting.
  std::vector<Slot> later_starts;
  auto later_before = [&](Slot deadline) {
    int n = 0;
    for (auto it = later_starts.rbegin(); it != later_starts.rend(); ++it) {
      if (*it < deadline)
        ++n;
      else
        break;
    }
    return n;
  };

  const Seconds total = forward.stall_before.empty()
                            ? 0
                            : forward.stall_before.back();
  Seconds carry = total;  // all-stalls-up-front hypothesis, eroded by the cap
  Slot j = deadline_at(ctx, ctx.last_chunk, total);

  for (int k = count - 1; k >= 0; --k) {
    const int chunk = ctx.first_chunk + k;
    const Seconds floor = forward.stall_before[static_cast<size_t>(k)];
    Seconds d_f = carry;
    Slot deadline = deadline_at(ctx, chunk, d_f);
    if (sizes[static_cast<size_t>(k)] > kEps) {
      while ((1 + later_before(deadline)) * L > cap) {
        if (d_f <= floor)
          throw std::logic_error(
              "backward scan cannot satisfy the buffer cap at the forward "
              "stall floor");
        --d_f;
        --deadline;
      }
      if (j > deadline) j = deadline;
      Bytes remaining = sizes[static_cast<size_t>(k)];
      Slot start = deadline;
      while (remaining > kEps) {
        ++*iters;
        if (j < ctx.current_slot)
          throw std::logic_error("backward scan exhausted the window");
        const Bytes take = std::min(bw_at(j), remaining);
        if (take > 0) {
          draw(j, take);
          remaining -= take;
          start = j;
        }
        if (remaining <= kEps) {
          if (bw_at(j) <= kEps) --j;
          break;
        }
        if (bw_at(j) <= kEps) --j;
      }
      later_starts.push_back(start);
    }
    out.stall_before[static_cast<size_t>(k)] = d_f;
    out.deadline[static_cast<size_t>(k)] = deadline;
    carry = d_f;
  }
  return out;
}

LevelScanResult level_forward(const WindowContext& ctx,
                              const std::vector<Bytes>& sizes,
                              const std::vector<Slot>& deadlines,
                              ScanStats* stats) {
  const int count = ctx.window_size();
  if (static_cast<int>(sizes.size()) != count ||
      static_cast<int>(deadlines.size()) != count)
    throw std::invalid_argument("inputs do not match the window");
  const Seconds L = ctx.chunk_duration_s;
  const Seconds cap = ctx.buffer_cap_s;
  std::uint64_t* iters = counter(stats);

  LevelScanResult out;
  out.start_slot.assign(static_cast<size_t>(count), 0);
  out.first_amount.assign(static_cast<size_t>(count), 0);
  out.residual = ctx.predicted.samples();

  BufferTracker buffer;
  for (Slot d : ctx.buffered_deadlines) buffer.add(d);

  Slot j = ctx.current_slot;
  for (int k = 0; k < count; ++k) {
    const Slot deadline = deadlines[static_cast<size_t>(k)];
    Bytes remaining = sizes[static_cast<size_t>(k)];
    if (remaining <= kEps) continue;
    bool touched = false;
    bool started = false;
    while (remaining > kEps) {
      ++*iters;
      if (j > deadline || j > ctx.predicted.num_slots())
        throw std::logic_error(
            "level-n forward pass missed a deadline for sizes the lower "
            "levels guaranteed");
      if (!started && deadline > j && (buffer.active(j) + 1) * L > cap) {
        ++j;
        continue;
      }
      Bytes& slot_bw = out.residual[static_cast<size_t>(j - 1)];
      const Bytes take = std::min(slot_bw, remaining);
      if (!touched) {
        touched = true;
        out.start_slot[static_cast<size_t>(k)] = j;
        out.first_amount[static_cast<size_t>(k)] = take;
      }
      if (take > 0) {
        slot_bw -= take;
        remaining -= take;
        started = true;
      }
      if (remaining <= kEps) {
        if (slot_bw <= kEps) ++j;  // exhausted slot hands over
        break;
      }
      if (slot_bw <= kEps) ++j;
    }
    buffer.add(deadline);
  }
  return out;
}

PromotionResult level_backward(const WindowContext& ctx,
                               const VideoManifest& manifest, int n,
                               const std::vector<Bytes>& sizes,
                               const std::vector<Slot>& deadlines,
                               const std::vector<char>& candidates,
                               const LevelScanResult& forward,
                               ScanStats* stats) {
  const int count = ctx.window_size();
  if (static_cast<int>(sizes.size()) != count ||
      static_cast<int>(deadlines.size()) != count ||
      static_cast<int>(candidates.size()) != count)
    throw std::invalid_argument("inputs do not match the window");
  if (n < 1 || n > manifest.top_level())
    throw std::invalid_argument("promotion level out of range");
  const Seconds L = ctx.chunk_duration_s;
  const Seconds cap = ctx.buffer_cap_s;
  std::uint64_t* iters = counter(stats);
  const BandwidthTimeline& pristine = ctx.predicted;

  PromotionResult out;
  out.sizes = sizes;
  out.promoted.assign(static_cast<size_t>(count), 0);
  out.reason.assign(static_cast<size_t>(count), SkipReason::kNone);

  // a(k) summed over the chunks that share a forward start slot with chunk
  // k but come later; their repacked bytes free that share of the slot.
  std::vector<Bytes> same_slot_later(static_cast<size_t>(count), 0);
  for (int k = count - 2; k >= 0; --k) {
    if (forward.start_slot[static_cast<size_t>(k)] != 0 &&
        forward.start_slot[static_cast<size_t>(k)] ==
            forward.start_slot[static_cast<size_t>(k + 1)]) {
      same_slot_later[static_cast<size_t>(k)] =
          same_slot_later[static_cast<size_t>(k + 1)] +
          forward.first_amount[static_cast<size_t>(k + 1)];
    }
  }

  std::vector<Bytes> bw = pristine.samples();
  auto bw_at = [&](Slot j) -> Bytes {
    return (j >= 1 && j <= pristine.num_slots()) ? bw[static_cast<size_t>(j - 1)]
                                                 : 0.0;
  };
  auto draw = [&](Slot j, Bytes amount) {
    if (j >= 1 && j <= pristine.num_slots())
      bw[static_cast<size_t>(j - 1)] -= amount;
  };

  std::vector<Slot> later_starts;
  auto later_before = [&](Slot deadline) {
    int m = 0;
    for (auto it = later_starts.rbegin(); it != later_starts.rend(); ++it) {
      if (*it < deadline)
        ++m;
      else
        break;
    }
    return m;
  };

  Slot j = deadlines.empty() ? ctx.current_slot : deadlines.back();
  for (int k = count - 1; k >= 0; --k) {
    const int chunk = ctx.first_chunk + k;
    const Slot deadline = deadlines[static_cast<size_t>(k)];
    if (j > deadline) j = deadline;

    Bytes working = sizes[static_cast<size_t>(k)];
    if (!candidates[static_cast<size_t>(k)]) {
      out.reason[static_cast<size_t>(k)] = SkipReason::kNotCandidate;
    } else if ((1 + later_before(deadline)) * L > cap) {
      out.reason[static_cast<size_t>(k)] = SkipReason::kBuffer;
    } else {
      const Bytes target = manifest.size(chunk, n);
      const Slot t = forward.start_slot[static_cast<size_t>(k)];
      Bytes rem1 = 0;
      if (t == 0) {
        // Never fetched forward: everything from the window start is open.
        const Slot j0 = ctx.current_slot;
        rem1 = forward.residual[static_cast<size_t>(j0 - 1)];
        if (j > j0) rem1 += pristine.cum(j - 1) - pristine.cum(j0) + bw_at(j);
      } else {
        // Slot t(i) contributes its forward leftover, the chunk's own
        // first-slot share and the shares of later chunks that started in
        // the same slot (they have been repacked above); minus whatever the
        // repacking already drew from slot t(i) itself.
        Bytes pool = forward.residual[static_cast<size_t>(t - 1)] +
                     forward.first_amount[static_cast<size_t>(k)] +
                     same_slot_later[static_cast<size_t>(k)] -
                     (pristine.at(t) - bw_at(t));
        Bytes above = 0;
        if (t < j) above = pristine.cum(j - 1) - pristine.cum(t) + bw_at(j);
        rem1 = pool + above;
      }
      if (rem1 + kEps >= target) {
        working = target;
        out.promoted[static_cast<size_t>(k)] = 1;
      } else {
        out.reason[static_cast<size_t>(k)] = SkipReason::kBandwidth;
      }
    }
    out.sizes[static_cast<size_t>(k)] = working;

    // Reverse-pack the working size so earlier chunks see what remains.
    Bytes remaining = working;
    Slot start = deadline;
    while (remaining > kEps) {
      ++*iters;
      if (j < ctx.current_slot)
        throw std::logic_error("level-n backward pack exhausted the window");
      const Bytes take = std::min(bw_at(j), remaining);
      if (take > 0) {
        draw(j, take);
        remaining -= take;
        start = j;
      }
      if (remaining <= kEps) {
        if (bw_at(j) <= kEps) --j;
        break;
      }
      if (bw_at(j) <= kEps) --j;
    }
    if (working > kEps) later_starts.push_back(start);
  }
  return out;
}

DecisionSet fastscan_window(const WindowContext& ctx,
                            const VideoManifest& manifest, double beta,
                            double lambda, ScanStats* stats) {
  const int count = ctx.window_size();
  if (ctx.first_chunk < 1 || ctx.last_chunk > manifest.num_chunks() ||
      count < 1)
    throw std::invalid_argument("window does not fit the manifest");
  if (ctx.buffer_cap_s < ctx.chunk_duration_s)
    throw std::invalid_argument("buffer must hold at least one chunk");
  if (!validate_beta(beta, count, manifest.top_level()))
    throw std::invalid_argument(
        "beta violates the diminishing-returns condition for this window");
  if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");

  std::vector<Bytes> sizes;
  sizes.reserve(static_cast<size_t>(count));
  for (int i = ctx.first_chunk; i <= ctx.last_chunk; ++i)
    sizes.push_back(manifest.size(i, 0));

  const Level0Result fwd0 = level0_forward(ctx, sizes, stats);
  const Level0Result base = level0_backward(ctx, sizes, fwd0, stats);

  DecisionSet out;
  out.first_chunk = ctx.first_chunk;
  out.last_chunk = ctx.last_chunk;
  out.level.assign(static_cast<size_t>(count), 0);
  out.stall_before = base.stall_before;
  out.deadline = base.deadline;

  std::vector<char> candidates(static_cast<size_t>(count), 1);
  for (int n = 1; n <= manifest.top_level(); ++n) {
    const LevelScanResult fwd = level_forward(ctx, sizes, base.deadline, stats);
    PromotionResult promo = level_backward(ctx, manifest, n, sizes,
                                           base.deadline, candidates, fwd,
                                           stats);
    sizes = std::move(promo.sizes);
    candidates = promo.promoted;
    bool any = false;
    for (int k = 0; k < count; ++k) {
      if (candidates[static_cast<size_t>(k)]) {
        out.level[static_cast<size_t>(k)] = n;
        any = true;
      }
    }
    if (!any) break;  // nothing reached level n, higher levels are empty too
  }
  out.target_size = std::move(sizes);
  return out;
}

}  // namespace fastscan
