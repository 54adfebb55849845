#ifndef FASTSCAN_ENGINE_HPP_
#define FASTSCAN_ENGINE_HPP_

#include <cstdint>
#include <vector>

#include "fastscan/types.hpp"

namespace fastscan {

// Scan-loop iteration tally, used to pin the O(N * (W + horizon)) bound.
struct ScanStats {
  std::uint64_t iterations = 0;
};

// Output of the level-0 passes: per-chunk stall and the implied deadline.
struct Level0Result {
  std::vector<Seconds> stall_before;  // d(i) forward, d_f(i) backward
  std::vector<Slot> deadline;
};

// Output of the level-n forward pass.
struct LevelScanResult {
  std::vector<Slot> start_slot;     // t(i); 0 = never fetched
  std::vector<Bytes> first_amount;  // a(i), bytes taken in slot t(i)
  std::vector<Bytes> residual;      // e(j), leftover per slot after the pass
};

enum class SkipReason { kNone, kNotCandidate, kBandwidth, kBuffer };

struct PromotionResult {
  std::vector<Bytes> sizes;        // updated X(i)
  std::vector<char> promoted;      // membership of I_n
  std::vector<SkipReason> reason;  // why a chunk was left behind
};

// In-order fetch of `sizes` at the lowest feasible lateness: whenever a
// chunk completes past its deadline the overshoot becomes stall for it and
// every later chunk. Returns the minimum total stall for these sizes.
// Works for any per-chunk size vector so the oracle can reuse it at
// composite sizes. Throws InsufficientTraceError when the predicted
// timeline ends first.
Level0Result level0_forward(const WindowContext& ctx,
                            const std::vector<Bytes>& sizes,
                            ScanStats* stats = nullptr);
Level0Result level0_forward(const WindowContext& ctx,
                            const VideoManifest& manifest,
                            ScanStats* stats = nullptr);

// Reverse-order fetch that drags every stall as early as the buffer cap
// allows, starting from the all-stalls-up-front hypothesis and backing off
// one second at a time on buffer violations. Total stall is preserved:
// d_f(C) = d(C).
Level0Result level0_backward(const WindowContext& ctx,
                             const std::vector<Bytes>& sizes,
                             const Level0Result& forward,
                             ScanStats* stats = nullptr);

// In-order fetch of the current sizes under fixed deadlines, recording each
// chunk's earliest start t(i), its first-slot amount a(i) and the leftover
// bandwidth e(j).
LevelScanResult level_forward(const WindowContext& ctx,
                              const std::vector<Bytes>& sizes,
                              const std::vector<Slot>& deadlines,
                              ScanStats* stats = nullptr);

// Reverse-order selection of the chunks that can be raised to level `n`
// without disturbing lower-level decisions or the deadlines. Unpromoted
// chunks keep their prior size; skips are classified for diagnostics.
PromotionResult level_backward(const WindowContext& ctx,
                               const VideoManifest& manifest, int n,
                               const std::vector<Bytes>& sizes,
                               const std::vector<Slot>& deadlines,
                               const std::vector<char>& candidates,
                               const LevelScanResult& forward,
                               ScanStats* stats = nullptr);

// Full scan stack: level-0 forward + backward fix the stalls and deadlines,
// then each quality level runs a forward/backward pair. Deterministic.
DecisionSet fastscan_window(const WindowContext& ctx,
                            const VideoManifest& manifest, double beta,
                            double lambda, ScanStats* stats = nullptr);

}  // namespace fastscan

#endif  // FASTSCAN_ENGINE_HPP_
