#ifndef FASTSCAN_ORACLE_HPP_
#define FASTSCAN_ORACLE_HPP_

#include <cstdint>
#include <vector>

#include "fastscan/qoe.hpp"
#include "fastscan/types.hpp"

namespace fastscan {

struct OracleResult {
  double best_qoe = 0;
  DecisionSet best_decisions;  // lexicographically smallest level vector
  Seconds best_stall = 0;
  std::vector<int> best_counts;  // chunks at level >= n under the optimum
  // Every level vector attaining best_qoe, for skip-ordering checks.
  std::vector<std::vector<int>> optimal_levels;
  std::uint64_t enumerated = 0;
};

// Exhaustive search over all monotone indicator matrices (equivalently, one
// level per chunk). Each assignment's minimum stall comes from the greedy
// earliest in-order fetch at the composite sizes, which is stall-optimal for
// fixed sizes. Guarded: V <= 10 and (N+1)^V <= 1e6.
OracleResult enumerate_optimal(const VideoManifest& manifest,
                               const BandwidthTimeline& timeline,
                               const WindowContext& ctx, double beta,
                               double lambda);

// Minimum total stall over every in-order level-0 schedule, by exhaustive
// search over non-decreasing per-chunk stall placements. Guarded: V <= 6.
Seconds min_stall_bruteforce(const VideoManifest& manifest,
                             const BandwidthTimeline& timeline,
                             const WindowContext& ctx);

}  // namespace fastscan

#endif  // FASTSCAN_ORACLE_HPP_
