#ifndef FASTSCAN_FEASIBILITY_HPP_
#define FASTSCAN_FEASIBILITY_HPP_

#include <optional>
#include <string>

#include "fastscan/types.hpp"

namespace fastscan {

// Diminishing-returns condition on beta: for every n in 0..N,
//   W * sum_{k=n+1}^{N} beta^k < beta^n.
// Guarantees that raising one chunk to level n always beats raising any
// number of chunks beyond level n. Throws std::invalid_argument for beta
// outside (0,1) or a degenerate window.
bool validate_beta(double beta, int window, int top_level);

enum class ConstraintFamily {
  kBaseCoverage,   // every chunk fetched at least at level 0
  kLevelMonotone,  // I_{n,i} <= I_{n-1,i} and sizes consistent with levels
  kSlotBandwidth,  // per-slot fetched total <= B(j)
  kBufferCap,      // occupancy <= B_m at every integer time
  kDeadline,       // no bytes after a chunk's deadline
  kCompleteness,   // fetched totals equal Z_{n,i} = I_{n,i} * Y_{n,i}
  kStallSign,      // d(i) >= 0, non-decreasing, consistent with deadlines
};

const char* constraint_name(ConstraintFamily family);

struct Violation {
  ConstraintFamily family;
  int chunk = 0;   // 0 when not chunk-specific
  int level = -1;  // -1 when not level-specific
  Slot slot = 0;   // 0 when not slot-specific
  std::string detail;
};

struct FeasibilityReport {
  bool ok = false;
  bool base_coverage = false;
  bool level_monotone = false;
  bool slot_bandwidth = false;
  bool buffer_cap = false;
  bool deadline = false;
  bool completeness = false;
  bool stall_sign = false;
  std::optional<Violation> first_violation;
};

// Checks a (decisions, schedule) pair against every constraint family of the
// window formulation. The first violating (chunk, level, slot) is reported.
// Throws StructuralError when the schedule does not match the manifest or
// window dimensions.
FeasibilityReport check_feasibility(const VideoManifest& manifest,
                                    const BandwidthTimeline& timeline,
                                    const WindowContext& ctx,
                                    const DecisionSet& decisions,
                                    const FetchSchedule& schedule);

// Greedy earliest in-order fetch of the decided sizes under the decided
// deadlines, waiting whenever the buffer is full. Emits the fetch records
// (split by level increment, lowest first) and the buffer trajectory. When
// a chunk cannot finish by its deadline its bytes simply stop there, which
// check_feasibility then flags as incomplete: the replay is the witness
// generator, the checker is the judge.
FetchSchedule replay_decisions(const VideoManifest& manifest,
                               const BandwidthTimeline& timeline,
                               const WindowContext& ctx,
                               const DecisionSet& decisions);

}  // namespace fastscan

#endif  // FASTSCAN_FEASIBILITY_HPP_
