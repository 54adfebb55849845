#ifndef FASTSCAN_QOE_HPP_
#define FASTSCAN_QOE_HPP_

#include <string>
#include <vector>

#include "fastscan/types.hpp"

namespace fastscan {

struct SessionLog;  // simulator.hpp

struct QoeParams {
  double beta = 0.1;
  double lambda = 10.0;
};

// Count of chunks decided at level >= n, for n = 0..top_level.
std::vector<int> level_counts(const std::vector<int>& levels, int top_level);

// The objective: sum_n beta^n * |{i : level(i) >= n}| - lambda * stall.
// Every QoE in the repo funnels through here so equal decisions always give
// bit-identical scores.
double score_levels(const std::vector<int>& levels, int top_level,
                    Seconds stall_s, const QoeParams& params);

double score(const DecisionSet& decisions, int top_level,
             const QoeParams& params);
double score(const SessionLog& log, const QoeParams& params);

struct TraceSummary {
  std::string trace;
  std::string algorithm;
  double qoe = 0;
  double normalized_qoe = 0;
  Seconds total_stall_s = 0;
  std::vector<int> level_pmf;  // chunks fetched at exactly each level
  double percent_level0 = 0;
  int quality_switches = 0;
};

struct Summary {
  std::string reference_algorithm;
  std::vector<TraceSummary> rows;
};

// Per-session statistics with QoE normalized against a reference algorithm
// (each trace's QoE divided by the reference's QoE on the same trace).
// Throws StructuralError when the logs disagree on the chunk count.
Summary summarize(const std::vector<SessionLog>& logs, const QoeParams& params,
                  const std::string& reference_algorithm);

}  // namespace fastscan

#endif  // FASTSCAN_QOE_HPP_
