#include "fastscan/qoe.hpp"

#include <cmath>

#include "fastscan/errors.hpp"
#include "fastscan/simulator.hpp"

namespace fastscan {

std::vector<int> level_counts(const std::vector<int>& levels, int top_level) {
  std::vector<int> counts(static_cast<size_t>(top_level + 1), 0);
  for (int l : levels) {
    for (int n = 0; n <= l && n <= top_level; ++n)
      ++counts[static_cast<size_t>(n)];
  }
  return counts;
}

double score_levels(const std::vector<int>& levels, int top_level,
                    Seconds stall_s, const QoeParams& params) {
  const std::vector<int> counts = level_counts(levels, top_level);
  double value = 0.0;
  double weight = 1.0;
  for (int n = 0; n <= top_level; ++n) {
    value += weight * counts[static_cast<size_t>(n)];
    weight *= params.beta;
  }
  return value - params.lambda * static_cast<double>(stall_s);
}

double score(const DecisionSet& decisions, int top_level,
             const QoeParams& params) {
  return score_levels(decisions.level, top_level, decisions.total_stall(),
                      params);
}

double score(const SessionLog& log, const QoeParams& params) {
  std::vector<int> levels;
  levels.reserve(log.chunks.size());
  for (const auto& c : log.chunks) levels.push_back(c.level);
  return score_levels(levels, log.num_levels - 1, log.total_stall_s, params);
}

Summary summarize(const std::vector<SessionLog>& logs, const QoeParams& params,
                  const std::string& reference_algorithm) {
  Summary out;
  out.reference_algorithm = reference_algorithm;
  if (logs.empty()) return out;

  const int chunks = logs.front().num_chunks;
  for (const auto& log : logs) {
    if (log.num_chunks != chunks || log.num_levels != logs.front().num_levels)
      throw StructuralError("session logs come from different manifests");
  }

  // The logs passed here share one trace; the reference algorithm's QoE on
  // that trace is the divisor. run_comparison groups traces before calling.
  double reference_qoe = 0;
  bool have_reference = false;
  for (const auto& log : logs) {
    if (log.algorithm == reference_algorithm) {
      reference_qoe = score(log, params);
      have_reference = true;
      break;
    }
  }

  for (const auto& log : logs) {
    TraceSummary row;
    row.algorithm = log.algorithm;
    row.qoe = score(log, params);
    row.normalized_qoe =
        have_reference && reference_qoe != 0 ? row.qoe / reference_qoe : 1.0;
    row.total_stall_s = log.total_stall_s;
    row.level_pmf = log.level_pmf;
    row.quality_switches = log.quality_switches;
    const double total = static_cast<double>(log.num_chunks);
    row.percent_level0 =
        log.level_pmf.empty() ? 0.0 : 100.0 * log.level_pmf[0] / total;
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace fastscan
