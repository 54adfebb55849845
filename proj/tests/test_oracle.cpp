#include <doctest.h>

#include <random>

#include "fastscan/engine.hpp"
#include "fastscan/errors.hpp"
#include "fastscan/feasibility.hpp"
#include "fastscan/oracle.hpp"
#include "fastscan/qoe.hpp"
#include "test_helpers.hpp"

using namespace fastscan;
using namespace fastscan::testing;

TEST_CASE("oracle: single chunk with ample bandwidth takes the top level") {
  VideoManifest m = cbr_manifest(1, {1, 2});
  WindowContext ctx = offline_ctx(m, constant_trace(6, 10), 10);
  OracleResult r = enumerate_optimal(m, ctx.predicted, ctx, 0.1, 10.0);
  CHECK(r.best_qoe == doctest::Approx(1.1));
  CHECK(r.best_decisions.level == std::vector<int>{1});
  CHECK(r.best_stall == 0);
  CHECK(r.enumerated == 2);
}

TEST_CASE("oracle: V=2 CBR unit rate keeps level 0") {
  VideoManifest m = cbr_manifest(2, {1, 2});
  WindowContext ctx = offline_ctx(m, constant_trace(12, 1), 100);
  OracleResult r = enumerate_optimal(m, ctx.predicted, ctx, 0.1, 10.0);
  CHECK(r.best_qoe == doctest::Approx(2.0));
  CHECK(r.best_decisions.level == std::vector<int>{0, 0});
  CHECK(r.enumerated == 4);
}

TEST_CASE("oracle: V=2 CBR double rate promotes both") {
  VideoManifest m = cbr_manifest(2, {1, 2});
  WindowContext ctx = offline_ctx(m, constant_trace(12, 2), 100);
  OracleResult r = enumerate_optimal(m, ctx.predicted, ctx, 0.1, 10.0);
  CHECK(r.best_qoe == doctest::Approx(2.2));
  CHECK(r.best_decisions.level == std::vector<int>{1, 1});
}

TEST_CASE("oracle rejects instances beyond the size guard") {
  VideoManifest m = cbr_manifest(20, {1, 2});
  WindowContext ctx = offline_ctx(m, constant_trace(100, 10), 10);
  CHECK_THROWS_AS(enumerate_optimal(m, ctx.predicted, ctx, 0.1, 10.0),
                  SizeGuardError);
  CHECK_THROWS_AS(min_stall_bruteforce(m, ctx.predicted, ctx), SizeGuardError);
}

TEST_CASE("min_stall_bruteforce: trivial and half-rate cases") {
  VideoManifest m = cbr_manifest(3, {1});
  WindowContext roomy = offline_ctx(m, constant_trace(10, 10), 10);
  CHECK(min_stall_bruteforce(m, roomy.predicted, roomy) == 0);

  WindowContext tight = offline_ctx(m, constant_trace(10, 0.5), 10);
  CHECK(min_stall_bruteforce(m, tight.predicted, tight) == 3);
}

TEST_CASE("oracle best dominates every enumerated feasible point") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    RandomInstance inst = random_cbr_instance(rng, 5, 2);
    WindowContext ctx = offline_ctx(inst.manifest, inst.trace,
                                    inst.buffer_cap_s);
    OracleResult r =
        enumerate_optimal(inst.manifest, inst.trace, ctx, 0.1, 10.0);
    // Any feasible point: the all-base assignment evaluated the same way.
    std::vector<Bytes> base = inst.manifest.level_sizes(0);
    Level0Result packed = level0_forward(ctx, base);
    std::vector<int> zeros(base.size(), 0);
    const double base_qoe = score_levels(zeros, inst.manifest.top_level(),
                                         packed.stall_before.back(),
                                         QoeParams{0.1, 10.0});
    CHECK(r.best_qoe >= base_qoe);
  }
}

// The optimality claim is exercised in two strengths. When the buffer cap
// cannot bind (B_m >= V*L, every chunk fits at once) the scans provably
// reach the exhaustive optimum and equality is asserted instance by
// instance. When the cap can bind, the scans stay sound (never above the
// oracle, decisions always feasible) but the published selection rules can
// strand capped-off bandwidth and land below the optimum on a small
// fraction of instances; the acceptance suite reports that honestly.
TEST_CASE("offline optimality: engine equals oracle whenever the buffer cannot bind") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 60; ++trial) {
    RandomInstance inst = random_cbr_instance(rng, 6, 3);
    inst.buffer_cap_s = 10;  // V <= 6, so the cap never binds
    WindowContext ctx = offline_ctx(inst.manifest, inst.trace,
                                    inst.buffer_cap_s);
    DecisionSet plan = fastscan_window(ctx, inst.manifest, 0.1, 10.0);
    OracleResult oracle =
        enumerate_optimal(inst.manifest, inst.trace, ctx, 0.1, 10.0);
    const double engine_qoe =
        score(plan, inst.manifest.top_level(), QoeParams{0.1, 10.0});
    REQUIRE(engine_qoe == oracle.best_qoe);
    CHECK(plan.total_stall() == oracle.best_stall);
    CHECK(level_counts(plan.level, inst.manifest.top_level()) ==
          oracle.best_counts);
  }
}

TEST_CASE("engine is sound: never above the oracle, even with tight buffers") {
  std::mt19937_64 rng(43);
  int matched = 0, total = 0;
  for (int trial = 0; trial < 120; ++trial) {
    RandomInstance inst = random_cbr_instance(rng, 6, 3);
    WindowContext ctx = offline_ctx(inst.manifest, inst.trace,
                                    inst.buffer_cap_s);
    DecisionSet plan = fastscan_window(ctx, inst.manifest, 0.1, 10.0);
    OracleResult oracle =
        enumerate_optimal(inst.manifest, inst.trace, ctx, 0.1, 10.0);
    const double engine_qoe =
        score(plan, inst.manifest.top_level(), QoeParams{0.1, 10.0});
    REQUIRE(engine_qoe <= oracle.best_qoe);
    ++total;
    if (engine_qoe == oracle.best_qoe) ++matched;
  }
  CHECK(matched >= total * 95 / 100);  // regression canary
}

TEST_CASE("VBR: engine stays feasible and within the oracle bound") {
  // Optimality is claimed for CBR only; on VBR the engine must still emit
  // feasible decisions and can only report QoE at or below the optimum.
  std::mt19937_64 rng(67);
  double worst_gap = 0;
  for (int trial = 0; trial < 120; ++trial) {
    RandomInstance inst = random_vbr_instance(rng, 6, 3);
    WindowContext ctx = offline_ctx(inst.manifest, inst.trace,
                                    inst.buffer_cap_s);
    DecisionSet plan = fastscan_window(ctx, inst.manifest, 0.1, 10.0);
    OracleResult oracle =
        enumerate_optimal(inst.manifest, inst.trace, ctx, 0.1, 10.0);
    const double engine_qoe =
        score(plan, inst.manifest.top_level(), QoeParams{0.1, 10.0});
    REQUIRE(engine_qoe <= oracle.best_qoe);
    worst_gap = std::max(worst_gap, oracle.best_qoe - engine_qoe);

    FetchSchedule sched =
        replay_decisions(inst.manifest, inst.trace, ctx, plan);
    FeasibilityReport report =
        check_feasibility(inst.manifest, inst.trace, ctx, plan, sched);
    REQUIRE(report.ok);
  }
  MESSAGE("worst VBR gap observed: ", worst_gap);
}

TEST_CASE("skip ordering: engine skips are never later than the oracle's") {
  // Like the optimality claim itself, the ordering argument relies on freed
  // bandwidth being usable by later chunks, which a binding buffer cap
  // breaks; asserted where every window chunk fits in the buffer at once.
  std::mt19937_64 rng(47);
  int compared = 0;
  for (int trial = 0; trial < 60; ++trial) {
    RandomInstance inst = random_cbr_instance(rng, 5, 2);
    inst.buffer_cap_s = 10;
    WindowContext ctx = offline_ctx(inst.manifest, inst.trace,
                                    inst.buffer_cap_s);
    DecisionSet plan = fastscan_window(ctx, inst.manifest, 0.1, 10.0);
    OracleResult oracle =
        enumerate_optimal(inst.manifest, inst.trace, ctx, 0.1, 10.0);
    const double engine_qoe =
        score(plan, inst.manifest.top_level(), QoeParams{0.1, 10.0});
    if (engine_qoe != oracle.best_qoe) continue;  // ordering claim presumes optimality
    for (const auto& alt : oracle.optimal_levels) {
      for (int n = 1; n <= inst.manifest.top_level(); ++n) {
        std::vector<int> engine_skips, alt_skips;
        for (int k = 0; k < static_cast<int>(plan.level.size()); ++k) {
          if (plan.level[static_cast<size_t>(k)] < n) engine_skips.push_back(k);
          if (alt[static_cast<size_t>(k)] < n) alt_skips.push_back(k);
        }
        if (engine_skips.size() != alt_skips.size()) continue;
        for (size_t h = 0; h < engine_skips.size(); ++h)
          CHECK(engine_skips[h] <= alt_skips[h]);
        ++compared;
      }
    }
  }
  CHECK(compared > 0);
}
