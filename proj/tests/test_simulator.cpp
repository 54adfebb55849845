#include <doctest.h>

#include <random>

#include "fastscan/engine.hpp"
#include "fastscan/errors.hpp"
#include "fastscan/feasibility.hpp"
#include "fastscan/io.hpp"
#include "fastscan/oracle.hpp"
#include "fastscan/simulator.hpp"
#include "test_helpers.hpp"

using namespace fastscan;
using namespace fastscan::testing;

namespace {
SessionConfig offline_equivalent_config(const VideoManifest& m) {
  SessionConfig config;
  config.algorithm = Algorithm::kFastScan;
  config.predictor = PredictorKind::kOracle;
  config.window = m.num_chunks();
  config.buffer_cap_s = 10 * m.chunk_duration_s();
  config.low_buffer_threshold_s = 0;  // the fallback guards prediction error
  return config;
}
}  // namespace

TEST_CASE("ample constant bandwidth tops every chunk without stalls") {
  VideoManifest m = cbr_manifest(5, {1, 2, 4});
  BandwidthTimeline trace = constant_trace(60, 50);
  SessionConfig config = offline_equivalent_config(m);
  SessionLog log = run_session(m, trace, config);
  CHECK(log.total_stall_s == 0);
  for (const auto& c : log.chunks) CHECK(c.level == 2);
  // QoE = sum_n beta^n * V
  CHECK(log.qoe == doctest::Approx(5 * (1 + 0.1 + 0.01)));
}

TEST_CASE("online session matches the offline plan under perfect prediction") {
  // Actual constant 1/s, CBR sizes {1,2}, V=3, L=1, S=1, W=V.
  VideoManifest m = cbr_manifest(3, {1, 2});
  BandwidthTimeline trace = constant_trace(30, 1);
  SessionConfig config = offline_equivalent_config(m);
  SessionLog log = run_session(m, trace, config);

  WindowContext ctx = offline_ctx(m, trace, config.buffer_cap_s);
  DecisionSet plan = fastscan_window(ctx, m, config.beta, config.lambda);
  REQUIRE(log.chunks.size() == plan.level.size());
  for (size_t k = 0; k < plan.level.size(); ++k)
    CHECK(log.chunks[k].level == plan.level[k]);
  CHECK(log.total_stall_s == plan.total_stall());
  CHECK(log.qoe ==
        score(plan, m.top_level(), QoeParams{config.beta, config.lambda}));
}

TEST_CASE("offline equivalence holds across random CBR instances") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 40; ++trial) {
    RandomInstance inst = random_cbr_instance(rng, 6, 3);
    SessionConfig config = offline_equivalent_config(inst.manifest);
    config.buffer_cap_s = inst.buffer_cap_s;
    SessionLog log = run_session(inst.manifest, inst.trace, config);

    WindowContext ctx = offline_ctx(inst.manifest, inst.trace,
                                    inst.buffer_cap_s);
    DecisionSet plan = fastscan_window(ctx, inst.manifest, 0.1, 10.0);
    std::vector<int> online_levels;
    for (const auto& c : log.chunks) online_levels.push_back(c.level);
    CHECK(online_levels == plan.level);
    CHECK(log.total_stall_s == plan.total_stall());
  }
}

TEST_CASE("a high seeded prediction trips the low-buffer fallback") {
  // History seeded by a fast first chunk, then the link collapses: the
  // harmonic prediction stays high while the buffer drains below the
  // threshold, so the decided level is knocked down by one.
  std::vector<Bytes> samples = {8, 8};
  for (int j = 0; j < 120; ++j) samples.push_back(0.25);
  VideoManifest m = cbr_manifest(6, {1, 4, 8}, 1, 1);
  BandwidthTimeline trace{std::move(samples)};

  SessionConfig config;
  config.algorithm = Algorithm::kFastScan;
  config.predictor = PredictorKind::kHarmonic;
  config.window = 3;
  config.buffer_cap_s = 10;
  config.low_buffer_threshold_s = 2;
  config.bootstrap_rate_bps = 8;
  SessionLog log = run_session(m, trace, config);

  bool fallback_seen = false;
  for (const auto& c : log.chunks) fallback_seen |= c.fallback;
  CHECK(fallback_seen);
}

TEST_CASE("sessions are deterministic") {
  VideoManifest m = cbr_manifest(5, {2, 3});
  BandwidthTimeline trace =
      generate_trace({"markov-2state", 80, 2.0, 1.0, 0.2, 0.15, 9});
  SessionConfig config;
  config.algorithm = Algorithm::kFastScan;
  config.buffer_cap_s = 10;
  config.window = 4;
  SessionLog a = run_session(m, trace, config);
  SessionLog b = run_session(m, trace, config);
  CHECK(session_log_to_json(a) == session_log_to_json(b));
  CHECK(session_log_to_csv(a) == session_log_to_csv(b));
}

TEST_CASE("decisions never read the future under the harmonic predictor") {
  VideoManifest m = cbr_manifest(4, {1, 2});
  std::vector<Bytes> a_samples(40, 2.0);
  std::vector<Bytes> b_samples = a_samples;
  // The two traces agree until slot 6 and diverge afterwards; chunk 2's
  // decision is made by then, so it must coincide.
  for (size_t j = 6; j < b_samples.size(); ++j) b_samples[j] = 0.5;
  SessionConfig config;
  config.algorithm = Algorithm::kFastScan;
  config.buffer_cap_s = 6;
  config.window = 2;
  SessionLog log_a = run_session(m, BandwidthTimeline(a_samples), config);
  SessionLog log_b = run_session(m, BandwidthTimeline(b_samples), config);
  CHECK(log_a.chunks[0].level == log_b.chunks[0].level);
  CHECK(log_a.chunks[1].level == log_b.chunks[1].level);
}

TEST_CASE("stall accounting: alpha is positive iff the deadline slipped") {
  VideoManifest m = cbr_manifest(3, {2});
  BandwidthTimeline trace = constant_trace(40, 1);  // 2 s per chunk, L=1
  SessionConfig config;
  config.algorithm = Algorithm::kRb;
  config.buffer_cap_s = 10;
  SessionLog log = run_session(m, trace, config);
  Seconds total = 0;
  for (const auto& c : log.chunks) {
    CHECK((c.stall_s > 0) == (c.finish_slot > c.deadline - c.stall_s));
    total += c.stall_s;
  }
  CHECK(total == log.total_stall_s);
  CHECK(log.total_stall_s > 0);
}

TEST_CASE("buffer trajectory respects the cap") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    RandomInstance inst = random_cbr_instance(rng, 6, 2);
    SessionConfig config;
    config.algorithm = trial % 2 == 0 ? Algorithm::kBba : Algorithm::kFestive;
    config.buffer_cap_s = inst.buffer_cap_s;
    config.baseline.bba_reservoir_s = 1;
    config.baseline.bba_cushion_s = inst.buffer_cap_s;
    SessionLog log = run_session(inst.manifest, inst.trace, config);
    for (Seconds b : log.buffer_s) CHECK(b <= config.buffer_cap_s);
  }
}

TEST_CASE("a dead trace tail raises progress-timeout") {
  VideoManifest m = cbr_manifest(3, {4});
  BandwidthTimeline trace({4, 0});  // extension holds the zero forever
  SessionConfig config;
  config.algorithm = Algorithm::kRb;
  config.buffer_cap_s = 10;
  config.progress_timeout_slots = 50;
  CHECK_THROWS_AS(run_session(m, trace, config), ProgressTimeoutError);
}

TEST_CASE("session logs replay through the feasibility checker") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 15; ++trial) {
    RandomInstance inst = random_cbr_instance(rng, 6, 2);
    SessionConfig config = offline_equivalent_config(inst.manifest);
    config.buffer_cap_s = inst.buffer_cap_s;
    SessionLog log = run_session(inst.manifest, inst.trace, config);

    // A finished session is a feasible point of the formulation: realized
    // levels, realized stalls, realized deadlines.
    WindowContext ctx = offline_ctx(inst.manifest, inst.trace,
                                    inst.buffer_cap_s);
    DecisionSet d;
    d.first_chunk = 1;
    d.last_chunk = inst.manifest.num_chunks();
    for (const auto& c : log.chunks) {
      d.level.push_back(c.level);
      d.target_size.push_back(c.bytes);
      d.stall_before.push_back(
          c.deadline - inst.manifest.startup_delay_s() -
          (static_cast<Seconds>(c.index) - 1) *
              inst.manifest.chunk_duration_s());
      d.deadline.push_back(c.deadline);
    }
    FetchSchedule sched = replay_decisions(inst.manifest, inst.trace, ctx, d);
    FeasibilityReport report =
        check_feasibility(inst.manifest, inst.trace, ctx, d, sched);
    CHECK(report.ok);
  }
}

TEST_CASE("run_comparison orders entries and tolerates per-pair failures") {
  VideoManifest m = cbr_manifest(4, {1, 2});
  std::vector<NamedTrace> traces;
  traces.push_back({"good", constant_trace(40, 10)});
  traces.push_back({"dead", BandwidthTimeline({1, 0})});

  SessionConfig fast;
  fast.algorithm = Algorithm::kFastScan;
  fast.buffer_cap_s = 10;
  fast.window = 4;
  fast.progress_timeout_slots = 30;
  SessionConfig rb = fast;
  rb.algorithm = Algorithm::kRb;

  ComparisonReport report = run_comparison(m, traces, {fast, rb});
  REQUIRE(report.entries.size() == 4);
  CHECK(report.entries[0].trace == "good");
  CHECK(report.entries[0].algorithm == "fastscan");
  CHECK(report.entries[0].ok);
  CHECK(report.entries[1].algorithm == "rb");
  CHECK_FALSE(report.entries[2].ok);  // dead trace times out
  CHECK_FALSE(report.entries[3].ok);
  CHECK(report.summary.reference_algorithm == "fastscan");
}

TEST_CASE("run_comparison on an empty trace set is an empty report") {
  VideoManifest m = cbr_manifest(2, {1});
  SessionConfig config;
  config.buffer_cap_s = 10;
  ComparisonReport report = run_comparison(m, {}, {config});
  CHECK(report.entries.empty());
}
