#include "fastscan/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fastscan/engine.hpp"
#include "fastscan/errors.hpp"
#include "fastscan/feasibility.hpp"
#include "fastscan/io.hpp"
#include "fastscan/oracle.hpp"
#include "fastscan/qoe.hpp"
#include "fastscan/simulator.hpp"

namespace fastscan {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitSimFailure = 3;

std::uint64_t effective_seed(std::uint64_t flag_seed) {
  if (const char* env = std::getenv("FASTSCAN_SEED")) {
    return static_cast<std::uint64_t>(std::stoull(env));
  }
  return flag_seed;
}

PredictorKind predictor_from_name(const std::string& name) {
  if (name == "harmonic") return PredictorKind::kHarmonic;
  if (name == "ewma") return PredictorKind::kEwma;
  if (name == "oracle") return PredictorKind::kOracle;
  throw std::invalid_argument("unknown predictor: " + name);
}

WindowContext offline_context(const VideoManifest& manifest,
                              const BandwidthTimeline& trace,
                              Seconds buffer_cap_s) {
  WindowContext ctx;
  ctx.first_chunk = 1;
  ctx.last_chunk = manifest.num_chunks();
  ctx.current_slot = 1;
  ctx.chunk_duration_s = manifest.chunk_duration_s();
  ctx.prior_stall_s = manifest.startup_delay_s();
  ctx.buffer_cap_s = buffer_cap_s;
  ctx.predicted = trace;
  return ctx;
}

int run_simulate(const std::string& manifest_path,
                 const std::string& trace_path, const SessionConfig& config,
                 const std::string& out_prefix) {
  VideoManifest manifest = load_manifest(manifest_path);
  BandwidthTimeline trace = load_trace(trace_path);
  validate_beta(config.beta, config.window, manifest.top_level());
  SessionLog log = run_session(manifest, trace, config);
  write_file(out_prefix + ".json", session_log_to_json(log));
  write_file(out_prefix + ".csv", session_log_to_csv(log));
  std::cout << "qoe " << log.qoe << " stall_s " << log.total_stall_s
            << " -> " << out_prefix << ".json/.csv\n";
  return kExitOk;
}

int run_compare(const std::string& manifest_path, const std::string& trace_dir,
                const std::vector<std::string>& algo_names,
                SessionConfig base_config, const std::string& out_prefix) {
  VideoManifest manifest = load_manifest(manifest_path);
  std::vector<NamedTrace> traces;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(trace_dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files)
    traces.push_back({path.filename().string(), load_trace(path.string())});
  if (traces.empty())
    throw std::invalid_argument("no trace files in " + trace_dir);

  std::vector<SessionConfig> configs;
  for (const auto& name : algo_names) {
    SessionConfig config = base_config;
    config.algorithm = algorithm_from_name(name);
    configs.push_back(config);
  }
  ComparisonReport report = run_comparison(manifest, traces, configs);
  write_file(out_prefix + ".json", comparison_to_json(report));
  write_file(out_prefix + ".csv", comparison_to_csv(report));

  int failures = 0;
  for (const auto& e : report.entries)
    if (!e.ok) ++failures;
  std::cout << report.entries.size() - failures << "/" << report.entries.size()
            << " sessions ok -> " << out_prefix << ".json/.csv\n";
  return failures == static_cast<int>(report.entries.size()) ? kExitSimFailure
                                                             : kExitOk;
}

int run_oracle_check(const std::string& manifest_path,
                     const std::string& trace_path, double beta, double lambda,
                     Seconds buffer_cap_s) {
  VideoManifest manifest = load_manifest(manifest_path);
  BandwidthTimeline trace = load_trace(trace_path);
  WindowContext ctx = offline_context(manifest, trace, buffer_cap_s);
  validate_beta(beta, ctx.window_size(), manifest.top_level());

  const DecisionSet plan = fastscan_window(ctx, manifest, beta, lambda);
  const OracleResult oracle =
      enumerate_optimal(manifest, trace, ctx, beta, lambda);
  const QoeParams params{beta, lambda};
  const double engine_qoe = score(plan, manifest.top_level(), params);
  const bool equal = engine_qoe == oracle.best_qoe;
  const bool cbr = manifest.is_cbr();

  nlohmann::json verdict{{"instance",
                          {{"chunks", manifest.num_chunks()},
                           {"levels", manifest.num_levels()},
                           {"cbr", cbr}}},
                         {"fastscan_qoe", engine_qoe},
                         {"oracle_qoe", oracle.best_qoe},
                         {"gap", oracle.best_qoe - engine_qoe},
                         {"equal", equal}};
  std::cout << verdict.dump(2) << "\n";
  if (cbr && !equal) return kExitSimFailure;
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{
      "FastScan quality-adaptation engine and trace-driven streaming "
      "simulator. Traces carry Mbps per 1-second line; 1 Mbps = 125000 "
      "bytes per slot."};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand(
      "simulate", "Run one streaming session against a bandwidth trace");
  std::string sim_manifest, sim_trace, sim_out = "session";
  std::string sim_algo = "fastscan", sim_predictor = "harmonic";
  SessionConfig sim_config;
  sim->add_option("manifest", sim_manifest, "manifest JSON path")->required();
  sim->add_option("trace", sim_trace, "trace text path")->required();
  sim->add_option("--algo", sim_algo, "fastscan|rb|bba|festive");
  sim->add_option("--predictor", sim_predictor, "harmonic|ewma|oracle");
  sim->add_option("--window", sim_config.window, "prediction window W");
  sim->add_option("--eta", sim_config.eta, "throughput history depth");
  sim->add_option("--beta", sim_config.beta, "QoE level weight");
  sim->add_option("--lambda", sim_config.lambda, "QoE stall weight");
  sim->add_option("--buffer", sim_config.buffer_cap_s, "buffer cap, seconds");
  sim->add_option("--threshold", sim_config.low_buffer_threshold_s,
                  "low-buffer fallback threshold, seconds");
  sim->add_option("--bootstrap-mbps", sim_config.bootstrap_rate_bps,
                  "first-chunk rate guess, Mbps (0 = lowest level rate)");
  sim->add_option("--out", sim_out, "output path prefix");

  // compare
  auto* cmp = app.add_subcommand(
      "compare", "Run several algorithms over a directory of traces");
  std::string cmp_manifest, cmp_dir, cmp_out = "comparison";
  std::vector<std::string> cmp_algos = {"fastscan", "rb", "bba", "festive"};
  SessionConfig cmp_config;
  std::string cmp_predictor = "harmonic";
  cmp->add_option("manifest", cmp_manifest, "manifest JSON path")->required();
  cmp->add_option("tracedir", cmp_dir, "directory of trace files")->required();
  cmp->add_option("--algos", cmp_algos, "algorithms to run")->delimiter(',');
  cmp->add_option("--predictor", cmp_predictor, "harmonic|ewma|oracle");
  cmp->add_option("--window", cmp_config.window, "prediction window W");
  cmp->add_option("--eta", cmp_config.eta, "throughput history depth");
  cmp->add_option("--beta", cmp_config.beta, "QoE level weight");
  cmp->add_option("--lambda", cmp_config.lambda, "QoE stall weight");
  cmp->add_option("--buffer", cmp_config.buffer_cap_s, "buffer cap, seconds");
  cmp->add_option("--threshold", cmp_config.low_buffer_threshold_s,
                  "low-buffer fallback threshold, seconds");
  cmp->add_option("--out", cmp_out, "output path prefix");

  // oracle-check
  auto* chk = app.add_subcommand(
      "oracle-check",
      "Compare the offline window decision against the exhaustive optimum");
  std::string chk_manifest, chk_trace;
  double chk_beta = 0.1, chk_lambda = 10.0;
  Seconds chk_buffer = 60;
  chk->add_option("manifest", chk_manifest, "manifest JSON path")->required();
  chk->add_option("trace", chk_trace, "trace text path")->required();
  chk->add_option("--beta", chk_beta, "QoE level weight");
  chk->add_option("--lambda", chk_lambda, "QoE stall weight");
  chk->add_option("--buffer", chk_buffer, "buffer cap, seconds");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate synthetic traces/manifests");
  gen->require_subcommand(1);
  auto* gen_trace_cmd = gen->add_subcommand("trace", "write a trace file");
  TraceGenParams trace_params;
  std::string gen_trace_out = "trace.txt";
  gen_trace_cmd->add_option("--model", trace_params.model,
                            "constant|markov-2state|ou");
  gen_trace_cmd->add_option("--length", trace_params.length_s, "seconds");
  gen_trace_cmd->add_option("--mean", trace_params.mean_mbps, "Mbps");
  gen_trace_cmd->add_option("--stddev", trace_params.stddev_mbps, "Mbps");
  gen_trace_cmd->add_option("--switch-prob", trace_params.switch_prob,
                            "markov state flip probability");
  gen_trace_cmd->add_option("--seed", trace_params.seed,
                            "RNG seed (FASTSCAN_SEED overrides)");
  gen_trace_cmd->add_option("--out", gen_trace_out, "output path");

  auto* gen_manifest_cmd = gen->add_subcommand("manifest", "write a manifest");
  ManifestGenParams manifest_params;
  std::string gen_manifest_out = "manifest.json";
  gen_manifest_cmd->add_option("--chunks", manifest_params.num_chunks, "V");
  gen_manifest_cmd->add_option("--levels", manifest_params.num_levels, "N+1");
  gen_manifest_cmd->add_option("--duration", manifest_params.chunk_duration_s,
                               "chunk length L, seconds");
  gen_manifest_cmd->add_option("--startup", manifest_params.startup_delay_s,
                               "startup delay S, seconds");
  gen_manifest_cmd->add_option("--jitter", manifest_params.vbr_jitter_percent,
                               "VBR size jitter percent (0 = CBR)");
  gen_manifest_cmd->add_option("--rates", manifest_params.nominal_mbps,
                               "nominal Mbps per level")
      ->delimiter(',');
  gen_manifest_cmd->add_option("--seed", manifest_params.seed,
                               "RNG seed (FASTSCAN_SEED overrides)");
  gen_manifest_cmd->add_option("--out", gen_manifest_out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (sim->parsed()) {
      sim_config.algorithm = algorithm_from_name(sim_algo);
      sim_config.predictor = predictor_from_name(sim_predictor);
      sim_config.bootstrap_rate_bps *= kBytesPerMbpsSecond;
      return run_simulate(sim_manifest, sim_trace, sim_config, sim_out);
    }
    if (cmp->parsed()) {
      cmp_config.predictor = predictor_from_name(cmp_predictor);
      return run_compare(cmp_manifest, cmp_dir, cmp_algos, cmp_config,
                         cmp_out);
    }
    if (chk->parsed()) {
      return run_oracle_check(chk_manifest, chk_trace, chk_beta, chk_lambda,
                              chk_buffer);
    }
    if (gen_trace_cmd->parsed()) {
      trace_params.seed = effective_seed(trace_params.seed);
      save_trace(generate_trace(trace_params), gen_trace_out);
      std::cout << "wrote " << gen_trace_out << "\n";
      return kExitOk;
    }
    if (gen_manifest_cmd->parsed()) {
      manifest_params.seed = effective_seed(manifest_params.seed);
      save_manifest(generate_manifest(manifest_params), gen_manifest_out);
      std::cout << "wrote " << gen_manifest_out << "\n";
      return kExitOk;
    }
  } catch (const SizeGuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSimFailure;
  }
  return kExitBadInput;
}

}  // namespace fastscan
