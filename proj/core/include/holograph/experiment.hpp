#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "holograph/graphs.hpp"
#include "holograph/llm_client.hpp"
#include "holograph/optimizer.hpp"
#include "holograph/query.hpp"

namespace holograph {

enum class Dataset { ER, SF, Sachs, Latent };
enum class Ablation { Full, A1, A2, A3, A4, A5, A6 };
enum class OracleMode { Simulated, LLM, None };

const char* dataset_name(Dataset d);
const char* ablation_name(Ablation a);
const char* oracle_mode_name(OracleMode o);
Dataset dataset_from_name(const std::string& s);
Ablation ablation_from_name(const std::string& s);
OracleMode oracle_mode_from_name(const std::string& s);

/// Cover used for optimization: `parts` windows of ceil(fraction * n)
/// variables with pairwise overlap of at least min_overlap.
struct CoverSpec {
  int parts = 3;
  double fraction = 0.6;
  int min_overlap = 2;
};

struct ExperimentConfig {
  Dataset dataset = Dataset::ER;
  int n = 20;
  double edge_prob = 0.15;
  double avg_degree = 2.0;
  int n_latent = 0;
  std::string sachs_path;  // required when dataset == Sachs
  std::vector<std::uint64_t> seeds = {42, 43, 44, 45, 46};
  Ablation ablation = Ablation::Full;
  OptimizerConfig optimizer;
  OracleMode oracle = OracleMode::Simulated;
  double oracle_noise = 0.0;
  int queries_per_step = 4;  // batch size per oracle invocation
  double uncertainty_threshold = 0.3;
  int max_queries = 100;
  long max_tokens = 500000;
  EndpointConfig endpoint;  // used when oracle == LLM
  CoverSpec cover;
  double init_scale = 0.5;  // keeps initial |w| inside the query window
  double edge_threshold = 0.3;   // binary adjacency for metrics
  std::string trajectory_dir;    // per-seed JSONL loss streams, optional
  int threads = 0;               // 0 = one thread per seed up to hardware
};

struct SeedResult {
  std::uint64_t seed = 0;
  std::string error;  // nonempty when this seed failed; other fields unset
  int shd = -1;
  double f1 = 0.0;
  int sid = -1;  // -1 when the estimated graph is cyclic
  LossBreakdown final_loss;
  /// Loss of the final sections under the reference objective (configured
  /// weights, beliefs from the noiseless oracle on every covered pair).
  /// Ablations change what is optimized, so only this common objective
  /// makes their final losses comparable.
  LossBreakdown eval_loss;
  int steps = 0;
  int converged_step = -1;
  int queries_used = 0;
  long tokens_used = 0;
  double runtime_seconds = 0.0;  // excluded from canonical serialization
  std::vector<double> loss_curve;  // total loss per step
};

struct Aggregate {
  double mean = 0.0;
  double stddev = 0.0;
};

struct ExperimentRecord {
  ExperimentConfig config;
  std::vector<SeedResult> seeds;
  // Over successful seeds; loss_agg is the run's own final total,
  // eval_agg the common reference objective.
  Aggregate shd_agg, f1_agg, sid_agg, loss_agg, eval_agg;
};

/// Deterministic cover over n variables per the spec; independent of seed.
ContextCover build_cover(int n, const CoverSpec& spec);

/// Runs every seed (fanning out across worker threads; results merge in seed
/// order), computes metrics against the ground truth, and aggregates.
/// Per-seed failures are recorded and do not abort the remaining seeds.
ExperimentRecord run_experiment(const ExperimentConfig& config);

/// Canonical serialization. Wall-clock runtimes are emitted only when
/// include_runtime is set, so the default form is byte-deterministic for
/// Simulated/None oracles.
nlohmann::json record_to_json(const ExperimentRecord& record,
                              bool include_runtime = false);
ExperimentRecord record_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Writes aggregate.csv, summary.json, and one loss-trajectory SVG per
/// record into out_dir. Throws IoError when out_dir is unwritable.
void report(const std::vector<ExperimentRecord>& records,
            const std::string& out_dir);

/// One-line label like "er20-full" used in file names.
std::string record_label(const ExperimentConfig& config);

}  // namespace holograph
