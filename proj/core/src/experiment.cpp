#include "holograph/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "holograph/errors.hpp"
#include "holograph/metrics.hpp"
#include "holograph/serialization.hpp"

namespace holograph {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

Aggregate aggregate_of(const std::vector<double>& xs) {
  Aggregate a;
  if (xs.empty()) return a;
  a.mean = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - a.mean) * (x - a.mean);
  a.stddev = std::sqrt(ss / static_cast<double>(xs.size()));
  return a;
}

/// Mean W entry over sections containing both variables; 0 if none do.
Eigen::MatrixXd merge_sections(const std::vector<CausalState>& sections,
                               int n) {
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd count = Eigen::MatrixXd::Zero(n, n);
  for (const CausalState& s : sections) {
    const auto& ids = s.context().ids();
    for (std::size_t a = 0; a < ids.size(); ++a)
      for (std::size_t b = 0; b < ids.size(); ++b) {
        sum(ids[a], ids[b]) += s.W()(static_cast<int>(a),
                                     static_cast<int>(b));
        count(ids[a], ids[b]) += 1.0;
      }
  }
  return (count.array() > 0.0)
      .select(sum.array() / count.array().max(1.0), 0.0)
      .matrix();
}

double mean_weight_at(int i, int j, const std::vector<CausalState>& sections) {
  double sum = 0.0;
  int count = 0;
  for (const CausalState& s : sections) {
    const int pi = s.context().index_of(i);
    const int pj = s.context().index_of(j);
    if (pi < 0 || pj < 0) continue;
    sum += s.W()(pi, pj);
    ++count;
  }
  return count ? sum / count : std::nan("");
}

/// A4 selection: uniform-random among the above-threshold candidates.
std::vector<QueryCandidate> random_queries(
    const std::vector<CausalState>& sections, const ContextCover& cover,
    const Budget& budget, int k, double threshold, std::uint64_t rng_seed) {
  std::vector<QueryCandidate> pool;
  for (int a = 0; a < cover.ground.size(); ++a)
    for (int b = 0; b < cover.ground.size(); ++b) {
      if (a == b) continue;
      QueryCandidate c;
      c.i = cover.ground[a];
      c.j = cover.ground[b];
      const double w = mean_weight_at(c.i, c.j, sections);
      if (std::isnan(w)) continue;
      c.epistemic = epistemic_value(w);
      if (c.epistemic <= threshold) continue;
      pool.push_back(c);
    }
  std::mt19937_64 rng(rng_seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  const int limit = std::min({k, budget.remaining_queries(),
                              static_cast<int>(pool.size())});
  pool.resize(static_cast<std::size_t>(std::max(limit, 0)));
  for (std::size_t q = 0; q < pool.size(); ++q)
    pool[q].kind =
        query_kind_for_index(budget.used_queries() + static_cast<int>(q));
  return pool;
}

GroundTruth make_truth(const ExperimentConfig& config, std::uint64_t seed,
                       std::vector<std::string>& names) {
  switch (config.dataset) {
    case Dataset::ER:
      return gen_er(config.n, config.edge_prob, seed);
    case Dataset::SF:
      return gen_sf(config.n, config.avg_degree, seed);
    case Dataset::Latent:
      return gen_latent(config.n, config.n_latent, seed).first;
    case Dataset::Sachs: {
      auto [truth, loaded_names] = load_sachs(config.sachs_path);
      names = loaded_names;
      return truth;
    }
  }
  throw InvalidDimension("unknown dataset");
}

struct SharedOracle {
  LlmOracle* llm = nullptr;
  Budget* budget = nullptr;
  std::mutex* mutex = nullptr;
};

SeedResult run_seed(const ExperimentConfig& config, std::uint64_t seed,
                    const SharedOracle& shared) {
  SeedResult result;
  result.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<std::string> names;
  GroundTruth truth = make_truth(config, seed, names);
  const int n = truth.graph.size();
  const ContextCover cover = build_cover(n, config.cover);

  OptimizerConfig opt = config.optimizer;
  OracleMode mode = config.oracle;
  double noise = config.oracle_noise;
  switch (config.ablation) {
    case Ablation::A1: opt.use_natural_gradient = false; break;
    case Ablation::A2: opt.weights.lambda_d = 0.0; break;
    case Ablation::A3: opt.weights.lambda_s = 0.0; break;
    case Ablation::A5: noise = 0.3; break;
    case Ablation::A6: mode = OracleMode::None; break;
    default: break;
  }

  std::vector<CausalState> sections;
  for (std::size_t p = 0; p < cover.parts.size(); ++p) {
    const Context& part = cover.parts[p];
    const CausalState r =
        CausalState::random(part.size(), config.init_scale, mix(seed, p));
    sections.push_back(stabilize_state(part, r.W(), r.L()));
  }

  Budget local_budget(config.max_queries, config.max_tokens);
  OracleHook hook;
  if (mode == OracleMode::Simulated) {
    hook = [&, seed](const std::vector<CausalState>& secs, int step) {
      std::vector<QueryCandidate> queries;
      try {
        if (config.ablation == Ablation::A4)
          queries = random_queries(secs, cover, local_budget,
                                   config.queries_per_step,
                                   config.uncertainty_threshold,
                                   mix(mix(seed, 0xA4), step));
        else
          queries = select_queries(secs, cover, local_budget,
                                   config.queries_per_step,
                                   config.uncertainty_threshold);
      } catch (const BudgetExhausted&) {
        return std::vector<EdgeBelief>{};
      }
      std::vector<std::pair<QueryCandidate, OracleAnswer>> batch;
      for (const QueryCandidate& q : queries) {
        try {
          local_budget.reserve_query();
        } catch (const BudgetExhausted&) {
          break;
        }
        batch.emplace_back(
            q, simulated_oracle(q, truth.graph, truth.latent_pairs, noise,
                                seed));
      }
      return answers_to_beliefs(batch);
    };
  } else if (mode == OracleMode::LLM) {
    hook = [&, seed](const std::vector<CausalState>& secs, int step) {
      (void)step;
      std::vector<EdgeBelief> out;
      std::lock_guard<std::mutex> lock(*shared.mutex);
      std::vector<QueryCandidate> queries;
      try {
        queries = select_queries(secs, cover, *shared.budget,
                                 config.queries_per_step,
                                 config.uncertainty_threshold);
      } catch (const BudgetExhausted&) {
        return out;
      }
      std::vector<std::pair<QueryCandidate, OracleAnswer>> batch;
      for (const QueryCandidate& q : queries) {
        try {
          batch.emplace_back(q, shared.llm->ask(q, names, *shared.budget));
        } catch (const BudgetExhausted&) {
          break;
        }
      }
      return answers_to_beliefs(batch);
    };
  }

  std::ofstream stream;
  if (!config.trajectory_dir.empty()) {
    std::filesystem::create_directories(config.trajectory_dir);
    stream.open(config.trajectory_dir + "/" + record_label(config) +
                "-seed" + std::to_string(seed) + ".jsonl");
  }

  auto [fitted, traj] =
      fit(std::move(sections), cover, hook, opt,
          stream.is_open() ? &stream : nullptr);

  result.final_loss = traj.final_loss;
  result.steps = static_cast<int>(traj.steps.size());
  result.converged_step = traj.converged_step;
  result.loss_curve.reserve(traj.steps.size());
  for (const LossBreakdown& l : traj.steps)
    result.loss_curve.push_back(l.total);
  if (mode == OracleMode::LLM) {
    result.queries_used = shared.budget->used_queries();
    result.tokens_used = shared.budget->used_tokens();
  } else {
    result.queries_used = local_budget.used_queries();
    result.tokens_used = local_budget.used_tokens();
  }

  Eigen::MatrixXd Wg = merge_sections(fitted, n);
  BinaryGraph estimated;
  estimated.context = Context::full(n);
  estimated.adjacency =
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n,
                                                                    false);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && std::abs(Wg(i, j)) >= config.edge_threshold)
        estimated.adjacency(i, j) = true;

  result.shd = shd(estimated, truth.graph);
  result.f1 = f1(estimated, truth.graph);
  // SID needs an acyclic estimate; -1 marks "undefined for this output".
  result.sid = has_cycle(estimated) ? -1 : sid(estimated, truth.graph);

  // Reference objective: configured weights, full noiseless edge prior.
  // The run's own final_loss omits whatever its ablation removed, so only
  // this evaluation is comparable across ablations.
  std::vector<EdgeBelief> reference;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      bool covered = false;
      for (const Context& part : cover.parts)
        if (part.contains(i) && part.contains(j)) {
          covered = true;
          break;
        }
      if (!covered) continue;
      reference.push_back(
          EdgeBelief{i, j, truth.graph.adjacency(i, j) ? 0.95 : 0.05, 1.0});
    }
  result.eval_loss = total_loss(fitted, cover, reference,
                                config.optimizer.weights,
                                config.optimizer.delta);

  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return result;
}

}  // namespace

const char* dataset_name(Dataset d) {
  switch (d) {
    case Dataset::ER: return "er";
    case Dataset::SF: return "sf";
    case Dataset::Sachs: return "sachs";
    case Dataset::Latent: return "latent";
  }
  return "unknown";
}

const char* ablation_name(Ablation a) {
  switch (a) {
    case Ablation::Full: return "full";
    case Ablation::A1: return "a1";
    case Ablation::A2: return "a2";
    case Ablation::A3: return "a3";
    case Ablation::A4: return "a4";
    case Ablation::A5: return "a5";
    case Ablation::A6: return "a6";
  }
  return "unknown";
}

const char* oracle_mode_name(OracleMode o) {
  switch (o) {
    case OracleMode::Simulated: return "simulated";
    case OracleMode::LLM: return "llm";
    case OracleMode::None: return "none";
  }
  return "unknown";
}

Dataset dataset_from_name(const std::string& s) {
  if (s == "er") return Dataset::ER;
  if (s == "sf") return Dataset::SF;
  if (s == "sachs") return Dataset::Sachs;
  if (s == "latent") return Dataset::Latent;
  throw FormatError("unknown dataset: " + s);
}

Ablation ablation_from_name(const std::string& s) {
  static const char* names[] = {"full", "a1", "a2", "a3", "a4", "a5", "a6"};
  for (int k = 0; k < 7; ++k)
    if (s == names[k]) return static_cast<Ablation>(k);
  throw FormatError("unknown ablation: " + s);
}

OracleMode oracle_mode_from_name(const std::string& s) {
  if (s == "simulated") return OracleMode::Simulated;
  if (s == "llm") return OracleMode::LLM;
  if (s == "none") return OracleMode::None;
  throw FormatError("unknown oracle mode: " + s);
}

ContextCover build_cover(int n, const CoverSpec& spec) {
  if (spec.parts < 1) throw InvalidDimension("cover needs >= 1 part");
  int size = std::min(
      n, std::max(static_cast<int>(std::ceil(spec.fraction * n)),
                  spec.min_overlap + 1));

  auto overlaps_ok = [&](int s) {
    if (spec.parts == 1) return true;
    // Parts are evenly spaced windows; the worst overlap is between the
    // first and last windows.
    const int last_start = n - s;
    return s - last_start >= spec.min_overlap;
  };
  while (size < n && !overlaps_ok(size)) ++size;

  std::vector<Context> parts;
  for (int k = 0; k < spec.parts; ++k) {
    const int start =
        spec.parts == 1
            ? 0
            : static_cast<int>(std::lround(
                  static_cast<double>(k) * (n - size) / (spec.parts - 1)));
    std::vector<int> ids(static_cast<std::size_t>(size));
    std::iota(ids.begin(), ids.end(), start);
    parts.emplace_back(std::move(ids));
  }
  return ContextCover::make(Context::full(n), std::move(parts));
}

ExperimentRecord run_experiment(const ExperimentConfig& config) {
  if (config.seeds.empty())
    throw InvalidDimension("experiment needs at least one seed");
  if (config.dataset == Dataset::Sachs && config.sachs_path.empty())
    throw FormatError("sachs dataset needs sachs_path");

  ExperimentRecord record;
  record.config = config;
  record.seeds.resize(config.seeds.size());

  LlmOracle llm(config.endpoint);
  Budget llm_budget(config.max_queries, config.max_tokens);
  std::mutex llm_mutex;
  SharedOracle shared;
  if (config.oracle == OracleMode::LLM && config.ablation != Ablation::A6) {
    shared.llm = &llm;
    shared.budget = &llm_budget;
    shared.mutex = &llm_mutex;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= config.seeds.size()) return;
      const std::uint64_t seed = config.seeds[idx];
      try {
        record.seeds[idx] = run_seed(config, seed, shared);
      } catch (const std::exception& e) {
        record.seeds[idx] = SeedResult{};
        record.seeds[idx].seed = seed;
        record.seeds[idx].error = e.what();
      }
    }
  };

  unsigned n_threads = config.threads > 0
                           ? static_cast<unsigned>(config.threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(
      n_threads, static_cast<unsigned>(config.seeds.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::vector<double> shds, f1s, sids, losses, evals;
  for (const SeedResult& s : record.seeds) {
    if (!s.error.empty()) continue;
    shds.push_back(s.shd);
    f1s.push_back(s.f1);
    if (s.sid >= 0) sids.push_back(s.sid);
    losses.push_back(s.final_loss.total);
    evals.push_back(s.eval_loss.total);
  }
  record.shd_agg = aggregate_of(shds);
  record.f1_agg = aggregate_of(f1s);
  record.sid_agg = aggregate_of(sids);
  record.loss_agg = aggregate_of(losses);
  record.eval_agg = aggregate_of(evals);
  return record;
}

json config_to_json(const ExperimentConfig& c) {
  return json{
      {"dataset", dataset_name(c.dataset)},
      {"n", c.n},
      {"edge_prob", c.edge_prob},
      {"avg_degree", c.avg_degree},
      {"n_latent", c.n_latent},
      {"sachs_path", c.sachs_path},
      {"seeds", c.seeds},
      {"ablation", ablation_name(c.ablation)},
      {"oracle", oracle_mode_name(c.oracle)},
      {"oracle_noise", c.oracle_noise},
      {"queries_per_step", c.queries_per_step},
      {"uncertainty_threshold", c.uncertainty_threshold},
      {"max_queries", c.max_queries},
      {"max_tokens", c.max_tokens},
      {"endpoint",
       {{"base_url", c.endpoint.base_url},
        {"model", c.endpoint.model},
        {"api_key_env", c.endpoint.api_key_env},
        {"temperature", c.endpoint.temperature},
        {"max_tokens", c.endpoint.max_tokens}}},
      {"cover",
       {{"parts", c.cover.parts},
        {"fraction", c.cover.fraction},
        {"min_overlap", c.cover.min_overlap}}},
      {"init_scale", c.init_scale},
      {"edge_threshold", c.edge_threshold},
      {"optimizer",
       {{"learning_rate", c.optimizer.learning_rate},
        {"max_steps", c.optimizer.max_steps},
        {"fisher_tikhonov", c.optimizer.fisher_tikhonov},
        {"fisher_floor", c.optimizer.fisher_floor},
        {"use_natural_gradient", c.optimizer.use_natural_gradient},
        {"fisher_ema", c.optimizer.fisher_ema},
        {"fisher_ema_decay", c.optimizer.fisher_ema_decay},
        {"query_interval", c.optimizer.query_interval},
        {"delta", c.optimizer.delta},
        {"early_stop_total", c.optimizer.early_stop_total},
        {"lambda_d", c.optimizer.weights.lambda_d},
        {"lambda_a", c.optimizer.weights.lambda_a},
        {"lambda_s", c.optimizer.weights.lambda_s},
        {"lambda_sem", c.optimizer.weights.lambda_sem}}},
  };
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  if (j.contains("dataset"))
    c.dataset = dataset_from_name(j["dataset"].get<std::string>());
  c.n = j.value("n", c.n);
  c.edge_prob = j.value("edge_prob", c.edge_prob);
  c.avg_degree = j.value("avg_degree", c.avg_degree);
  c.n_latent = j.value("n_latent", c.n_latent);
  c.sachs_path = j.value("sachs_path", c.sachs_path);
  if (j.contains("seeds"))
    c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  if (j.contains("ablation"))
    c.ablation = ablation_from_name(j["ablation"].get<std::string>());
  if (j.contains("oracle"))
    c.oracle = oracle_mode_from_name(j["oracle"].get<std::string>());
  c.oracle_noise = j.value("oracle_noise", c.oracle_noise);
  c.queries_per_step = j.value("queries_per_step", c.queries_per_step);
  c.uncertainty_threshold =
      j.value("uncertainty_threshold", c.uncertainty_threshold);
  c.max_queries = j.value("max_queries", c.max_queries);
  c.max_tokens = j.value("max_tokens", c.max_tokens);
  if (j.contains("endpoint")) {
    const json& e = j["endpoint"];
    c.endpoint.base_url = e.value("base_url", c.endpoint.base_url);
    c.endpoint.model = e.value("model", c.endpoint.model);
    c.endpoint.api_key_env = e.value("api_key_env", c.endpoint.api_key_env);
    c.endpoint.temperature = e.value("temperature", c.endpoint.temperature);
    c.endpoint.max_tokens = e.value("max_tokens", c.endpoint.max_tokens);
  }
  if (j.contains("cover")) {
    const json& v = j["cover"];
    c.cover.parts = v.value("parts", c.cover.parts);
    c.cover.fraction = v.value("fraction", c.cover.fraction);
    c.cover.min_overlap = v.value("min_overlap", c.cover.min_overlap);
  }
  c.init_scale = j.value("init_scale", c.init_scale);
  c.edge_threshold = j.value("edge_threshold", c.edge_threshold);
  c.trajectory_dir = j.value("trajectory_dir", c.trajectory_dir);
  c.threads = j.value("threads", c.threads);
  if (j.contains("optimizer")) {
    const json& o = j["optimizer"];
    OptimizerConfig& opt = c.optimizer;
    opt.learning_rate = o.value("learning_rate", opt.learning_rate);
    opt.max_steps = o.value("max_steps", opt.max_steps);
    opt.fisher_tikhonov = o.value("fisher_tikhonov", opt.fisher_tikhonov);
    opt.fisher_floor = o.value("fisher_floor", opt.fisher_floor);
    opt.use_natural_gradient =
        o.value("use_natural_gradient", opt.use_natural_gradient);
    opt.fisher_ema = o.value("fisher_ema", opt.fisher_ema);
    opt.fisher_ema_decay = o.value("fisher_ema_decay", opt.fisher_ema_decay);
    opt.query_interval = o.value("query_interval", opt.query_interval);
    opt.delta = o.value("delta", opt.delta);
    opt.early_stop_total = o.value("early_stop_total", opt.early_stop_total);
    opt.weights.lambda_d = o.value("lambda_d", opt.weights.lambda_d);
    opt.weights.lambda_a = o.value("lambda_a", opt.weights.lambda_a);
    opt.weights.lambda_s = o.value("lambda_s", opt.weights.lambda_s);
    opt.weights.lambda_sem = o.value("lambda_sem", opt.weights.lambda_sem);
  }
  return c;
}

json record_to_json(const ExperimentRecord& record, bool include_runtime) {
  json seeds = json::array();
  for (const SeedResult& s : record.seeds) {
    json entry{
        {"seed", s.seed},
        {"error", s.error},
        {"shd", s.shd},
        {"f1", s.f1},
        {"sid", s.sid},
        {"final_loss", loss_to_json(s.final_loss)},
        {"eval_loss", loss_to_json(s.eval_loss)},
        {"steps", s.steps},
        {"converged_step", s.converged_step},
        {"queries_used", s.queries_used},
        {"tokens_used", s.tokens_used},
        {"loss_curve", s.loss_curve},
    };
    if (include_runtime) entry["runtime_seconds"] = s.runtime_seconds;
    seeds.push_back(std::move(entry));
  }
  auto agg = [](const Aggregate& a) {
    return json{{"mean", a.mean}, {"std", a.stddev}};
  };
  return json{
      {"config", config_to_json(record.config)},
      {"seeds", std::move(seeds)},
      {"aggregate",
       {{"shd", agg(record.shd_agg)},
        {"f1", agg(record.f1_agg)},
        {"sid", agg(record.sid_agg)},
        {"loss", agg(record.loss_agg)},
        {"eval_loss", agg(record.eval_agg)}}},
  };
}

ExperimentRecord record_from_json(const json& j) {
  ExperimentRecord record;
  record.config = config_from_json(j.at("config"));
  for (const json& e : j.at("seeds")) {
    SeedResult s;
    s.seed = e.value("seed", std::uint64_t{0});
    s.error = e.value("error", std::string());
    s.shd = e.value("shd", -1);
    s.f1 = e.value("f1", 0.0);
    s.sid = e.value("sid", -1);
    if (e.contains("final_loss")) s.final_loss = loss_from_json(e["final_loss"]);
    if (e.contains("eval_loss")) s.eval_loss = loss_from_json(e["eval_loss"]);
    s.steps = e.value("steps", 0);
    s.converged_step = e.value("converged_step", -1);
    s.queries_used = e.value("queries_used", 0);
    s.tokens_used = e.value("tokens_used", 0L);
    s.runtime_seconds = e.value("runtime_seconds", 0.0);
    if (e.contains("loss_curve"))
      s.loss_curve = e["loss_curve"].get<std::vector<double>>();
    record.seeds.push_back(std::move(s));
  }
  const json& agg = j.at("aggregate");
  auto read_agg = [&](const char* key) {
    Aggregate a;
    a.mean = agg.at(key).value("mean", 0.0);
    a.stddev = agg.at(key).value("std", 0.0);
    return a;
  };
  record.shd_agg = read_agg("shd");
  record.f1_agg = read_agg("f1");
  record.sid_agg = read_agg("sid");
  record.loss_agg = read_agg("loss");
  if (agg.contains("eval_loss")) record.eval_agg = read_agg("eval_loss");
  return record;
}

std::string record_label(const ExperimentConfig& config) {
  std::ostringstream out;
  out << dataset_name(config.dataset);
  if (config.dataset != Dataset::Sachs) out << config.n;
  if (config.dataset == Dataset::Latent) out << "-" << config.n_latent;
  out << "-" << ablation_name(config.ablation);
  return out.str();
}

namespace {

void write_svg(const std::string& path, const ExperimentRecord& record) {
  constexpr int kW = 640, kH = 400, kPad = 48;
  double lo = 1e300, hi = -1e300;
  std::size_t max_len = 0;
  for (const SeedResult& s : record.seeds) {
    for (double v : s.loss_curve) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    max_len = std::max(max_len, s.loss_curve.size());
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kPad << "\" y=\"20\" font-size=\"14\">"
      << record_label(record.config) << " total loss</text>\n";
  out << "<line x1=\"" << kPad << "\" y1=\"" << kH - kPad << "\" x2=\""
      << kW - 10 << "\" y2=\"" << kH - kPad
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kPad << "\" y1=\"" << kH - kPad << "\" x2=\""
      << kPad << "\" y2=\"28\" stroke=\"black\"/>\n";
  if (max_len >= 2 && hi > lo) {
    const bool log_scale = lo > 0.0;
    const double y_lo = log_scale ? std::log10(lo) : lo;
    const double y_hi = log_scale ? std::log10(hi) : hi;
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                   "#d62728", "#9467bd", "#8c564b"};
    int color = 0;
    for (const SeedResult& s : record.seeds) {
      if (s.loss_curve.size() < 2) continue;
      out << "<polyline fill=\"none\" stroke=\""
          << colors[color++ % 6] << "\" stroke-width=\"1\" points=\"";
      for (std::size_t t = 0; t < s.loss_curve.size(); ++t) {
        const double v = log_scale ? std::log10(s.loss_curve[t])
                                   : s.loss_curve[t];
        const double x =
            kPad + (kW - kPad - 10) * static_cast<double>(t) /
                       static_cast<double>(max_len - 1);
        const double y =
            (kH - kPad) - (kH - kPad - 28) * (v - y_lo) / (y_hi - y_lo);
        out << x << "," << y << " ";
      }
      out << "\"/>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace

void report(const std::vector<ExperimentRecord>& records,
            const std::string& out_dir) {
  if (records.empty()) throw InvalidDimension("report needs >= 1 record");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);

  std::ofstream csv(out_dir + "/aggregate.csv");
  if (!csv) throw IoError("cannot write to " + out_dir);
  csv << "dataset,n,ablation,seeds,shd_mean,shd_std,f1_mean,f1_std,"
         "sid_mean,sid_std,loss_mean,loss_std,eval_loss_mean,eval_loss_std\n";
  json summary = json::array();
  for (const ExperimentRecord& r : records) {
    csv << dataset_name(r.config.dataset) << "," << r.config.n << ","
        << ablation_name(r.config.ablation) << "," << r.seeds.size() << ","
        << r.shd_agg.mean << "," << r.shd_agg.stddev << ","
        << r.f1_agg.mean << "," << r.f1_agg.stddev << ","
        << r.sid_agg.mean << "," << r.sid_agg.stddev << ","
        << r.loss_agg.mean << "," << r.loss_agg.stddev << ","
        << r.eval_agg.mean << "," << r.eval_agg.stddev << "\n";
    summary.push_back(record_to_json(r));
    bool any_curve = false;
    for (const SeedResult& s : r.seeds)
      if (!s.loss_curve.empty()) any_curve = true;
    if (any_curve)
      write_svg(out_dir + "/" + record_label(r.config) + ".svg", r);
  }
  std::ofstream js(out_dir + "/summary.json");
  if (!js) throw IoError("cannot write to " + out_dir);
  js << summary.dump(2) << "\n";
}

}  // namespace holograph
