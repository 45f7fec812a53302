// End-to-end acceptance checks. Each check prints exactly one PASS/FAIL line;
// the process exits nonzero if any check fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "holograph/experiment.hpp"
#include "holograph/linalg.hpp"
#include "holograph/metrics.hpp"
#include "holograph/objective.hpp"
#include "holograph/optimizer.hpp"
#include "holograph/query.hpp"
#include "holograph/sheaf.hpp"
#include "oracles.hpp"

using namespace holograph;
namespace fs = std::filesystem;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void verdict(int index, const std::string& name, bool ok,
             const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " [" << index << "] " << name << ": "
            << detail << "\n";
  if (!ok) ++failures;
}

// --- 1: restriction axiom suite ---------------------------------------------

void check_axiom_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<int> sizes = {30, 50, 100};
  const auto cells = run_exactness_suite(sizes, {1, 2, 3, 4, 5});
  bool ok = true;
  std::map<int, double> locality_mean;
  for (const SuiteCell& cell : cells) {
    for (const AxiomReport& r : cell.reports) {
      switch (r.axiom) {
        case Axiom::Identity:
          ok = ok && r.error == 0.0;
          break;
        case Axiom::Transitivity:
        case Axiom::Gluing:
          ok = ok && r.error < 1e-6;
          break;
        case Axiom::Locality:
          ok = ok && r.error > 0.1;
          locality_mean[cell.n] += r.error / 5.0;
          break;
      }
    }
  }
  for (std::size_t s = 1; s < sizes.size(); ++s)
    ok = ok && locality_mean[sizes[s]] >= locality_mean[sizes[s - 1]];
  const double elapsed = seconds_since(t0);
  ok = ok && elapsed < 120.0;
  std::ostringstream detail;
  detail << "identity exact, transitivity/gluing < 1e-6, locality means";
  for (int n : sizes) detail << " " << locality_mean[n];
  detail << " non-decreasing, " << elapsed << " s";
  verdict(1, "restriction axiom suite", ok, detail.str());
}

// --- 2: hidden-path absorption ----------------------------------------------

void check_absorption() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  double worst = 0.0;
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    const int n = 8 + static_cast<int>(trial % 7);
    const CausalState s = random_suite_state(n, 4000 + trial);
    std::vector<int> obs;
    for (int i = 0; i < n; ++i)
      if ((i + trial) % 2 == 0) obs.push_back(i);
    if (static_cast<int>(obs.size()) == n) obs.pop_back();
    const BlockPartition p = partition(s, Context(obs));
    if (!p.hidden_ids.empty())
      ok = ok && spectral_radius_estimate(p.W_HH) <= 0.9;
    const double err =
        (absorption(p).A - oracles::neumann_absorption(p.W_OH, p.W_HH)).norm();
    worst = std::max(worst, err);
  }
  const double elapsed = seconds_since(t0);
  ok = ok && worst < 1e-10 && elapsed < 10.0;
  std::ostringstream detail;
  detail << "max series deviation " << worst << " over 50 partitions, "
         << elapsed << " s";
  verdict(2, "hidden-path absorption", ok, detail.str());
}

// --- 3: acyclicity functional -----------------------------------------------

void check_acyclicity() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  long graphs = 0;
  for (int n = 2; n <= 4; ++n) {
    oracles::for_each_digraph(n, [&](const auto& adj) {
      Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (adj(i, j)) W(i, j) = 0.5;
      BinaryGraph g;
      g.context = Context::full(n);
      g.adjacency = adj;
      const bool acyclic_by_h = acyclicity(W) < 1e-9;
      const bool acyclic_by_dfs = !has_cycle(g);
      ok = ok && acyclic_by_h == acyclic_by_dfs;
      ++graphs;
    });
  }
  Eigen::MatrixXd two_cycle(2, 2);
  two_cycle << 0, 1, 1, 0;
  const double want =
      oracles::taylor_expm(two_cycle.cwiseProduct(two_cycle), 30).trace() -
      2.0;
  ok = ok && std::abs(acyclicity(two_cycle) - want) < 1e-9;
  const double elapsed = seconds_since(t0);
  ok = ok && elapsed < 30.0;
  std::ostringstream detail;
  detail << graphs << " digraphs agree with cycle search, 2-cycle value "
         << acyclicity(two_cycle) << ", " << elapsed << " s";
  verdict(3, "acyclicity functional", ok, detail.str());
}

// --- 4: gradient validation ---------------------------------------------------

void check_gradients() {
  const auto t0 = std::chrono::steady_clock::now();
  const LossWeights weights;
  const double delta = 0.1;
  const double h = 1e-5;
  double worst = 0.0;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const int n = 6 + static_cast<int>(trial % 5);  // up to 10
    const ContextCover cover = random_suite_cover(n, 8000 + trial);
    std::vector<CausalState> sections;
    for (std::size_t p = 0; p < cover.parts.size(); ++p) {
      const CausalState r =
          CausalState::random(cover.parts[p].size(), 0.4, trial * 31 + p);
      sections.emplace_back(cover.parts[p], r.W(), r.L());
    }
    const std::vector<EdgeBelief> beliefs = {
        {cover.parts[0][0], cover.parts[0][1], 0.9, 1.0}};
    const auto grads = gradient(sections, cover, beliefs, weights, delta);

    auto loss_at = [&](std::size_t sec, bool in_W, int r, int c, double v) {
      Eigen::MatrixXd W = sections[sec].W();
      Eigen::MatrixXd L = sections[sec].L();
      (in_W ? W(r, c) : L(r, c)) = v;
      std::vector<CausalState> mod = sections;
      mod[sec] = CausalState(sections[sec].context(), W, L);
      return total_loss(mod, cover, beliefs, weights, delta).total;
    };
    for (std::size_t sec = 0; sec < sections.size(); ++sec) {
      const int m = sections[sec].size();
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) {
          if (r != c) {
            const double x = sections[sec].W()(r, c);
            const double fd = (loss_at(sec, true, r, c, x + h) -
                               loss_at(sec, true, r, c, x - h)) /
                              (2 * h);
            worst = std::max(worst, std::abs(grads[sec].W(r, c) - fd) /
                                        std::max(std::abs(fd), 1e-6));
          }
          if (c <= r) {
            const double x = sections[sec].L()(r, c);
            const double fd = (loss_at(sec, false, r, c, x + h) -
                               loss_at(sec, false, r, c, x - h)) /
                              (2 * h);
            worst = std::max(worst, std::abs(grads[sec].L(r, c) - fd) /
                                        std::max(std::abs(fd), 1e-6));
          }
        }
    }
  }
  const double elapsed = seconds_since(t0);
  const bool ok = worst < 1e-4 && elapsed < 60.0;
  std::ostringstream detail;
  detail << "max relative error " << worst << " over 20 instances, "
         << elapsed << " s";
  verdict(4, "gradient validation", ok, detail.str());
}

// --- 5: preconditioned step reduction ----------------------------------------

void check_step_reduction() {
  bool ok = true;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 3 + static_cast<int>(seed % 6);
    const CausalState s = CausalState::random(n, 0.5, seed);
    const CausalState sec(Context::full(n), s.W(),
                          Eigen::MatrixXd::Identity(n, n));
    const CausalState g = CausalState::random(n, 0.7, seed + 5000);
    std::vector<SectionGrad> grads = {{g.W(), g.covariance()}};
    FisherDiagonal unit = {{Eigen::MatrixXd::Ones(n, n),
                            Eigen::MatrixXd::Ones(n, n)}};
    const auto nat = natural_step({sec}, grads, unit, 0.01);
    const auto sgd = sgd_step({sec}, grads, 0.01);
    ok = ok && nat[0].W() == sgd[0].W() && nat[0].L() == sgd[0].L();
  }
  verdict(5, "unit-curvature step reduction", ok,
          "bit-identical on 100 draws");
}

// --- 6: ablation direction on the reference objective ------------------------

void check_ablation_direction() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig config;
  config.dataset = Dataset::ER;
  config.n = 20;
  config.edge_prob = 0.15;
  config.seeds = {42, 43, 44, 45, 46};

  ExperimentConfig a6 = config;
  a6.ablation = Ablation::A6;
  const ExperimentRecord full = run_experiment(config);
  const ExperimentRecord bare = run_experiment(a6);

  bool ok = true;
  for (const SeedResult& s : full.seeds) ok = ok && s.error.empty();
  for (const SeedResult& s : bare.seeds) ok = ok && s.error.empty();
  // Final losses are compared on the shared reference objective; each run's
  // own objective omits whatever its ablation removed.
  ok = ok && full.eval_agg.mean < bare.eval_agg.mean;
  ok = ok && full.shd_agg.mean <= bare.shd_agg.mean;
  const double elapsed = seconds_since(t0);
  ok = ok && elapsed < 300.0;
  std::ostringstream detail;
  detail << "reference loss " << full.eval_agg.mean << " < "
         << bare.eval_agg.mean << ", SHD " << full.shd_agg.mean
         << " <= " << bare.shd_agg.mean << ", " << elapsed << " s";
  verdict(6, "oracle ablation direction", ok, detail.str());
}

// --- 7: query engine contracts -----------------------------------------------

void check_query_contracts() {
  bool ok = true;

  Budget budget(100, 500000);
  for (int q = 0; q < 100; ++q) budget.reserve_query();
  bool threw = false;
  try {
    budget.reserve_query();
  } catch (const BudgetExhausted&) {
    threw = true;
  }
  ok = ok && threw && budget.used_queries() == 100;

  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(3, 3);
  W(0, 1) = 0.5;
  W(1, 2) = 0.9;
  const CausalState s(Context::full(3), W, Eigen::MatrixXd::Identity(3, 3));
  const ContextCover cover =
      ContextCover::make(Context::full(3), {Context::full(3)});
  Budget fresh(100, 500000);
  const auto picked = select_queries({s}, cover, fresh, 10);
  ok = ok && !picked.empty() && picked[0].i == 0 && picked[0].j == 1;
  for (const QueryCandidate& c : picked) ok = ok && c.epistemic > 0.3;
  // The confident 0.9 edge must never be returned.
  for (const QueryCandidate& c : picked) ok = ok && !(c.i == 1 && c.j == 2);

  verdict(7, "query engine contracts", ok,
          "hard budget stop, boundary-uncertainty preference, strict 0.3 cut");
}

// --- 8: graph metric oracles --------------------------------------------------

int oracle_shd(const BinaryGraph& est, const BinaryGraph& truth) {
  const int n = est.size();
  int d = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int e = (est.adjacency(i, j) ? 1 : 0) +
                    (est.adjacency(j, i) ? 2 : 0);
      const int t = (truth.adjacency(i, j) ? 1 : 0) +
                    (truth.adjacency(j, i) ? 2 : 0);
      if (e != t) ++d;
    }
  return d;
}

double oracle_f1(const BinaryGraph& est, const BinaryGraph& truth) {
  int tp = 0, fp = 0, fn = 0;
  const int n = est.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (est.adjacency(i, j) && truth.adjacency(i, j)) ++tp;
      if (est.adjacency(i, j) && !truth.adjacency(i, j)) ++fp;
      if (!est.adjacency(i, j) && truth.adjacency(i, j)) ++fn;
    }
  if (tp == 0) return 0.0;
  const double precision = static_cast<double>(tp) / (tp + fp);
  const double recall = static_cast<double>(tp) / (tp + fn);
  return 2.0 * precision * recall / (precision + recall);
}

void check_metric_oracles() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;

  // Full enumeration over 3-node DAG pairs (25 x 25) for every metric, plus
  // d-separation on every conditioning set.
  std::vector<BinaryGraph> dags3;
  oracles::for_each_digraph(3, [&](const auto& adj) {
    if (oracles::kahn_has_cycle(adj)) return;
    BinaryGraph g;
    g.context = Context::full(3);
    g.adjacency = adj;
    dags3.push_back(g);
  });
  for (const BinaryGraph& est : dags3)
    for (const BinaryGraph& truth : dags3) {
      ok = ok && shd(est, truth) == oracle_shd(est, truth);
      ok = ok && std::abs(f1(est, truth) - oracle_f1(est, truth)) < 1e-12;
      ok = ok &&
           sid(est, truth) == oracles::brute_sid(est.adjacency,
                                                 truth.adjacency);
    }
  for (const BinaryGraph& g : dags3)
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y) {
        if (x == y) continue;
        const int z = 3 - x - y;
        ok = ok && d_separated(g, x, y, {}) ==
                       oracles::moral_d_separated(g.adjacency, x, y, {});
        ok = ok && d_separated(g, x, y, {z}) ==
                       oracles::moral_d_separated(g.adjacency, x, y, {z});
      }

  // Full enumeration over all 543 x 543 4-node DAG pairs.
  std::vector<BinaryGraph> dags4;
  oracles::for_each_digraph(4, [&](const auto& adj) {
    if (oracles::kahn_has_cycle(adj)) return;
    BinaryGraph g;
    g.context = Context::full(4);
    g.adjacency = adj;
    dags4.push_back(g);
  });
  for (const BinaryGraph& est : dags4)
    for (const BinaryGraph& truth : dags4) {
      ok = ok && shd(est, truth) == oracle_shd(est, truth);
      ok = ok && std::abs(f1(est, truth) - oracle_f1(est, truth)) < 1e-12;
      ok = ok && sid(est, truth) ==
                     oracles::brute_sid(est.adjacency, truth.adjacency);
    }

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const GroundTruth g = seed % 2 == 0 ? gen_er(10, 0.25, seed)
                                        : gen_sf(10, 2.0, seed);
    ok = ok && sid(g.graph, g.graph) == 0;
  }

  const double elapsed = seconds_since(t0);
  ok = ok && elapsed < 120.0;
  std::ostringstream detail;
  detail << dags3.size() * dags3.size() << " 3-node pairs, " << dags4.size()
         << " 4-node pairs, 100 self-distances, " << elapsed << " s";
  verdict(8, "graph metric oracles", ok, detail.str());
}

// --- 9: benchmark determinism -------------------------------------------------

void check_determinism() {
  const fs::path base = fs::temp_directory_path() / "holograph_acceptance";
  fs::remove_all(base);
  const fs::path out1 = base / "run1";
  const fs::path out2 = base / "run2";
  bool ok = true;
  for (const fs::path& out : {out1, out2}) {
    const std::string cmd = std::string(HOLOGRAPH_CLI_PATH) +
                            " bench --dataset er20 --ablation full --out " +
                            out.string() + " > /dev/null 2>&1";
    ok = ok && std::system(cmd.c_str()) == 0;
  }
  std::string first, second;
  if (ok) {
    std::ifstream a(out1 / "er20-full.json");
    std::ifstream b(out2 / "er20-full.json");
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    first = sa.str();
    second = sb.str();
    ok = !first.empty() && first == second;
  }
  fs::remove_all(base);
  std::ostringstream detail;
  detail << "two runs, " << first.size() << " bytes, byte-identical="
         << (first == second && !first.empty() ? "yes" : "no");
  verdict(9, "benchmark determinism", ok, detail.str());
}

}  // namespace

int main() {
  check_axiom_suite();
  check_absorption();
  check_acyclicity();
  check_gradients();
  check_step_reduction();
  check_ablation_direction();
  check_query_contracts();
  check_metric_oracles();
  check_determinism();
  if (failures > 0) {
    std::cout << failures << " acceptance check(s) failed\n";
    return 1;
  }
  std::cout << "all acceptance checks passed\n";
  return 0;
}
