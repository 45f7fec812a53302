#include <benchmark/benchmark.h>

#include "holograph/linalg.hpp"
#include "holograph/objective.hpp"
#include "holograph/projection.hpp"
#include "holograph/sheaf.hpp"

using namespace holograph;

namespace {

static void BM_Project(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CausalState s = random_suite_state(n, 7);
  std::vector<int> obs;
  for (int i = 0; i < n / 2; ++i) obs.push_back(i);
  const Context observed(obs);
  for (auto _ : state)
    benchmark::DoNotOptimize(project(s, observed));
}
BENCHMARK(BM_Project)->Arg(30)->Arg(50)->Arg(100);

static void BM_MatrixExponential(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CausalState s = random_suite_state(n, 11);
  const Eigen::MatrixXd sq = s.W().cwiseProduct(s.W());
  for (auto _ : state)
    benchmark::DoNotOptimize(matrix_exponential(sq));
}
BENCHMARK(BM_MatrixExponential)->Arg(30)->Arg(50)->Arg(100);

static void BM_Gradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ContextCover cover = random_suite_cover(n, 3);
  std::vector<CausalState> sections;
  for (std::size_t p = 0; p < cover.parts.size(); ++p) {
    const CausalState r =
        CausalState::random(cover.parts[p].size(), 0.1, 100 + p);
    sections.emplace_back(cover.parts[p], r.W(), r.L());
  }
  const std::vector<EdgeBelief> beliefs = {
      {cover.parts[0][0], cover.parts[0][1], 0.9, 1.0}};
  const LossWeights weights;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        gradient(sections, cover, beliefs, weights, 0.1));
}
BENCHMARK(BM_Gradient)->Arg(20)->Arg(50);

static void BM_Glue(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CausalState global = random_suite_state(n, 5);
  const ContextCover cover = random_suite_cover(n, 5);
  std::vector<CausalState> locals;
  for (const Context& part : cover.parts)
    locals.push_back(project(global, part));
  for (auto _ : state)
    benchmark::DoNotOptimize(glue_sections(locals, cover));
}
BENCHMARK(BM_Glue)->Arg(20)->Arg(30);

}  // namespace

BENCHMARK_MAIN();
