#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "holograph/causal_state.hpp"
#include "holograph/projection.hpp"

namespace holograph {

inline constexpr double kAxiomThreshold = 1e-6;

/// A family of subsets of a ground context whose union is the ground set,
/// with cached pairwise intersections.
struct ContextCover {
  Context ground;
  std::vector<Context> parts;
  // (i, j, U_i n U_j) for i < j, nonempty intersections only.
  std::vector<std::tuple<int, int, Context>> pairwise_intersections;

  static ContextCover make(Context ground, std::vector<Context> parts);
};

enum class Axiom { Identity, Transitivity, Locality, Gluing };

const char* axiom_name(Axiom a);

struct AxiomReport {
  Axiom axiom;
  double error = 0.0;
  bool passed = false;
  double threshold = kAxiomThreshold;

  static AxiomReport make(Axiom a, double error,
                          double threshold = kAxiomThreshold) {
    return AxiomReport{a, error, error < threshold, threshold};
  }
};

/// Error between project(state, state.context) and state; exactly 0 by
/// construction of the restriction morphism.
AxiomReport check_identity(const CausalState& state);

/// Error between the direct restriction to Z and the composite through V,
/// for strict nestings Z < V < state.context.
AxiomReport check_transitivity(const CausalState& state, const Context& V,
                               const Context& Z);

/// Reconstruction error ||state - glue(restrictions of state to the cover)||
/// over (W, M). Nonzero error means restrictions do not determine the
/// section.
AxiomReport check_locality(const CausalState& state, const ContextCover& cover);

/// Finds the global state minimizing the stacked projection residual
/// sum_i ||project(g, U_i) - locals[i]||_F^2 over (W, M). Reported error is
/// sqrt of the residual at the optimum. Throws IncompatibleSections when
/// pairwise restriction disagreement exceeds 0.1.
std::pair<CausalState, AxiomReport> glue_sections(
    const std::vector<CausalState>& locals, const ContextCover& cover,
    double eps = kMatrixEps);

// --- Exactness suite -------------------------------------------------------

struct SuiteCell {
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<AxiomReport> reports;  // Identity, Transitivity, Locality, Gluing
};

struct SuiteAggregate {
  int n = 0;
  Axiom axiom = Axiom::Identity;
  double mean_error = 0.0;
  double std_error = 0.0;
  double pass_rate = 0.0;  // in [0, 1]
};

/// Random states and covers used by the exactness suite; exposed so tests
/// can reproduce individual cells. States are Frobenius-normalized to
/// ||W||_F = 0.9 with a well-conditioned Cholesky factor.
CausalState random_suite_state(int n, std::uint64_t seed);
ContextCover random_suite_cover(int n, std::uint64_t seed);
/// Random strict nesting Z < V < {0..n-1}; requires n >= 3.
std::pair<Context, Context> random_nested_contexts(int n, std::uint64_t seed);

std::vector<SuiteCell> run_exactness_suite(
    const std::vector<int>& sizes, const std::vector<std::uint64_t>& seeds);

std::vector<SuiteAggregate> aggregate_suite(const std::vector<SuiteCell>& cells);

}  // namespace holograph
