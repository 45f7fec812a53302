#pragma once

#include <functional>
#include <ostream>
#include <vector>

#include "holograph/objective.hpp"

namespace holograph {

struct OptimizerConfig {
  double learning_rate = 0.01;
  int max_steps = 1500;
  double fisher_tikhonov = 1e-4;
  double fisher_floor = 0.01;
  bool use_natural_gradient = true;  // A1 flag: false = plain SGD
  bool fisher_ema = false;           // optional EMA of squared gradients
  double fisher_ema_decay = 0.9;
  LossWeights weights;
  double delta = 0.1;
  int query_interval = 50;
  double early_stop_total = 1e-8;
};

/// One positive entry per parameter; floored at fisher_floor.
using FisherDiagonal = std::vector<SectionGrad>;

struct Trajectory {
  std::vector<LossBreakdown> steps;   // loss before each update
  LossBreakdown final_loss;           // loss at the returned parameters
  int converged_step = -1;            // step index of early stop, or -1
  std::vector<int> obstruction_events;
};

/// Diagonal Fisher estimate from the current squared gradient with Tikhonov
/// regularization: entry = max(g^2 + tikhonov, floor).
FisherDiagonal fisher_diag(const std::vector<SectionGrad>& grads,
                           const OptimizerConfig& config);

/// Re-projection onto the valid manifold: zero W diagonal, lower triangular
/// L with nonnegative diagonal, and rho(|W|) capped below 1 so that every
/// restriction's hidden-block Neumann series converges (the radius of any
/// principal block of |W| is bounded by rho(|W|)). The cap never binds once
/// the support of W is acyclic.
CausalState stabilize_state(Context context, Eigen::MatrixXd W,
                            Eigen::MatrixXd L);

/// param' = param - eta * grad / fisher, then stabilize_state.
std::vector<CausalState> natural_step(const std::vector<CausalState>& sections,
                                      const std::vector<SectionGrad>& grads,
                                      const FisherDiagonal& fisher, double eta);

/// Plain gradient step with the same re-projection.
std::vector<CausalState> sgd_step(const std::vector<CausalState>& sections,
                                  const std::vector<SectionGrad>& grads,
                                  double eta);

/// Flags step t when the descent loss improved by less than rel_tol
/// (relative) over the trailing window while still above 1e-6.
std::vector<int> detect_obstruction(const Trajectory& trajectory,
                                    int window = 50, double rel_tol = 1e-3);

/// Called every query_interval steps; returns fresh edge beliefs to merge
/// (latest answer per ordered pair wins). May be null.
using OracleHook = std::function<std::vector<EdgeBelief>(
    const std::vector<CausalState>& sections, int step)>;

/// Natural-gradient descent loop. Deterministic given the initial sections
/// and a deterministic hook. `stream` (optional) receives one JSON line per
/// step, flushed every 100 steps.
std::pair<std::vector<CausalState>, Trajectory> fit(
    std::vector<CausalState> sections, const ContextCover& cover,
    const OracleHook& oracle_hook, const OptimizerConfig& config,
    std::ostream* stream = nullptr);

}  // namespace holograph
