#include "holograph/optimizer.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "holograph/errors.hpp"
#include "holograph/linalg.hpp"
#include "holograph/serialization.hpp"

namespace holograph {

CausalState stabilize_state(Context context, Eigen::MatrixXd W,
                            Eigen::MatrixXd L) {
  const double rho = spectral_radius_estimate(W.cwiseAbs());
  if (rho >= 0.95) W *= 0.9 / rho;
  return make_state_projected(std::move(context), std::move(W), std::move(L));
}

FisherDiagonal fisher_diag(const std::vector<SectionGrad>& grads,
                           const OptimizerConfig& config) {
  FisherDiagonal fisher;
  fisher.reserve(grads.size());
  for (const SectionGrad& g : grads) {
    SectionGrad f;
    f.W = (g.W.array().square() + config.fisher_tikhonov)
              .max(config.fisher_floor)
              .matrix();
    f.L = (g.L.array().square() + config.fisher_tikhonov)
              .max(config.fisher_floor)
              .matrix();
    fisher.push_back(std::move(f));
  }
  return fisher;
}

std::vector<CausalState> natural_step(const std::vector<CausalState>& sections,
                                      const std::vector<SectionGrad>& grads,
                                      const FisherDiagonal& fisher,
                                      double eta) {
  std::vector<CausalState> out;
  out.reserve(sections.size());
  for (std::size_t s = 0; s < sections.size(); ++s) {
    Eigen::MatrixXd W =
        sections[s].W() - eta * grads[s].W.cwiseQuotient(fisher[s].W);
    Eigen::MatrixXd L =
        sections[s].L() - eta * grads[s].L.cwiseQuotient(fisher[s].L);
    out.push_back(stabilize_state(sections[s].context(), std::move(W),
                                 std::move(L)));
  }
  return out;
}

std::vector<CausalState> sgd_step(const std::vector<CausalState>& sections,
                                  const std::vector<SectionGrad>& grads,
                                  double eta) {
  std::vector<CausalState> out;
  out.reserve(sections.size());
  for (std::size_t s = 0; s < sections.size(); ++s) {
    Eigen::MatrixXd W = sections[s].W() - eta * grads[s].W;
    Eigen::MatrixXd L = sections[s].L() - eta * grads[s].L;
    out.push_back(stabilize_state(sections[s].context(), std::move(W),
                                 std::move(L)));
  }
  return out;
}

std::vector<int> detect_obstruction(const Trajectory& trajectory, int window,
                                    double rel_tol) {
  if (window < 2) throw InvalidDimension("obstruction window must be >= 2");
  std::vector<int> flags;
  const auto& steps = trajectory.steps;
  for (std::size_t t = static_cast<std::size_t>(window); t < steps.size();
       ++t) {
    const double before = steps[t - static_cast<std::size_t>(window)].descent;
    const double now = steps[t].descent;
    if (now <= 1e-6) continue;  // coherence achieved; nothing obstructed
    const double improvement = (before - now) / std::max(before, 1e-12);
    if (improvement < rel_tol) flags.push_back(static_cast<int>(t));
  }
  return flags;
}

std::pair<std::vector<CausalState>, Trajectory> fit(
    std::vector<CausalState> sections, const ContextCover& cover,
    const OracleHook& oracle_hook, const OptimizerConfig& config,
    std::ostream* stream) {
  Trajectory traj;
  std::map<std::pair<int, int>, EdgeBelief> belief_map;
  std::vector<EdgeBelief> beliefs;

  // EMA state for the optional smoothed Fisher estimate.
  std::vector<SectionGrad> ema;
  bool ema_ready = false;

  for (int step = 0; step < config.max_steps; ++step) {
    if (oracle_hook && config.query_interval > 0 &&
        step % config.query_interval == 0) {
      for (const EdgeBelief& b : oracle_hook(sections, step))
        belief_map[{b.i, b.j}] = b;  // latest answer wins
      beliefs.clear();
      for (const auto& [key, b] : belief_map) beliefs.push_back(b);
    }

    auto [grads, loss] =
        gradient_with_loss(sections, cover, beliefs, config.weights,
                           config.delta);
    traj.steps.push_back(loss);
    if (stream) {
      *stream << loss_to_json(loss).dump() << "\n";
      if ((step + 1) % 100 == 0) stream->flush();
    }
    if (loss.total < config.early_stop_total) {
      traj.converged_step = step;
      break;
    }

    FisherDiagonal fisher;
    if (config.use_natural_gradient) {
      if (config.fisher_ema) {
        if (!ema_ready) {
          ema = grads;
          for (auto& g : ema) {
            g.W = g.W.array().square().matrix();
            g.L = g.L.array().square().matrix();
          }
          ema_ready = true;
        } else {
          const double d = config.fisher_ema_decay;
          for (std::size_t s = 0; s < ema.size(); ++s) {
            ema[s].W = d * ema[s].W + (1.0 - d) *
                           grads[s].W.array().square().matrix();
            ema[s].L = d * ema[s].L + (1.0 - d) *
                           grads[s].L.array().square().matrix();
          }
        }
        for (const auto& e : ema) {
          SectionGrad f;
          f.W = (e.W.array() + config.fisher_tikhonov)
                    .max(config.fisher_floor)
                    .matrix();
          f.L = (e.L.array() + config.fisher_tikhonov)
                    .max(config.fisher_floor)
                    .matrix();
          fisher.push_back(std::move(f));
        }
      } else {
        fisher = fisher_diag(grads, config);
      }
    }

    // Backtracking on the step length: the Fisher floor amplifies small
    // gradients by lr/floor, which overshoots near optima and sustains a
    // limit cycle; halving until the total decreases keeps the trajectory
    // monotone between belief refreshes.
    double eta = config.learning_rate;
    bool accepted = false;
    for (int halving = 0; halving < 20; ++halving) {
      std::vector<CausalState> candidate =
          config.use_natural_gradient
              ? natural_step(sections, grads, fisher, eta)
              : sgd_step(sections, grads, eta);
      const double candidate_total =
          total_loss(candidate, cover, beliefs, config.weights, config.delta)
              .total;
      if (candidate_total <= loss.total) {
        sections = std::move(candidate);
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) continue;  // stalled; wait for the next belief refresh
  }

  traj.final_loss =
      total_loss(sections, cover, beliefs, config.weights, config.delta);
  traj.obstruction_events = detect_obstruction(traj);
  if (stream) stream->flush();
  return {std::move(sections), std::move(traj)};
}

}  // namespace holograph
