#pragma once

#include <Eigen/Dense>
#include <vector>

#include "holograph/causal_state.hpp"
#include "holograph/sheaf.hpp"

namespace holograph {

struct LossWeights {
  double lambda_d = 1.0;   // descent
  double lambda_a = 1.0;   // acyclicity
  double lambda_s = 0.1;   // spectral
  double lambda_sem = 1.0;  // semantic (weight left at 1.0; config-exposed)
};

/// An oracle prior on a directed edge i -> j: belief and confidence in [0,1].
struct EdgeBelief {
  int i = 0;
  int j = 0;
  double belief = 0.5;
  double confidence = 0.0;
};

struct LossBreakdown {
  double semantic = 0.0;
  double descent = 0.0;
  double acyclicity = 0.0;
  double spectral = 0.0;
  double total = 0.0;
};

/// Per-section parameter gradients (same shapes as the section's W and L).
struct SectionGrad {
  Eigen::MatrixXd W;
  Eigen::MatrixXd L;
};

/// Sum over overlapping part pairs of the squared Frobenius disagreement of
/// the two projected sections on the intersection, over both W and M.
double descent_loss(const std::vector<CausalState>& sections,
                    const ContextCover& cover);

/// NOTEARS constraint h(W) = tr(exp(W o W)) - n; zero exactly on DAGs.
double acyclicity(const Eigen::MatrixXd& W);

/// max(0, ||W||_F - (1 - delta))^2
double spectral_penalty(const Eigen::MatrixXd& W, double delta);

/// Confidence-weighted squared error between squashed edge magnitude and the
/// oracle belief. When several sections contain an edge, the squashed
/// magnitudes are averaged so each belief contributes one term.
double semantic_energy(const std::vector<CausalState>& sections,
                       const std::vector<EdgeBelief>& beliefs);

LossBreakdown total_loss(const std::vector<CausalState>& sections,
                         const ContextCover& cover,
                         const std::vector<EdgeBelief>& beliefs,
                         const LossWeights& weights, double delta);

/// Exact gradients of total_loss with respect to every section's W and L,
/// with the free-parameter projection applied (zero W diagonal, lower
/// triangular L). Throws NonFiniteGradient on non-finite loss terms.
std::vector<SectionGrad> gradient(const std::vector<CausalState>& sections,
                                  const ContextCover& cover,
                                  const std::vector<EdgeBelief>& beliefs,
                                  const LossWeights& weights, double delta);

/// gradient() plus the loss breakdown from the same evaluation.
std::pair<std::vector<SectionGrad>, LossBreakdown> gradient_with_loss(
    const std::vector<CausalState>& sections, const ContextCover& cover,
    const std::vector<EdgeBelief>& beliefs, const LossWeights& weights,
    double delta);

}  // namespace holograph
