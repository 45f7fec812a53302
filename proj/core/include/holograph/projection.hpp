#pragma once

#include <Eigen/Dense>
#include <vector>

#include "holograph/causal_state.hpp"

namespace holograph {

inline constexpr double kMatrixEps = 1e-6;  // regularization for inversions

struct BlockPartition {
  Context observed;
  std::vector<int> hidden_ids;  // may be empty
  std::vector<int> obs_pos;     // positions of observed ids in parent context
  std::vector<int> hid_pos;
  Eigen::MatrixXd W_OO, W_OH, W_HO, W_HH;
  Eigen::MatrixXd M_OO, M_OH, M_HO, M_HH;
};

struct AbsorptionMatrix {
  Eigen::MatrixXd A;  // |O| x |H|
};

/// Splits W and M = covariance(state) into observed/hidden blocks, keeping
/// context order. `observed` must be a subset of the state's context.
BlockPartition partition(const CausalState& state, const Context& observed);

/// A = W_OH (I - W_HH)^{-1}. Throws NonConvergentHiddenBlock when the hidden
/// block has spectral radius >= 1. `eps` regularizes the solve only if the
/// unregularized factorization fails.
AbsorptionMatrix absorption(const BlockPartition& p, double eps = kMatrixEps);

/// The restriction morphism: projects a state onto `observed`, absorbing
/// hidden-variable paths into W and M. With an empty hidden set this returns
/// the input unchanged (no arithmetic).
CausalState project(const CausalState& state, const Context& observed,
                    double eps = kMatrixEps);

// ---------------------------------------------------------------------------
// Differentiable projection on raw (W, M) pairs. Used by the descent-loss
// gradient and by the gluing solver; computes the projected matrices plus a
// cached factorization for jvp/vjp products.

struct ProjectionPlan {
  std::vector<int> obs_pos;
  std::vector<int> hid_pos;
};

/// Index plan for projecting a state over `parent` onto `observed`.
ProjectionPlan make_projection_plan(const Context& parent,
                                    const Context& observed);

struct ProjectionValue {
  Eigen::MatrixXd Wt, Mt;  // projected W and M (Mt symmetrized)
  // Cached blocks and factorization of (I - W_HH) for derivative products.
  Eigen::MatrixXd W_OH, W_HO, W_HH, M_OO, M_OH, M_HH, A;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;  // of (I - W_HH), possibly eps-regularized
};

ProjectionValue project_blocks(const Eigen::MatrixXd& W,
                               const Eigen::MatrixXd& M,
                               const ProjectionPlan& plan,
                               double eps = kMatrixEps);

/// Forward-mode directional derivative of (Wt, Mt) along (dW, dM).
void project_jvp(const ProjectionValue& v, const ProjectionPlan& plan,
                 const Eigen::MatrixXd& dW, const Eigen::MatrixXd& dM,
                 Eigen::MatrixXd& dWt, Eigen::MatrixXd& dMt);

/// Reverse-mode: accumulates d<gWt, Wt> + <gMt, Mt> into full-size adjoints
/// W_bar, M_bar (which must be pre-sized to the parent dimension).
void project_vjp(const ProjectionValue& v, const ProjectionPlan& plan,
                 const Eigen::MatrixXd& gWt, const Eigen::MatrixXd& gMt,
                 Eigen::MatrixXd& W_bar, Eigen::MatrixXd& M_bar);

}  // namespace holograph
