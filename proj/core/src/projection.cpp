#include "holograph/projection.hpp"

#include <cmath>

#include "holograph/errors.hpp"
#include "holograph/linalg.hpp"

namespace holograph {

namespace {

Eigen::MatrixXd gather(const Eigen::MatrixXd& src, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      out(static_cast<int>(r), static_cast<int>(c)) =
          src(rows[r], cols[c]);
  return out;
}

void scatter_add(Eigen::MatrixXd& dst, const Eigen::MatrixXd& block,
                 const std::vector<int>& rows, const std::vector<int>& cols) {
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      dst(rows[r], cols[c]) += block(static_cast<int>(r), static_cast<int>(c));
}

void check_hidden_block(const Eigen::MatrixXd& W_HH) {
  if (W_HH.rows() == 0) return;
  // Frobenius bound is a sufficient fast path for rho(W_HH) < 1.
  if (W_HH.norm() < 1.0) return;
  const double radius = spectral_radius_estimate(W_HH);
  if (radius >= 1.0 - 1e-12)
    throw NonConvergentHiddenBlock(
        "spectral radius of hidden block >= 1; Neumann series diverges");
}

/// Factors (I - W_HH); falls back to the eps-regularized matrix only when
/// the plain solve is unusable.
Eigen::PartialPivLU<Eigen::MatrixXd> factor_hidden(const Eigen::MatrixXd& W_HH,
                                                   double eps) {
  const int h = static_cast<int>(W_HH.rows());
  const Eigen::MatrixXd S = Eigen::MatrixXd::Identity(h, h) - W_HH;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(S);
  const Eigen::MatrixXd probe = lu.solve(Eigen::MatrixXd::Identity(h, h));
  if (probe.allFinite() &&
      (S * probe - Eigen::MatrixXd::Identity(h, h)).norm() <= 1e-8 * h)
    return lu;
  return Eigen::PartialPivLU<Eigen::MatrixXd>(
      S + eps * Eigen::MatrixXd::Identity(h, h));
}

}  // namespace

ProjectionPlan make_projection_plan(const Context& parent,
                                    const Context& observed) {
  if (!observed.is_subset_of(parent))
    throw InvalidContext("observed set is not a subset of the state context");
  ProjectionPlan plan;
  for (int pos = 0; pos < parent.size(); ++pos) {
    if (observed.contains(parent[pos]))
      plan.obs_pos.push_back(pos);
    else
      plan.hid_pos.push_back(pos);
  }
  return plan;
}

BlockPartition partition(const CausalState& state, const Context& observed) {
  const ProjectionPlan plan = make_projection_plan(state.context(), observed);
  BlockPartition p;
  p.observed = observed;
  for (int pos : plan.hid_pos) p.hidden_ids.push_back(state.context()[pos]);
  p.obs_pos = plan.obs_pos;
  p.hid_pos = plan.hid_pos;
  const Eigen::MatrixXd& W = state.W();
  const Eigen::MatrixXd M = state.covariance();
  p.W_OO = gather(W, plan.obs_pos, plan.obs_pos);
  p.W_OH = gather(W, plan.obs_pos, plan.hid_pos);
  p.W_HO = gather(W, plan.hid_pos, plan.obs_pos);
  p.W_HH = gather(W, plan.hid_pos, plan.hid_pos);
  p.M_OO = gather(M, plan.obs_pos, plan.obs_pos);
  p.M_OH = gather(M, plan.obs_pos, plan.hid_pos);
  p.M_HO = gather(M, plan.hid_pos, plan.obs_pos);
  p.M_HH = gather(M, plan.hid_pos, plan.hid_pos);
  return p;
}

AbsorptionMatrix absorption(const BlockPartition& p, double eps) {
  check_hidden_block(p.W_HH);
  auto lu = factor_hidden(p.W_HH, eps);
  // A = W_OH (I - W_HH)^{-1}  computed as  ((I - W_HH)^T \ W_OH^T)^T.
  AbsorptionMatrix a;
  const Eigen::MatrixXd At = lu.transpose().solve(p.W_OH.transpose());
  a.A = At.transpose();
  return a;
}

ProjectionValue project_blocks(const Eigen::MatrixXd& W,
                               const Eigen::MatrixXd& M,
                               const ProjectionPlan& plan, double eps) {
  ProjectionValue v;
  v.W_OH = gather(W, plan.obs_pos, plan.hid_pos);
  v.W_HO = gather(W, plan.hid_pos, plan.obs_pos);
  v.W_HH = gather(W, plan.hid_pos, plan.hid_pos);
  v.M_OO = gather(M, plan.obs_pos, plan.obs_pos);
  v.M_OH = gather(M, plan.obs_pos, plan.hid_pos);
  v.M_HH = gather(M, plan.hid_pos, plan.hid_pos);
  check_hidden_block(v.W_HH);
  v.lu = factor_hidden(v.W_HH, eps);
  const Eigen::MatrixXd At = v.lu.transpose().solve(v.W_OH.transpose());
  v.A = At.transpose();

  v.Wt = gather(W, plan.obs_pos, plan.obs_pos) + v.A * v.W_HO;
  const Eigen::MatrixXd M_HO = v.M_OH.transpose();
  Eigen::MatrixXd Mt = v.M_OO + v.A * v.M_HH * v.A.transpose() +
                       v.M_OH * v.A.transpose() + v.A * M_HO;
  v.Mt = 0.5 * (Mt + Mt.transpose());
  return v;
}

void project_jvp(const ProjectionValue& v, const ProjectionPlan& plan,
                 const Eigen::MatrixXd& dW, const Eigen::MatrixXd& dM,
                 Eigen::MatrixXd& dWt, Eigen::MatrixXd& dMt) {
  const Eigen::MatrixXd dW_OO = gather(dW, plan.obs_pos, plan.obs_pos);
  const Eigen::MatrixXd dW_OH = gather(dW, plan.obs_pos, plan.hid_pos);
  const Eigen::MatrixXd dW_HO = gather(dW, plan.hid_pos, plan.obs_pos);
  const Eigen::MatrixXd dW_HH = gather(dW, plan.hid_pos, plan.hid_pos);
  const Eigen::MatrixXd dM_OO = gather(dM, plan.obs_pos, plan.obs_pos);
  const Eigen::MatrixXd dM_OH = gather(dM, plan.obs_pos, plan.hid_pos);
  const Eigen::MatrixXd dM_HO = gather(dM, plan.hid_pos, plan.obs_pos);
  const Eigen::MatrixXd dM_HH = gather(dM, plan.hid_pos, plan.hid_pos);

  // dA = (dW_OH + A dW_HH) (I - W_HH)^{-1}
  const Eigen::MatrixXd dAt =
      v.lu.transpose().solve((dW_OH + v.A * dW_HH).transpose());
  const Eigen::MatrixXd dA = dAt.transpose();
  dWt = dW_OO + dA * v.W_HO + v.A * dW_HO;

  const Eigen::MatrixXd M_HO = v.M_OH.transpose();
  Eigen::MatrixXd d = dM_OO + dA * v.M_HH * v.A.transpose() +
                      v.A * dM_HH * v.A.transpose() +
                      v.A * v.M_HH * dA.transpose() + dM_OH * v.A.transpose() +
                      v.M_OH * dA.transpose() + dA * M_HO + v.A * dM_HO;
  dMt = 0.5 * (d + d.transpose());
}

void project_vjp(const ProjectionValue& v, const ProjectionPlan& plan,
                 const Eigen::MatrixXd& gWt, const Eigen::MatrixXd& gMt,
                 Eigen::MatrixXd& W_bar, Eigen::MatrixXd& M_bar) {
  const Eigen::MatrixXd gM = 0.5 * (gMt + gMt.transpose());
  const Eigen::MatrixXd M_HO = v.M_OH.transpose();

  // Adjoint of A through Wt and Mt.
  Eigen::MatrixXd A_bar = gWt * v.W_HO.transpose();
  A_bar += gM * v.A * v.M_HH.transpose() + gM.transpose() * v.A * v.M_HH;
  A_bar += gM.transpose() * v.M_OH + gM * M_HO.transpose();

  // A = W_OH B with B = (I - W_HH)^{-1}:
  //   W_OH_bar = A_bar B^T,  W_HH_bar = B^T (W_OH^T A_bar) B^T.
  const Eigen::MatrixXd W_OH_bar =
      v.lu.solve(A_bar.transpose()).transpose();
  const Eigen::MatrixXd B_bar = v.W_OH.transpose() * A_bar;
  const Eigen::MatrixXd tmp = v.lu.solve(B_bar.transpose()).transpose();
  const Eigen::MatrixXd W_HH_bar = v.lu.transpose().solve(tmp);

  scatter_add(W_bar, gWt, plan.obs_pos, plan.obs_pos);
  scatter_add(W_bar, W_OH_bar, plan.obs_pos, plan.hid_pos);
  scatter_add(W_bar, v.A.transpose() * gWt, plan.hid_pos, plan.obs_pos);
  scatter_add(W_bar, W_HH_bar, plan.hid_pos, plan.hid_pos);

  scatter_add(M_bar, gM, plan.obs_pos, plan.obs_pos);
  scatter_add(M_bar, gM * v.A, plan.obs_pos, plan.hid_pos);
  scatter_add(M_bar, v.A.transpose() * gM, plan.hid_pos, plan.obs_pos);
  scatter_add(M_bar, v.A.transpose() * gM * v.A, plan.hid_pos, plan.hid_pos);
}

CausalState project(const CausalState& state, const Context& observed,
                    double eps) {
  const ProjectionPlan plan = make_projection_plan(state.context(), observed);
  if (plan.hid_pos.empty()) return state;  // identity: no arithmetic at all

  const ProjectionValue v =
      project_blocks(state.W(), state.covariance(), plan, eps);
  const Eigen::MatrixXd L = psd_floor_cholesky(v.Mt, eps);
  return CausalState(observed, v.Wt, L);
}

}  // namespace holograph
