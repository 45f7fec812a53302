#include "holograph/objective.hpp"

#include <cmath>

#include "holograph/errors.hpp"
#include "holograph/linalg.hpp"
#include "holograph/projection.hpp"

namespace holograph {

namespace {

constexpr double kWeightSaturation = 1.0;

double squash(double x) { return std::min(x / kWeightSaturation, 1.0); }

double squash_grad(double w) {
  const double a = std::abs(w);
  if (a >= kWeightSaturation || w == 0.0) return 0.0;
  return (w > 0.0 ? 1.0 : -1.0) / kWeightSaturation;
}

struct SemanticTerm {
  // Per-belief bookkeeping for the gradient: sections containing the edge
  // and the local (row, col) positions.
  std::vector<int> section_idx;
  std::vector<std::pair<int, int>> positions;
  double mean_squash = 0.0;
};

double semantic_impl(const std::vector<CausalState>& sections,
                     const std::vector<EdgeBelief>& beliefs,
                     std::vector<SemanticTerm>* terms) {
  double energy = 0.0;
  for (const EdgeBelief& b : beliefs) {
    SemanticTerm term;
    double sum = 0.0;
    for (std::size_t s = 0; s < sections.size(); ++s) {
      const int pi = sections[s].context().index_of(b.i);
      const int pj = sections[s].context().index_of(b.j);
      if (pi < 0 || pj < 0) continue;
      term.section_idx.push_back(static_cast<int>(s));
      term.positions.emplace_back(pi, pj);
      sum += squash(std::abs(sections[s].W()(pi, pj)));
    }
    if (term.section_idx.empty())
      throw DanglingBelief("belief on edge outside every section context");
    term.mean_squash = sum / static_cast<double>(term.section_idx.size());
    const double diff = term.mean_squash - b.belief;
    energy += b.confidence * diff * diff;
    if (terms) terms->push_back(std::move(term));
  }
  return energy;
}

}  // namespace

double acyclicity(const Eigen::MatrixXd& W) {
  const int n = static_cast<int>(W.rows());
  if (W.cols() != n) throw InvalidDimension("acyclicity needs a square matrix");
  const Eigen::MatrixXd E = matrix_exponential(W.cwiseProduct(W));
  return E.trace() - static_cast<double>(n);
}

double spectral_penalty(const Eigen::MatrixXd& W, double delta) {
  const double excess = W.norm() - (1.0 - delta);
  return excess > 0.0 ? excess * excess : 0.0;
}

double semantic_energy(const std::vector<CausalState>& sections,
                       const std::vector<EdgeBelief>& beliefs) {
  return semantic_impl(sections, beliefs, nullptr);
}

double descent_loss(const std::vector<CausalState>& sections,
                    const ContextCover& cover) {
  if (sections.size() != cover.parts.size())
    throw InvalidContext("one section per cover part required");
  double loss = 0.0;
  for (const auto& [i, j, overlap] : cover.pairwise_intersections) {
    const auto& si = sections[static_cast<std::size_t>(i)];
    const auto& sj = sections[static_cast<std::size_t>(j)];
    const ProjectionPlan plan_i = make_projection_plan(si.context(), overlap);
    const ProjectionPlan plan_j = make_projection_plan(sj.context(), overlap);
    const ProjectionValue vi =
        project_blocks(si.W(), si.covariance(), plan_i);
    const ProjectionValue vj =
        project_blocks(sj.W(), sj.covariance(), plan_j);
    loss += (vi.Wt - vj.Wt).squaredNorm() + (vi.Mt - vj.Mt).squaredNorm();
  }
  return loss;
}

LossBreakdown total_loss(const std::vector<CausalState>& sections,
                         const ContextCover& cover,
                         const std::vector<EdgeBelief>& beliefs,
                         const LossWeights& weights, double delta) {
  LossBreakdown b;
  b.semantic = weights.lambda_sem * semantic_energy(sections, beliefs);
  b.descent = descent_loss(sections, cover);
  for (const CausalState& s : sections) {
    b.acyclicity += acyclicity(s.W());
    b.spectral += spectral_penalty(s.W(), delta);
  }
  b.total = b.semantic + weights.lambda_d * b.descent +
            weights.lambda_a * b.acyclicity + weights.lambda_s * b.spectral;
  return b;
}

std::pair<std::vector<SectionGrad>, LossBreakdown> gradient_with_loss(
    const std::vector<CausalState>& sections, const ContextCover& cover,
    const std::vector<EdgeBelief>& beliefs, const LossWeights& weights,
    double delta) {
  if (sections.size() != cover.parts.size())
    throw InvalidContext("one section per cover part required");
  LossBreakdown loss;
  const std::size_t count = sections.size();

  std::vector<Eigen::MatrixXd> W_bar(count), M_bar(count);
  std::vector<SectionGrad> grads(count);
  for (std::size_t s = 0; s < count; ++s) {
    const int n = sections[s].size();
    W_bar[s] = Eigen::MatrixXd::Zero(n, n);
    M_bar[s] = Eigen::MatrixXd::Zero(n, n);
    grads[s].W = Eigen::MatrixXd::Zero(n, n);
    grads[s].L = Eigen::MatrixXd::Zero(n, n);
  }

  // Descent term: per-pair vjp through the projection.
  for (const auto& [i, j, overlap] : cover.pairwise_intersections) {
    const auto si = static_cast<std::size_t>(i);
    const auto sj = static_cast<std::size_t>(j);
    const ProjectionPlan plan_i =
        make_projection_plan(sections[si].context(), overlap);
    const ProjectionPlan plan_j =
        make_projection_plan(sections[sj].context(), overlap);
    const ProjectionValue vi =
        project_blocks(sections[si].W(), sections[si].covariance(), plan_i);
    const ProjectionValue vj =
        project_blocks(sections[sj].W(), sections[sj].covariance(), plan_j);
    const Eigen::MatrixXd rW = vi.Wt - vj.Wt;
    const Eigen::MatrixXd rM = vi.Mt - vj.Mt;
    loss.descent += rW.squaredNorm() + rM.squaredNorm();

    const double scale = 2.0 * weights.lambda_d;
    project_vjp(vi, plan_i, scale * rW, scale * rM, W_bar[si], M_bar[si]);
    project_vjp(vj, plan_j, -scale * rW, -scale * rM, W_bar[sj], M_bar[sj]);
  }

  // Semantic term.
  std::vector<SemanticTerm> terms;
  loss.semantic = weights.lambda_sem * semantic_impl(sections, beliefs, &terms);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const EdgeBelief& b = beliefs[t];
    const SemanticTerm& term = terms[t];
    const double m = static_cast<double>(term.section_idx.size());
    const double common = weights.lambda_sem * 2.0 * b.confidence *
                          (term.mean_squash - b.belief) / m;
    for (std::size_t k = 0; k < term.section_idx.size(); ++k) {
      const auto s = static_cast<std::size_t>(term.section_idx[k]);
      const auto [pi, pj] = term.positions[k];
      W_bar[s](pi, pj) += common * squash_grad(sections[s].W()(pi, pj));
    }
  }

  // Acyclicity and spectral terms, per section.
  for (std::size_t s = 0; s < count; ++s) {
    const Eigen::MatrixXd& W = sections[s].W();
    const int n = sections[s].size();
    const Eigen::MatrixXd E = matrix_exponential(W.cwiseProduct(W));
    const double h = E.trace() - static_cast<double>(n);
    loss.acyclicity += h;
    W_bar[s] += weights.lambda_a *
                E.transpose().cwiseProduct(2.0 * W);

    const double norm = W.norm();
    const double excess = norm - (1.0 - delta);
    if (excess > 0.0) {
      loss.spectral += excess * excess;
      W_bar[s] += weights.lambda_s * (2.0 * excess / norm) * W;
    }
  }

  loss.total = loss.semantic + weights.lambda_d * loss.descent +
               weights.lambda_a * loss.acyclicity +
               weights.lambda_s * loss.spectral;
  if (!std::isfinite(loss.total))
    throw NonFiniteGradient("non-finite loss in gradient evaluation");

  // Chain M = L L^T and project onto the free parameters.
  for (std::size_t s = 0; s < count; ++s) {
    const int n = sections[s].size();
    grads[s].W = W_bar[s];
    grads[s].L = (M_bar[s] + M_bar[s].transpose()) * sections[s].L();
    for (int a = 0; a < n; ++a) {
      grads[s].W(a, a) = 0.0;
      for (int bcol = a + 1; bcol < n; ++bcol) grads[s].L(a, bcol) = 0.0;
    }
    if (!grads[s].W.allFinite() || !grads[s].L.allFinite())
      throw NonFiniteGradient("non-finite parameter gradient");
  }
  return {std::move(grads), loss};
}

std::vector<SectionGrad> gradient(const std::vector<CausalState>& sections,
                                  const ContextCover& cover,
                                  const std::vector<EdgeBelief>& beliefs,
                                  const LossWeights& weights, double delta) {
  return gradient_with_loss(sections, cover, beliefs, weights, delta).first;
}

}  // namespace holograph
