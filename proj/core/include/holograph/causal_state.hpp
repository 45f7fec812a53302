#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "holograph/context.hpp"

namespace holograph {

struct BinaryGraph {
  Context context;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> adjacency;

  int size() const { return static_cast<int>(adjacency.rows()); }
  int edge_count() const {
    int c = 0;
    for (int i = 0; i < adjacency.rows(); ++i)
      for (int j = 0; j < adjacency.cols(); ++j)
        if (adjacency(i, j)) ++c;
    return c;
  }
};

/// A causal state over a variable context: weighted adjacency W (row =
/// source, so W(i,j) is the weight of edge i -> j) and the Cholesky factor L
/// of the error covariance M = L L^T. Immutable after construction.
class CausalState {
 public:
  CausalState(Context context, Eigen::MatrixXd W, Eigen::MatrixXd L);

  /// Random initialization: W entries i.i.d. uniform in [-init_scale,
  /// init_scale] with zero diagonal, L = I. Pure function of (n, init_scale,
  /// seed).
  static CausalState random(int n, double init_scale, std::uint64_t seed);

  const Context& context() const { return context_; }
  int size() const { return context_.size(); }
  const Eigen::MatrixXd& W() const { return W_; }
  const Eigen::MatrixXd& L() const { return L_; }

  /// Error covariance M = L L^T, symmetrized in storage.
  Eigen::MatrixXd covariance() const;

  /// Binary adjacency: edge iff |W(i,j)| >= threshold, diagonal always false.
  BinaryGraph discretize(double threshold) const;

 private:
  Context context_;
  Eigen::MatrixXd W_;
  Eigen::MatrixXd L_;
};

double frobenius_norm(const Eigen::MatrixXd& m);

/// Creates a state after forcing the invariants (zero W diagonal, lower
/// triangular L with nonnegative diagonal) instead of rejecting violations.
/// Used by optimizer steps to re-project iterates onto the valid manifold.
CausalState make_state_projected(Context context, Eigen::MatrixXd W,
                                 Eigen::MatrixXd L);

}  // namespace holograph
