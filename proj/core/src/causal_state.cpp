#include "holograph/causal_state.hpp"

#include <cmath>
#include <random>

namespace holograph {

namespace {

void check_invariants(const Context& context, const Eigen::MatrixXd& W,
                      const Eigen::MatrixXd& L) {
  const int n = context.size();
  if (W.rows() != n || W.cols() != n || L.rows() != n || L.cols() != n)
    throw InvalidDimension("W and L must be square with side |context|");
  // The W diagonal is zero for constructed states (random(), the optimizer
  // re-projection) but restriction output keeps whatever the projection
  // formula yields, so it is not rejected here.
  for (int i = 0; i < n; ++i) {
    if (L(i, i) < 0.0)
      throw InvalidDimension("L diagonal must be nonnegative");
    for (int j = i + 1; j < n; ++j)
      if (L(i, j) != 0.0)
        throw InvalidDimension("L must be lower triangular");
  }
}

}  // namespace

CausalState::CausalState(Context context, Eigen::MatrixXd W, Eigen::MatrixXd L)
    : context_(std::move(context)), W_(std::move(W)), L_(std::move(L)) {
  check_invariants(context_, W_, L_);
}

CausalState CausalState::random(int n, double init_scale, std::uint64_t seed) {
  if (n < 1) throw InvalidDimension("state needs at least one variable");
  if (init_scale < 0.0) throw InvalidDimension("init_scale must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-init_scale, init_scale);
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) W(i, j) = unif(rng);
  return CausalState(Context::full(n), std::move(W),
                     Eigen::MatrixXd::Identity(n, n));
}

Eigen::MatrixXd CausalState::covariance() const {
  Eigen::MatrixXd M = L_ * L_.transpose();
  // Symmetric to 0 ULP in storage.
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < i; ++j) M(j, i) = M(i, j);
  return M;
}

BinaryGraph CausalState::discretize(double threshold) const {
  const int n = size();
  BinaryGraph g;
  g.context = context_;
  g.adjacency.setConstant(n, n, false);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && std::abs(W_(i, j)) >= threshold) g.adjacency(i, j) = true;
  return g;
}

double frobenius_norm(const Eigen::MatrixXd& m) { return m.norm(); }

CausalState make_state_projected(Context context, Eigen::MatrixXd W,
                                 Eigen::MatrixXd L) {
  const int n = context.size();
  for (int i = 0; i < n; ++i) {
    W(i, i) = 0.0;
    if (L(i, i) < 0.0) L(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) L(i, j) = 0.0;
  }
  return CausalState(std::move(context), std::move(W), std::move(L));
}

}  // namespace holograph
