#include "holograph/linalg.hpp"

#include <cmath>

namespace holograph {

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& X) {
  const int n = static_cast<int>(X.rows());
  if (n == 0) return X;
  const double norm = X.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  }
  const Eigen::MatrixXd Xs = X / std::pow(2.0, squarings);

  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 64; ++k) {
    term = (term * Xs) / static_cast<double>(k);
    sum += term;
    if (term.norm() <= 1e-17 * sum.norm()) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

double spectral_radius_estimate(const Eigen::MatrixXd& X) {
  const int n = static_cast<int>(X.rows());
  if (n == 0) return 0.0;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n).normalized();
  double radius = 0.0;
  for (int it = 0; it < 100; ++it) {
    Eigen::VectorXd w = X * v;
    const double len = w.norm();
    if (len < 1e-300) return 0.0;  // iterate died: nilpotent-like block
    const double next = len;      // v was unit
    if (std::abs(next - radius) < 1e-10 * std::max(1.0, next)) {
      radius = next;
      break;
    }
    radius = next;
    v = w / len;
  }
  return radius;
}

Eigen::MatrixXd psd_floor_cholesky(const Eigen::MatrixXd& M,
                                   double floor_eps) {
  Eigen::MatrixXd S = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  Eigen::VectorXd evals = es.eigenvalues();
  bool clamped = false;
  for (int i = 0; i < evals.size(); ++i) {
    if (evals(i) < floor_eps) {
      evals(i) = floor_eps;
      clamped = true;
    }
  }
  if (!clamped) {
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() == Eigen::Success)
      return Eigen::MatrixXd(llt.matrixL());
  }
  const Eigen::MatrixXd rebuilt =
      es.eigenvectors() * evals.asDiagonal() * es.eigenvectors().transpose();
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (rebuilt + rebuilt.transpose()));
  return Eigen::MatrixXd(llt.matrixL());
}

}  // namespace holograph
