#pragma once

#include <Eigen/Dense>

namespace holograph {

/// Matrix exponential by scaling-and-squaring with a Taylor series summed to
/// machine precision. Intended for the moderate sizes this project uses
/// (n <= 128).
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& X);

/// Spectral radius estimate via power iteration (100 steps, tolerance 1e-10).
/// Returns 0 for empty matrices and when the iterate collapses to zero
/// (nilpotent case).
double spectral_radius_estimate(const Eigen::MatrixXd& X);

/// Symmetrize, clamp eigenvalues at `floor_eps`, and return the Cholesky
/// factor of the rebuilt matrix.
Eigen::MatrixXd psd_floor_cholesky(const Eigen::MatrixXd& M, double floor_eps);

}  // namespace holograph
