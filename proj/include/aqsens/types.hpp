#pragma once

#include <Eigen/Dense>

#include <complex>

namespace aqsens {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Numerical contracts. These are correctness tolerances, not tuning knobs.
namespace tol {
inline constexpr double hermiticity = 1e-10;
inline constexpr double reconstruction = 1e-9;
inline constexpr double unitarity = 1e-10;
inline constexpr double state_norm = 1e-12;
inline constexpr double orthogonality = 1e-12;
inline constexpr double expectation_imag = 1e-8;
inline constexpr double trace_one = 1e-10;
inline constexpr double positivity = 1e-10;
inline constexpr double degenerate_gap = 1e-10;
inline constexpr double gap_collision = 1e-8;
inline constexpr double distribution_norm = 1e-8;
inline constexpr double eigenvalue_clamp = 1e-10;
}  // namespace tol

}  // namespace aqsens
