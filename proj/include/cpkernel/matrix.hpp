#pragma once

#include <complex>

#include <Eigen/Dense>

#include "cpkernel/errors.hpp"

namespace cpkernel {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Default tolerances shared across the library. PSD checks are relative to
// max(1, op_norm); rank cuts are relative to the largest singular value.
inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kReconTol = 1e-8;
inline constexpr double kHermTol = 1e-12;

bool all_finite(const ComplexMatrix& m);

/// (M + M*)/2. Requires a square input.
ComplexMatrix hermitian_part(const ComplexMatrix& m);

struct HermitianEigen {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // columns are eigenvectors
};

/// Eigendecomposition of the Hermitian part of `m`. The result satisfies
/// ||V*V - I||_max <= 1e-10 and ||M - V diag V*||_op <= 1e-8 max(1,||M||_op);
/// both are verified, ErrNumerical if unattainable.
HermitianEigen hermitian_eigen(const ComplexMatrix& m);

struct PsdCheck {
  bool is_psd = false;
  double min_eig = 0.0;
};

/// min_eig of the Hermitian part; is_psd iff min_eig >= -tol * max(1, ||M||_op).
PsdCheck psd_check(const ComplexMatrix& m, double tol = kPsdTol);

/// Hermitian PSD square root; eigenvalues within -tol of zero are clamped.
/// ErrNotPSD when psd_check fails at kPsdTol.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

struct Pinv {
  ComplexMatrix pinv;
  Eigen::Index rank = 0;
};

/// Moore-Penrose pseudoinverse via SVD. rank counts singular values above
/// rank_tol * sigma_max. The zero matrix maps to zero with rank 0.
Pinv pinv(const ComplexMatrix& m, double rank_tol = kDefaultRankTol);

/// Largest singular value.
double op_norm(const ComplexMatrix& m);

}  // namespace cpkernel
