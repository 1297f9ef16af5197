#include "cpkernel/matrix.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace cpkernel {

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    throw Error(errc::dimension_mismatch, "hermitian_part: matrix is not square");
  return 0.5 * (m + m.adjoint());
}

double op_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (!all_finite(m)) throw Error(errc::numerical, "op_norm: non-finite entries");
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

HermitianEigen hermitian_eigen(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    throw Error(errc::dimension_mismatch, "hermitian_eigen: matrix is not square");
  if (m.rows() == 0) return {RealVector(0), ComplexMatrix(0, 0)};
  if (!all_finite(m)) throw Error(errc::numerical, "hermitian_eigen: non-finite entries");
  const ComplexMatrix h = hermitian_part(m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw Error(errc::numerical, "hermitian_eigen: eigensolver failed");
  HermitianEigen out{solver.eigenvalues(), solver.eigenvectors()};

  const Eigen::Index n = h.rows();
  if (n > 0) {
    const double unitary_residual =
        (out.vectors.adjoint() * out.vectors - ComplexMatrix::Identity(n, n))
            .cwiseAbs()
            .maxCoeff();
    const double scale = std::max(1.0, out.values.cwiseAbs().maxCoeff());
    const double recon_residual =
        op_norm(h - out.vectors * out.values.asDiagonal().toDenseMatrix().cast<Complex>() *
                        out.vectors.adjoint());
    if (unitary_residual > 1e-10 || recon_residual > kReconTol * scale)
      throw Error(errc::numerical, "hermitian_eigen: residual tolerance unattainable");
  }
  return out;
}

PsdCheck psd_check(const ComplexMatrix& m, double tol) {
  const HermitianEigen eig = hermitian_eigen(m);
  if (eig.values.size() == 0) return {true, 0.0};
  const double min_eig = eig.values(0);
  const double norm = eig.values.cwiseAbs().maxCoeff();
  return {min_eig >= -tol * std::max(1.0, norm), min_eig};
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const HermitianEigen eig = hermitian_eigen(m);
  if (eig.values.size() > 0) {
    const double norm = eig.values.cwiseAbs().maxCoeff();
    if (eig.values(0) < -kPsdTol * std::max(1.0, norm))
      throw Error(errc::not_psd, "psd_sqrt: matrix is not positive semidefinite");
  }
  RealVector clamped = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * clamped.asDiagonal().toDenseMatrix().cast<Complex>() *
         eig.vectors.adjoint();
}

Pinv pinv(const ComplexMatrix& m, double rank_tol) {
  if (m.size() == 0) return {ComplexMatrix(m.cols(), m.rows()), 0};
  if (!all_finite(m)) throw Error(errc::numerical, "pinv: non-finite entries");
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double cut = rank_tol * sigma_max;

  Eigen::Index rank = 0;
  RealVector inv = RealVector::Zero(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cut && sigma(i) > 0.0) {
      inv(i) = 1.0 / sigma(i);
      ++rank;
    }
  }
  ComplexMatrix p = svd.matrixV() * inv.asDiagonal().toDenseMatrix().cast<Complex>() *
                    svd.matrixU().adjoint();
  return {std::move(p), rank};
}

}  // namespace cpkernel
