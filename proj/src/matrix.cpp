#include "twirlkit/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace twirlkit {

namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kSingularTol = 1e-8;

void require_square(const ComplexMatrix& a, const char* who) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DimensionMismatchError(std::string(who) + ": expected a nonempty square matrix, got " +
                                 std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

void require_hermitian(const ComplexMatrix& a, const char* who) {
  require_square(a, who);
  const double defect = hermiticity_defect(a);
  if (defect > kHermitianTol) {
    throw NotHermitianError(std::string(who) + ": input is not Hermitian (max defect " +
                            std::to_string(defect) + ")");
  }
}

}  // namespace

double hermiticity_defect(const ComplexMatrix& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const ComplexMatrix& a) {
  ComplexMatrix gram = a.adjoint() * a;
  gram -= ComplexMatrix::Identity(a.cols(), a.cols());
  return gram.cwiseAbs().maxCoeff();
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).norm();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void normalize_column_signs(ComplexMatrix& vectors) {
  // Largest-magnitude component made real and positive; among components
  // within 2% (relative) of the maximum, the highest index is the pivot.
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    double max_mag = 0.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      max_mag = std::max(max_mag, std::abs(vectors(r, c)));
    }
    if (max_mag == 0.0) continue;
    Eigen::Index pivot = 0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      if (std::abs(vectors(r, c)) >= 0.98 * max_mag) pivot = r;
    }
    const std::complex<double> z = vectors(pivot, c);
    const std::complex<double> phase = z / std::abs(z);
    vectors.col(c) /= phase;
  }
}

HermitianEigenDecomposition hermitian_eig(const ComplexMatrix& a) {
  require_hermitian(a, "hermitian_eig");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a);
  if (solver.info() != Eigen::Success) {
    throw Error("hermitian_eig: eigensolver failed to converge");
  }
  HermitianEigenDecomposition out;
  out.eigenvalues = solver.eigenvalues();  // ascending by Eigen contract
  out.eigenvectors = solver.eigenvectors();
  normalize_column_signs(out.eigenvectors);
  return out;
}

ComplexMatrix unitary_exp(const ComplexMatrix& h, double tau) {
  require_hermitian(h, "unitary_exp");
  const HermitianEigenDecomposition eig = hermitian_eig(h);
  const Eigen::Index n = h.rows();
  ComplexVector phases(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    phases(k) = std::exp(std::complex<double>(0.0, -tau * eig.eigenvalues(k)));
  }
  return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

PolarResult polar_unitarize(const ComplexMatrix& m) {
  require_square(m, "polar_unitarize");
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& sigma = svd.singularValues();
  if (sigma(sigma.size() - 1) <= kSingularTol) {
    throw SingularInputError("polar_unitarize: smallest singular value " +
                             std::to_string(sigma(sigma.size() - 1)) + " is below 1e-8");
  }
  PolarResult out;
  out.unitary_factor = svd.matrixU() * svd.matrixV().adjoint();
  out.hermitian_factor = svd.matrixV() * sigma.asDiagonal() * svd.matrixV().adjoint();
  out.deviation_norm = frobenius_distance(m, out.unitary_factor);
  return out;
}

}  // namespace twirlkit
