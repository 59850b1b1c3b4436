#pragma once

#include <Eigen/Dense>
#include <complex>

#include "twirlkit/errors.hpp"

namespace twirlkit {

/// Dense complex matrix, row-major. All register dimensions in this library
/// are at most 16 (4 qubits including an ancilla), so everything is dense.
using ComplexMatrix =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Eigendecomposition of a Hermitian matrix. Eigenvalues ascending,
/// eigenvector columns orthonormal and sign-normalized: each column is scaled
/// so its largest-magnitude component is real and positive; magnitude ties
/// (relative, 2%) resolve to the highest index.
struct HermitianEigenDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;  // column k pairs with eigenvalues[k]
};

/// Result of the nearest-unitary (polar) projection m = U·P.
struct PolarResult {
  ComplexMatrix unitary_factor;    // U = W·V' from the SVD m = W·S·V'
  ComplexMatrix hermitian_factor;  // P = V·S·V', positive semidefinite
  double deviation_norm = 0.0;     // Frobenius distance between m and U
};

/// Max-norm Hermiticity defect ||a - a'||_max.
double hermiticity_defect(const ComplexMatrix& a);

/// Max-norm unitarity defect ||a'a - I||_max.
double unitarity_defect(const ComplexMatrix& a);

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tensor product; `a` is the left (more significant) factor.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Diagonalizes a Hermitian matrix (checked to 1e-10 max-norm).
/// Throws NotHermitianError.
HermitianEigenDecomposition hermitian_eig(const ComplexMatrix& a);

/// exp(-i*tau*h) for Hermitian h, computed through the eigendecomposition
/// V·diag(exp(-i*tau*lambda))·V'. Throws NotHermitianError.
ComplexMatrix unitary_exp(const ComplexMatrix& h, double tau);

/// Frobenius-nearest unitary via SVD. Requires a square matrix with smallest
/// singular value above 1e-8; throws SingularInputError otherwise.
PolarResult polar_unitarize(const ComplexMatrix& m);

/// Applies the eigenvector sign convention in place (see
/// HermitianEigenDecomposition). Exposed for reuse by state reconstruction.
void normalize_column_signs(ComplexMatrix& vectors);

}  // namespace twirlkit
