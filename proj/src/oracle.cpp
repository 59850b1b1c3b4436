#include "twirlkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace twirlkit {

double SpectralOracle::eigenvalue(int k) const {
  if (k < 0 || k >= dim()) throw BadIndexError("SpectralOracle: eigenvalue index out of range");
  return decomposition.eigenvalues(k);
}

StateVector SpectralOracle::eigenstate(int k) const {
  if (k < 0 || k >= dim()) throw BadIndexError("SpectralOracle: eigenstate index out of range");
  return state_from_amplitudes(n_qubits(), decomposition.eigenvectors.col(k));
}

SpectralOracle exact_eigenpairs(const PauliSum& h) {
  SpectralOracle out;
  out.hamiltonian = h;
  out.decomposition = hermitian_eig(to_dense(h));
  return out;
}

std::complex<double> exact_matrix_element(const SpectralOracle& o, int i, int j,
                                          const PauliString& q) {
  if (i < 0 || i >= o.dim() || j < 0 || j >= o.dim()) {
    throw BadIndexError("exact_matrix_element: eigenstate index out of range");
  }
  const ComplexMatrix dense = to_dense(q);
  if (dense.rows() != o.dim()) {
    throw DimensionMismatchError("exact_matrix_element: observable dimension mismatch");
  }
  const ComplexVector bra = o.decomposition.eigenvectors.col(j);
  const ComplexVector ket = o.decomposition.eigenvectors.col(i);
  return bra.dot(dense * ket);
}

std::vector<std::complex<double>> exact_twirl_multipliers(const SpectralOracle& o, double tau) {
  std::vector<std::complex<double>> out;
  out.reserve(o.dim());
  for (Eigen::Index k = 0; k < o.dim(); ++k) {
    const std::complex<double> phase =
        std::exp(std::complex<double>(0.0, -tau * o.decomposition.eigenvalues(k)));
    out.push_back(0.5 * (1.0 + phase));
  }
  return out;
}

ReferenceEigensystem reference_eigensystem(const ModelParams& params) {
  ReferenceEigensystem out;
  switch (params.kind) {
    case ModelKind::SingleQubit: {
      const double j = params.j;
      const double s = std::sqrt(1.0 + j * j);
      out.eigenvalues = RealVector(2);
      out.eigenvalues << -s, s;
      Eigen::Vector2d ground(1.0, -(j + s));
      Eigen::Vector2d excited(1.0, s - j);
      ground.normalize();
      excited.normalize();
      out.eigenvectors = ComplexMatrix::Zero(2, 2);
      out.eigenvectors.col(0) = ground.cast<std::complex<double>>();
      out.eigenvectors.col(1) = excited.cast<std::complex<double>>();
      return out;
    }
    case ModelKind::H2: {
      // The Hamiltonian splits into the {|00>,|11>} block, which is symmetric
      // with equal diagonal, and the {|01>,|10>} block.
      const auto& a = params.a;
      const double d_outer = a[0] + a[3];
      const double h01 = a[0] + a[1] - a[2] - a[3];
      const double h10 = a[0] - a[1] + a[2] - a[3];
      const double mean = 0.5 * (h01 + h10);
      const double half_gap = 0.5 * (h01 - h10);
      const double radius = std::sqrt(half_gap * half_gap + a[4] * a[4]);

      const double inner_low = mean - radius;
      const double inner_high = mean + radius;
      Eigen::Vector4d low_vec = Eigen::Vector4d::Zero();
      Eigen::Vector4d high_vec = Eigen::Vector4d::Zero();
      // Eigenvector of [[h01, a4],[a4, h10]] for eigenvalue lam is
      // (a4, lam - h01) in the (|01>, |10>) coordinates.
      low_vec(1) = a[4];
      low_vec(2) = inner_low - h01;
      high_vec(1) = a[4];
      high_vec(2) = inner_high - h01;
      low_vec.normalize();
      high_vec.normalize();
      if (low_vec(1) < 0) low_vec = -low_vec;
      if (high_vec(1) < 0) high_vec = -high_vec;

      const double outer_low = d_outer - std::abs(a[4]);
      const double outer_high = d_outer + std::abs(a[4]);
      Eigen::Vector4d outer_low_vec = Eigen::Vector4d::Zero();
      Eigen::Vector4d outer_high_vec = Eigen::Vector4d::Zero();
      const double r = 1.0 / std::sqrt(2.0);
      if (a[4] >= 0) {
        outer_low_vec(0) = -r;  // (-|00> + |11>)/sqrt(2)
        outer_low_vec(3) = r;
        outer_high_vec(0) = r;  // (|00> + |11>)/sqrt(2)
        outer_high_vec(3) = r;
      } else {
        outer_low_vec(0) = r;
        outer_low_vec(3) = r;
        outer_high_vec(0) = -r;
        outer_high_vec(3) = r;
      }

      std::vector<std::pair<double, Eigen::Vector4d>> pairs = {
          {inner_low, low_vec},
          {inner_high, high_vec},
          {outer_low, outer_low_vec},
          {outer_high, outer_high_vec},
      };
      std::sort(pairs.begin(), pairs.end(),
                [](const auto& lhs, const auto& rhs) { return lhs.first < rhs.first; });

      out.eigenvalues = RealVector(4);
      out.eigenvectors = ComplexMatrix::Zero(4, 4);
      for (int k = 0; k < 4; ++k) {
        out.eigenvalues(k) = pairs[k].first;
        out.eigenvectors.col(k) = pairs[k].second.cast<std::complex<double>>();
      }
      return out;
    }
  }
  throw InvalidParamsError("reference_eigensystem: unknown model kind");
}

}  // namespace twirlkit
