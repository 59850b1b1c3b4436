#pragma once

#include <complex>
#include <vector>

#include "twirlkit/pauli.hpp"

namespace twirlkit {

/// Exact spectral data for a Pauli-sum Hamiltonian, obtained by dense
/// diagonalization. Serves as the ground truth the sampling pipeline is
/// compared against.
struct SpectralOracle {
  PauliSum hamiltonian;
  HermitianEigenDecomposition decomposition;

  int n_qubits() const { return hamiltonian.n_qubits; }
  Eigen::Index dim() const { return decomposition.eigenvalues.size(); }

  double eigenvalue(int k) const;
  StateVector eigenstate(int k) const;
};

/// Dense diagonalization with the library sign convention. Up to 4 qubits.
SpectralOracle exact_eigenpairs(const PauliSum& h);

/// <E_j| q |E_i> by direct dense products. Throws BadIndexError.
std::complex<double> exact_matrix_element(const SpectralOracle& o, int i, int j,
                                          const PauliString& q);

/// Per-eigenstate amplitude multipliers (1 + exp(-i*tau*E_k))/2 of one
/// ancilla-filter step.
std::vector<std::complex<double>> exact_twirl_multipliers(const SpectralOracle& o, double tau);

/// Closed-form eigenpairs for the built-in models, laid out the way the
/// textbook derivation writes them (the single-qubit family keeps a positive
/// first component; the molecular model keeps the symmetric-block layout
/// (-|00>+|11>)/sqrt(2), (|00>+|11>)/sqrt(2) for the two middle states).
/// Used by the "algebraic" unitary source so that reported matrix-element
/// signs follow the conventional layout.
struct ReferenceEigensystem {
  RealVector eigenvalues;   // ascending
  ComplexMatrix eigenvectors;  // columns, real entries
};

ReferenceEigensystem reference_eigensystem(const ModelParams& params);

}  // namespace twirlkit
