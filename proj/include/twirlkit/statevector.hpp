#pragma once

#include <utility>
#include <vector>

#include "twirlkit/matrix.hpp"

namespace twirlkit {

/// Normalized amplitude vector over up to 4 qubits. Qubit 0 is the leftmost
/// ket and the most significant index bit, i.e. the basis order for two
/// qubits is |00>, |01>, |10>, |11>. Values are immutable snapshots: every
/// operation returns a new state.
struct StateVector {
  int n_qubits = 0;
  ComplexVector amplitudes;

  Eigen::Index dim() const { return amplitudes.size(); }
  double norm() const { return amplitudes.norm(); }
};

constexpr int kMaxQubits = 4;

/// |b_0 b_1 ... b_{n-1}> with the given index bits, e.g. basis_state(2, 2) = |10>.
StateVector basis_state(int n_qubits, unsigned index);

/// Normalization is checked (1e-10) and the vector re-normalized exactly.
StateVector state_from_amplitudes(int n_qubits, const ComplexVector& amplitudes);

/// Applies a 2^k x 2^k unitary to the listed qubits; targets[0] is the
/// most significant slot of u's index. Throws NotUnitaryError / BadTargetsError.
StateVector apply_unitary(const StateVector& psi, const ComplexMatrix& u,
                          const std::vector<int>& targets);

/// Identity on the control-0 subspace, u on the control-1 subspace.
StateVector apply_controlled(const StateVector& psi, const ComplexMatrix& u, int control,
                             const std::vector<int>& targets);

/// Phase transformation |0> -> |0>, |1> -> i|1> on one qubit.
StateVector phase_s(const StateVector& psi, int qubit);

/// diag(1, exp(i*theta)) on one qubit.
StateVector phase_rotation(const StateVector& psi, int qubit, double theta);

/// Projects one qubit onto the given outcome and renormalizes. Returns the
/// projected state and the pre-projection probability of that outcome.
/// Throws ZeroProbabilityError below 1e-14.
std::pair<StateVector, double> project_postselect(const StateVector& psi, int qubit, int outcome);

/// Appends a fresh |0> qubit at the highest index (least significant bit).
StateVector attach_ancilla(const StateVector& psi);

/// Removes a qubit that is in the |outcome> product state (amplitude on the
/// complementary branch below 1e-12); used after post-selection.
StateVector discard_qubit(const StateVector& psi, int qubit, int outcome = 0);

/// Inner product <a|b>.
std::complex<double> overlap(const StateVector& a, const StateVector& b);

}  // namespace twirlkit
