#include "twirlkit/statevector.hpp"

#include <algorithm>
#include <cmath>

namespace twirlkit {

namespace {

constexpr double kNormTol = 1e-10;
constexpr double kUnitaryTol = 1e-10;

void require_qubit_count(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw BadTargetsError("state must hold between 1 and " + std::to_string(kMaxQubits) +
                          " qubits, got " + std::to_string(n_qubits));
  }
}

void require_qubit(const StateVector& psi, int qubit, const char* who) {
  if (qubit < 0 || qubit >= psi.n_qubits) {
    throw BadTargetsError(std::string(who) + ": qubit " + std::to_string(qubit) +
                          " out of range for a " + std::to_string(psi.n_qubits) +
                          "-qubit register");
  }
}

// Bit position of a qubit inside an amplitude index (qubit 0 = MSB).
inline unsigned bit_of(const StateVector& psi, int qubit) {
  return static_cast<unsigned>(psi.n_qubits - 1 - qubit);
}

}  // namespace

StateVector basis_state(int n_qubits, unsigned index) {
  require_qubit_count(n_qubits);
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  if (index >= static_cast<unsigned>(dim)) {
    throw BadTargetsError("basis_state: index out of range");
  }
  StateVector psi;
  psi.n_qubits = n_qubits;
  psi.amplitudes = ComplexVector::Zero(dim);
  psi.amplitudes(index) = 1.0;
  return psi;
}

StateVector state_from_amplitudes(int n_qubits, const ComplexVector& amplitudes) {
  require_qubit_count(n_qubits);
  if (amplitudes.size() != (Eigen::Index(1) << n_qubits)) {
    throw DimensionMismatchError("state_from_amplitudes: expected 2^n amplitudes");
  }
  const double norm = amplitudes.norm();
  if (std::abs(norm * norm - 1.0) > kNormTol) {
    throw DimensionMismatchError("state_from_amplitudes: squared norm " +
                                 std::to_string(norm * norm) + " is not 1");
  }
  StateVector psi;
  psi.n_qubits = n_qubits;
  psi.amplitudes = amplitudes / norm;
  return psi;
}

StateVector apply_unitary(const StateVector& psi, const ComplexMatrix& u,
                          const std::vector<int>& targets) {
  if (targets.empty()) throw BadTargetsError("apply_unitary: no target qubits");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    require_qubit(psi, targets[i], "apply_unitary");
    for (std::size_t j = i + 1; j < targets.size(); ++j) {
      if (targets[i] == targets[j]) {
        throw BadTargetsError("apply_unitary: duplicate target qubit " +
                              std::to_string(targets[i]));
      }
    }
  }
  const int k = static_cast<int>(targets.size());
  const Eigen::Index block = Eigen::Index(1) << k;
  if (u.rows() != block || u.cols() != block) {
    throw DimensionMismatchError("apply_unitary: matrix dimension does not match target count");
  }
  if (unitarity_defect(u) > kUnitaryTol) {
    throw NotUnitaryError("apply_unitary: matrix is not unitary (defect " +
                          std::to_string(unitarity_defect(u)) + ")");
  }

  StateVector out = psi;
  const Eigen::Index dim = psi.dim();
  std::vector<unsigned> target_bits(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) target_bits[i] = bit_of(psi, targets[i]);
  unsigned target_mask = 0;
  for (unsigned b : target_bits) target_mask |= 1u << b;

  ComplexVector scratch(block);
  for (Eigen::Index base = 0; base < dim; ++base) {
    if (static_cast<unsigned>(base) & target_mask) continue;  // visit each coset once
    for (Eigen::Index r = 0; r < block; ++r) {
      Eigen::Index idx = base;
      for (int i = 0; i < k; ++i) {
        if ((r >> (k - 1 - i)) & 1) idx |= Eigen::Index(1) << target_bits[i];
      }
      scratch(r) = psi.amplitudes(idx);
    }
    ComplexVector transformed = u * scratch;
    for (Eigen::Index r = 0; r < block; ++r) {
      Eigen::Index idx = base;
      for (int i = 0; i < k; ++i) {
        if ((r >> (k - 1 - i)) & 1) idx |= Eigen::Index(1) << target_bits[i];
      }
      out.amplitudes(idx) = transformed(r);
    }
  }
  return out;
}

StateVector apply_controlled(const StateVector& psi, const ComplexMatrix& u, int control,
                             const std::vector<int>& targets) {
  require_qubit(psi, control, "apply_controlled");
  for (int t : targets) {
    if (t == control) {
      throw ControlOverlapError("apply_controlled: control qubit " + std::to_string(control) +
                                " appears among the targets");
    }
  }
  // Embed as a (k+1)-qubit block unitary [I 0; 0 u] with the control as the
  // most significant slot, then reuse the generic path.
  const Eigen::Index block = u.rows();
  ComplexMatrix controlled = ComplexMatrix::Identity(2 * block, 2 * block);
  controlled.block(block, block, block, block) = u;
  std::vector<int> all_targets;
  all_targets.reserve(targets.size() + 1);
  all_targets.push_back(control);
  all_targets.insert(all_targets.end(), targets.begin(), targets.end());
  return apply_unitary(psi, controlled, all_targets);
}

StateVector phase_s(const StateVector& psi, int qubit) {
  require_qubit(psi, qubit, "phase_s");
  StateVector out = psi;
  const unsigned bit = bit_of(psi, qubit);
  for (Eigen::Index i = 0; i < psi.dim(); ++i) {
    if ((static_cast<unsigned>(i) >> bit) & 1) {
      out.amplitudes(i) *= std::complex<double>(0.0, 1.0);
    }
  }
  return out;
}

StateVector phase_rotation(const StateVector& psi, int qubit, double theta) {
  require_qubit(psi, qubit, "phase_rotation");
  StateVector out = psi;
  const unsigned bit = bit_of(psi, qubit);
  const std::complex<double> phase = std::exp(std::complex<double>(0.0, theta));
  for (Eigen::Index i = 0; i < psi.dim(); ++i) {
    if ((static_cast<unsigned>(i) >> bit) & 1) out.amplitudes(i) *= phase;
  }
  return out;
}

std::pair<StateVector, double> project_postselect(const StateVector& psi, int qubit, int outcome) {
  require_qubit(psi, qubit, "project_postselect");
  if (outcome != 0 && outcome != 1) {
    throw BadTargetsError("project_postselect: outcome must be 0 or 1");
  }
  const unsigned bit = bit_of(psi, qubit);
  double probability = 0.0;
  for (Eigen::Index i = 0; i < psi.dim(); ++i) {
    if (((static_cast<unsigned>(i) >> bit) & 1) == static_cast<unsigned>(outcome)) {
      probability += std::norm(psi.amplitudes(i));
    }
  }
  if (probability < 1e-14) {
    throw ZeroProbabilityError("project_postselect: outcome " + std::to_string(outcome) +
                               " on qubit " + std::to_string(qubit) + " has probability " +
                               std::to_string(probability));
  }
  StateVector out = psi;
  const double scale = 1.0 / std::sqrt(probability);
  for (Eigen::Index i = 0; i < psi.dim(); ++i) {
    if (((static_cast<unsigned>(i) >> bit) & 1) == static_cast<unsigned>(outcome)) {
      out.amplitudes(i) *= scale;
    } else {
      out.amplitudes(i) = 0.0;
    }
  }
  return {out, probability};
}

StateVector attach_ancilla(const StateVector& psi) {
  require_qubit_count(psi.n_qubits + 1);
  StateVector out;
  out.n_qubits = psi.n_qubits + 1;
  out.amplitudes = ComplexVector::Zero(psi.dim() * 2);
  for (Eigen::Index i = 0; i < psi.dim(); ++i) out.amplitudes(2 * i) = psi.amplitudes(i);
  return out;
}

StateVector discard_qubit(const StateVector& psi, int qubit, int outcome) {
  require_qubit(psi, qubit, "discard_qubit");
  if (psi.n_qubits == 1) throw BadTargetsError("discard_qubit: cannot discard the last qubit");
  if (outcome != 0 && outcome != 1) {
    throw BadTargetsError("discard_qubit: outcome must be 0 or 1");
  }
  const unsigned bit = bit_of(psi, qubit);
  StateVector out;
  out.n_qubits = psi.n_qubits - 1;
  out.amplitudes = ComplexVector::Zero(psi.dim() / 2);
  for (Eigen::Index i = 0; i < psi.dim(); ++i) {
    const unsigned ui = static_cast<unsigned>(i);
    if (((ui >> bit) & 1) != static_cast<unsigned>(outcome)) {
      if (std::abs(psi.amplitudes(i)) > 1e-12) {
        throw BadTargetsError("discard_qubit: qubit " + std::to_string(qubit) +
                              " is not in the |" + std::to_string(outcome) + "> product state");
      }
      continue;
    }
    const unsigned low = ui & ((1u << bit) - 1u);
    const unsigned high = (ui >> (bit + 1)) << bit;
    out.amplitudes(high | low) = psi.amplitudes(i);
  }
  return out;
}

std::complex<double> overlap(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw DimensionMismatchError("overlap: dimension mismatch");
  return a.amplitudes.dot(b.amplitudes);  // Eigen dot conjugates the left side
}

}  // namespace twirlkit
