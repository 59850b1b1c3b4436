#pragma once

#include <array>
#include <string>
#include <vector>

#include "twirlkit/matrix.hpp"
#include "twirlkit/statevector.hpp"

namespace twirlkit {

enum class PauliOp : char { I = 'I', X = 'X', Y = 'Y', Z = 'Z' };

/// Tensor product of single-qubit Pauli factors; qubit 0 is the leftmost
/// factor. Labels are concatenated letters, so "XI" is X on qubit 0 and
/// identity on qubit 1.
struct PauliString {
  std::vector<PauliOp> factors;

  PauliString() = default;
  explicit PauliString(std::vector<PauliOp> f) : factors(std::move(f)) {}

  int n_qubits() const { return static_cast<int>(factors.size()); }
  bool is_identity() const;
  std::string label() const;

  /// Parses a label such as "XZ". Throws InvalidParamsError on a bad letter.
  static PauliString parse(const std::string& label);

  bool operator==(const PauliString& other) const { return factors == other.factors; }
};

/// Real-weighted sum of Pauli strings over a fixed register width. Duplicate
/// strings are merged on construction; Hermitian by construction.
struct PauliSum {
  struct Term {
    double coefficient = 0.0;
    PauliString string;
  };

  int n_qubits = 0;
  std::vector<Term> terms;

  PauliSum() = default;
  PauliSum(int n_qubits, std::vector<Term> terms);

  PauliSum& add(double coefficient, const PauliString& string);
};

enum class ModelKind { SingleQubit, H2 };

/// Parameters for the two built-in models: the one-qubit X + J*Z family and
/// the two-qubit molecular Hamiltonian
///   a0*II + a1*ZI + a2*IZ + a3*ZZ + a4*XX.
struct ModelParams {
  ModelKind kind = ModelKind::SingleQubit;
  double j = 1.0;                       // SingleQubit only
  std::array<double, 5> a = kH2Defaults;  // H2 only, Hartree units

  static constexpr std::array<double, 5> kH2Defaults = {-1.04319, 0.42045, -0.42045, 0.01150,
                                                        0.179005};

  static ModelParams single_qubit(double j);
  static ModelParams h2();
  static ModelParams h2_with(const std::array<double, 5>& a);
};

/// Builds the Hamiltonian for the given model. Throws InvalidParamsError.
PauliSum build_model(const ModelParams& params);

ComplexMatrix to_dense(const PauliString& s);

/// Dense form, qubit 0 leftmost tensor factor. Throws TooManyQubitsError
/// above 4 qubits.
ComplexMatrix to_dense(const PauliSum& s);

/// <psi| s |psi>. The imaginary part is checked to be below 1e-12.
double exact_expectation(const PauliString& s, const StateVector& psi);
double exact_expectation(const PauliSum& s, const StateVector& psi);

/// <psi| s^2 |psi> - <psi| s |psi>^2, used as the eigenstate convergence
/// objective.
double energy_variance(const PauliSum& s, const StateVector& psi);

}  // namespace twirlkit
