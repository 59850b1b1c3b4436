#include <doctest.h>

#include <cmath>
#include <random>

#include "twirlkit/oracle.hpp"
#include "twirlkit/statevector.hpp"

using namespace twirlkit;

namespace {

ComplexMatrix hadamard() {
  ComplexMatrix h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

StateVector random_state(int n_qubits, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexVector amps(Eigen::Index(1) << n_qubits);
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    amps(i) = std::complex<double>(gauss(rng), gauss(rng));
  }
  amps.normalize();
  return state_from_amplitudes(n_qubits, amps);
}

ComplexMatrix random_unitary(int dim, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m(r, c) = std::complex<double>(gauss(rng), gauss(rng));
  }
  return polar_unitarize(m).unitary_factor;
}

}  // namespace

TEST_CASE("hadamard on |0> gives the plus state") {
  const StateVector psi = apply_unitary(basis_state(1, 0), hadamard(), {0});
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(psi.amplitudes(0) - r) < 1e-15);
  CHECK(std::abs(psi.amplitudes(1) - r) < 1e-15);
}

TEST_CASE("the reference excitation matrix swaps the one-qubit eigenstates") {
  const ReferenceEigensystem ref = reference_eigensystem(ModelParams::single_qubit(1.0));
  ComplexMatrix z(2, 2);
  z << 1, 0, 0, -1;
  const ComplexMatrix u = (z * hadamard() * z).eval();
  const StateVector ground = state_from_amplitudes(1, ref.eigenvectors.col(0));
  const StateVector mapped = apply_unitary(ground, u, {0});
  const std::complex<double> ov =
      overlap(state_from_amplitudes(1, ref.eigenvectors.col(1)), mapped);
  CHECK(std::abs(std::abs(ov) - 1.0) < 1e-12);
}

TEST_CASE("apply_unitary matches the dense kron-and-multiply oracle") {
  std::mt19937 rng(0x5eed);
  const StateVector psi = random_state(3, rng);
  const ComplexMatrix u = random_unitary(4, rng);

  // Apply on qubits (0, 2): build the full operator by hand with an identity
  // on qubit 1 and a permutation of the tensor slots.
  const StateVector fast = apply_unitary(psi, u, {0, 2});

  ComplexMatrix full = ComplexMatrix::Zero(8, 8);
  for (int r = 0; r < 8; ++r) {
    const int r0 = (r >> 2) & 1, r1 = (r >> 1) & 1, r2 = r & 1;
    for (int c = 0; c < 8; ++c) {
      const int c0 = (c >> 2) & 1, c1 = (c >> 1) & 1, c2 = c & 1;
      if (r1 != c1) continue;
      full(r, c) = u(r0 * 2 + r2, c0 * 2 + c2);
    }
  }
  const ComplexVector expected = full * psi.amplitudes;
  CHECK((fast.amplitudes - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(fast.norm() - 1.0) < 1e-12);
}

TEST_CASE("apply_unitary validates inputs") {
  const StateVector psi = basis_state(2, 0);
  ComplexMatrix not_unitary(2, 2);
  not_unitary << 1, 1, 0, 1;
  CHECK_THROWS_AS(apply_unitary(psi, not_unitary, {0}), NotUnitaryError);
  CHECK_THROWS_AS(apply_unitary(psi, hadamard(), {3}), BadTargetsError);
  CHECK_THROWS_AS(apply_unitary(psi, hadamard(), {0, 0}), BadTargetsError);
  CHECK_THROWS_AS(apply_unitary(psi, hadamard(), {}), BadTargetsError);
}

TEST_CASE("apply_controlled acts only on the control-1 subspace") {
  // control in |0>: nothing happens
  const StateVector zero = basis_state(2, 0);
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  const StateVector unchanged = apply_controlled(zero, x, 1, {0});
  CHECK((unchanged.amplitudes - zero.amplitudes).cwiseAbs().maxCoeff() < 1e-15);

  // (|0> + |1>)/sqrt(2) on the control, ground on the target: the excited
  // component appears exactly on the control-1 branch.
  const ReferenceEigensystem ref = reference_eigensystem(ModelParams::single_qubit(1.0));
  ComplexMatrix z(2, 2);
  z << 1, 0, 0, -1;
  const ComplexMatrix u = (z * hadamard() * z).eval();
  StateVector psi = state_from_amplitudes(1, ref.eigenvectors.col(0));
  psi = attach_ancilla(psi);
  psi = apply_unitary(psi, hadamard(), {1});
  psi = apply_controlled(psi, u, 1, {0});
  const double r = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < 2; ++k) {
    CHECK(std::abs(psi.amplitudes(2 * k) - r * ref.eigenvectors(k, 0)) < 1e-12);
    CHECK(std::abs(psi.amplitudes(2 * k + 1) - r * ref.eigenvectors(k, 1)) < 1e-12);
  }

  CHECK_THROWS_AS(apply_controlled(zero, x, 0, {0}), ControlOverlapError);
}

TEST_CASE("controlled propagator with tau zero is the identity") {
  const PauliSum h = build_model(ModelParams::h2());
  const ComplexMatrix u = unitary_exp(to_dense(h), 0.0);
  std::mt19937 rng(0x77);
  const StateVector psi = random_state(3, rng);
  const StateVector out = apply_controlled(psi, u, 2, {0, 1});
  CHECK((out.amplitudes - psi.amplitudes).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("phase_s behavior") {
  std::mt19937 rng(0x99);
  const StateVector psi = random_state(1, rng);
  const StateVector once = phase_s(psi, 0);
  CHECK(std::abs(once.amplitudes(0) - psi.amplitudes(0)) < 1e-15);
  CHECK(std::abs(once.amplitudes(1) - std::complex<double>(0, 1) * psi.amplitudes(1)) < 1e-15);

  // S twice equals Z.
  const StateVector twice = phase_s(once, 0);
  CHECK(std::abs(twice.amplitudes(0) - psi.amplitudes(0)) < 1e-15);
  CHECK(std::abs(twice.amplitudes(1) + psi.amplitudes(1)) < 1e-15);

  const StateVector zero = basis_state(1, 0);
  const StateVector same = phase_s(zero, 0);
  CHECK((same.amplitudes - zero.amplitudes).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("project_postselect on the plus state") {
  const StateVector plus = apply_unitary(basis_state(1, 0), hadamard(), {0});
  const StateVector two = attach_ancilla(plus);
  auto [projected, probability] = project_postselect(two, 0, 0);
  CHECK(probability == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(projected.amplitudes(0) - 1.0) < 1e-12);
}

TEST_CASE("project_postselect probabilities sum to one") {
  std::mt19937 rng(0xbeef);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector psi = random_state(3, rng);
    for (int q = 0; q < 3; ++q) {
      double total = 0.0;
      for (int outcome : {0, 1}) {
        try {
          total += project_postselect(psi, q, outcome).second;
        } catch (const ZeroProbabilityError&) {
        }
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("project_postselect rejects impossible outcomes") {
  const StateVector zero = basis_state(2, 0);
  CHECK_THROWS_AS(project_postselect(zero, 0, 1), ZeroProbabilityError);
}

TEST_CASE("norm is preserved across long gate sequences") {
  std::mt19937 rng(0x1234);
  StateVector psi = random_state(4, rng);
  for (int step = 0; step < 25; ++step) {
    const int q = static_cast<int>(rng() % 4);
    psi = apply_unitary(psi, random_unitary(2, rng), {q});
    const int control = static_cast<int>(rng() % 4);
    const int target = (control + 1 + static_cast<int>(rng() % 3)) % 4;
    psi = apply_controlled(psi, random_unitary(2, rng), control, {target});
    psi = phase_s(psi, static_cast<int>(rng() % 4));
  }
  CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
}

TEST_CASE("discard_qubit requires a product state") {
  const StateVector bell = [] {
    ComplexVector amps(4);
    amps << 1.0 / std::sqrt(2.0), 0, 0, 1.0 / std::sqrt(2.0);
    return state_from_amplitudes(2, amps);
  }();
  CHECK_THROWS_AS(discard_qubit(bell, 1), BadTargetsError);

  const StateVector product = attach_ancilla(basis_state(1, 1));
  const StateVector reduced = discard_qubit(product, 1);
  CHECK(reduced.n_qubits == 1);
  CHECK(std::abs(reduced.amplitudes(1) - 1.0) < 1e-15);
}

TEST_CASE("phase_rotation generalizes the quarter phase") {
  std::mt19937 rng(0x424242);
  const StateVector psi = random_state(2, rng);
  const StateVector quarter = phase_rotation(psi, 1, M_PI / 2.0);
  const StateVector via_s = phase_s(psi, 1);
  CHECK((quarter.amplitudes - via_s.amplitudes).cwiseAbs().maxCoeff() < 1e-15);

  const StateVector full = phase_rotation(psi, 0, 2.0 * M_PI);
  CHECK((full.amplitudes - psi.amplitudes).cwiseAbs().maxCoeff() < 1e-12);
}
