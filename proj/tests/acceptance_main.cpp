// Acceptance suite: runs every shipped accuracy criterion at its stated
// tolerance and prints one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "reference_data.hpp"
#include "twirlkit/experiment.hpp"

using namespace twirlkit;

namespace {

struct Reporter {
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void require_close(double actual, double expected, double tolerance, const std::string& what) {
    if (!(std::abs(actual - expected) <= tolerance)) {
      char buffer[256];
      std::snprintf(buffer, sizeof(buffer), "%s: |%.8g - %.8g| > %.2g", what.c_str(), actual,
                    expected, tolerance);
      failures.push_back(buffer);
    }
  }
};

ComplexMatrix closed_form_swap_j1() {
  ComplexMatrix z(2, 2), h(2, 2);
  z << 1, 0, 0, -1;
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  return (z * h * z).eval();
}

double circuit_difference(CircuitKind kind, const StateVector& ground,
                          const ExcitationUnitary& u, const std::string& label,
                          std::optional<ShotPlan> plan = std::nullopt) {
  SuperpositionRun run{kind, ground, u, PauliString::parse(label), plan};
  return run_superposition(run).difference;
}

StateVector reference_ground_state(const ModelParams& model) {
  const ReferenceEigensystem ref = reference_eigensystem(model);
  return state_from_amplitudes(model.kind == ModelKind::H2 ? 2 : 1, ref.eigenvectors.col(0));
}

// ---------------------------------------------------------------------------
// 1. Spectral ground truth for the molecular model.
void criterion_oracle_exactness(Reporter& rep) {
  const PauliSum h = build_model(ModelParams::h2());
  const SpectralOracle oracle = exact_eigenpairs(h);
  const ComplexMatrix dense = to_dense(h);

  for (int k = 0; k < 4; ++k) {
    const ComplexVector v = oracle.decomposition.eigenvectors.col(k);
    rep.require((dense * v - oracle.eigenvalue(k) * v).norm() < 1e-12,
                "eigenpair residual " + std::to_string(k));
  }

  const double r = 1.0 / std::sqrt(2.0);
  const ComplexMatrix& vecs = oracle.decomposition.eigenvectors;
  rep.require_close(vecs(0, 1).real(), -r, 1e-12, "second state |00> component");
  rep.require_close(vecs(3, 1).real(), r, 1e-12, "second state |11> component");
  rep.require_close(vecs(0, 2).real(), r, 1e-12, "third state |00> component");
  rep.require_close(vecs(3, 2).real(), r, 1e-12, "third state |11> component");
  rep.require(std::abs(vecs(1, 1)) < 1e-12 && std::abs(vecs(2, 1)) < 1e-12,
              "second state support");

  rep.require_close(std::abs(vecs(1, 0)), refdata::h2_small_component, 1e-4,
                    "ground small component");
  rep.require_close(std::abs(vecs(2, 0)), refdata::h2_large_component, 1e-4,
                    "ground large component");
  rep.require_close(std::abs(vecs(1, 3)), refdata::h2_large_component, 1e-4,
                    "top state large component");
  rep.require_close(std::abs(vecs(2, 3)), refdata::h2_small_component, 1e-4,
                    "top state small component");

  const auto quoted = refdata::h2_quoted_eigenvalues();
  for (int k = 0; k < 4; ++k) {
    rep.require_close(oracle.eigenvalue(k), quoted[k], 2.5e-2,
                      "quoted eigenvalue " + std::to_string(k));
  }
  auto flipped = ModelParams::kH2Defaults;
  flipped[3] = -flipped[3];
  const SpectralOracle alt = exact_eigenpairs(build_model(ModelParams::h2_with(flipped)));
  for (int k = 0; k < 4; ++k) {
    rep.require_close(alt.eigenvalue(k), quoted[k], 1e-3,
                      "flipped-coupling eigenvalue " + std::to_string(k));
  }
}

// ---------------------------------------------------------------------------
// 2. One-qubit interference circuits with the closed-form swap matrix.
void criterion_j1_circuits(Reporter& rep) {
  const ModelParams model = ModelParams::single_qubit(1.0);
  ExcitationUnitary u;
  u.matrix = closed_form_swap_j1();
  const StateVector ground = reference_ground_state(model);
  const double root2 = std::sqrt(2.0);

  rep.require_close(circuit_difference(CircuitKind::RealPart, ground, u, "X"), -root2, 1e-10,
                    "exact real X");
  rep.require_close(circuit_difference(CircuitKind::RealPart, ground, u, "Z"), root2, 1e-10,
                    "exact real Z");
  rep.require_close(circuit_difference(CircuitKind::RealPart, ground, u, "Y"), 0.0, 1e-10,
                    "exact real Y");
  rep.require_close(circuit_difference(CircuitKind::ImagPart, ground, u, "X"), 0.0, 1e-10,
                    "exact imag X");
  rep.require_close(circuit_difference(CircuitKind::ImagPart, ground, u, "Z"), 0.0, 1e-10,
                    "exact imag Z");
  rep.require_close(circuit_difference(CircuitKind::ImagPart, ground, u, "Y"), 2.0, 1e-10,
                    "exact imag Y");

  const std::uint64_t shots = 1'000'000;
  const double expected_real[] = {-root2, root2, 0.0};
  const double expected_imag[] = {0.0, 0.0, 2.0};
  const char* labels[] = {"X", "Z", "Y"};
  for (int k = 0; k < 3; ++k) {
    rep.require_close(circuit_difference(CircuitKind::RealPart, ground, u, labels[k],
                                         ShotPlan{shots, 1000 + std::uint64_t(k), 4}),
                      expected_real[k], 5e-3, std::string("sampled real ") + labels[k]);
    rep.require_close(circuit_difference(CircuitKind::ImagPart, ground, u, labels[k],
                                         ShotPlan{shots, 2000 + std::uint64_t(k), 4}),
                      expected_imag[k], 5e-3, std::string("sampled imag ") + labels[k]);
  }
}

// ---------------------------------------------------------------------------
// 3. J = 2 circuits driven by the stored fitted matrix.
void criterion_j2_circuits(Reporter& rep) {
  const ModelParams model = ModelParams::single_qubit(2.0);
  const ExcitationUnitary u =
      pinned_excitation_unitary(fitted_unitary_j2(), UnitarySource::Simulated);
  const StateVector ground = reference_ground_state(model);
  const double root5 = std::sqrt(5.0);

  const double expected_real[] = {-4.0 / root5, 2.0 / root5, 0.0};
  const double expected_imag[] = {0.0, 0.0, 2.0};
  const char* labels[] = {"X", "Z", "Y"};
  for (int k = 0; k < 3; ++k) {
    rep.require_close(circuit_difference(CircuitKind::RealPart, ground, u, labels[k]),
                      expected_real[k], 1e-3, std::string("exact real ") + labels[k]);
    rep.require_close(circuit_difference(CircuitKind::ImagPart, ground, u, labels[k]),
                      expected_imag[k], 1e-3, std::string("exact imag ") + labels[k]);
    rep.require_close(circuit_difference(CircuitKind::RealPart, ground, u, labels[k],
                                         ShotPlan{1'000'000, 3000 + std::uint64_t(k), 4}),
                      expected_real[k], 6e-3, std::string("sampled real ") + labels[k]);
    rep.require_close(circuit_difference(CircuitKind::ImagPart, ground, u, labels[k],
                                         ShotPlan{1'000'000, 4000 + std::uint64_t(k), 4}),
                      expected_imag[k], 6e-3, std::string("sampled imag ") + labels[k]);
  }
}

// ---------------------------------------------------------------------------
// 4. Ancilla-filter extraction of both ground states.
void criterion_twirl_extraction(Reporter& rep) {
  {
    const PauliSum h = build_model(ModelParams::single_qubit(1.0));
    const TwirlOutcome out =
        run_schedule(basis_state(1, 1), h, TwirlSchedule::adaptive(6, ShiftPolicy::BiasLow));
    rep.require(out.variance_history.back() < 1e-4, "one-qubit filter variance");
    rep.require_close(out.energy_history.back(), -std::sqrt(2.0), 1e-3, "one-qubit energy");
  }
  {
    const PauliSum h = build_model(ModelParams::h2());
    const SpectralOracle oracle = exact_eigenpairs(h);
    const TwirlOutcome out =
        run_schedule(basis_state(2, 2), h, TwirlSchedule::adaptive(6, ShiftPolicy::BiasLow));
    rep.require(out.variance_history.back() < 1e-4, "molecular filter variance");
    rep.require_close(out.energy_history.back(), oracle.eigenvalue(0), 1e-3, "molecular energy");
  }
}

// ---------------------------------------------------------------------------
// 5. Real-state reconstruction fidelity.
void criterion_reconstruction(Reporter& rep) {
  const auto observations = refdata::h2_diagonal_observations();
  const auto fitted = refdata::h2_fitted_states();
  for (int state = 0; state < 4; ++state) {
    ExpectationDataset dataset;
    for (int k = 0; k < 6; ++k) {
      dataset.entries.push_back({PauliString::parse(refdata::h2_diagonal_labels()[k]),
                                 observations[state][k], 10'000'000});
    }
    const RealStateEstimate estimate = reconstruct_real_state(dataset, 4);
    const double overlap_value = std::abs(estimate.amplitudes.dot(fitted[state]));
    std::string note;
    if (overlap_value < 0.999) {
      // Context for the one known-bad row: its two cross observables repeat
      // the same number where the stored vector implies opposite signs, so
      // no minimizer of the row as stored can match the stored vector.
      const StateVector stored =
          state_from_amplitudes(2, fitted[state].normalized().cast<std::complex<double>>().eval());
      double stored_rms = 0.0;
      for (int k = 0; k < 6; ++k) {
        const double model_value =
            exact_expectation(PauliString::parse(refdata::h2_diagonal_labels()[k]), stored);
        stored_rms += std::pow(model_value - observations[state][k], 2);
      }
      stored_rms = std::sqrt(stored_rms / 6.0);
      char buffer[256];
      std::snprintf(buffer, sizeof(buffer),
                    " (fit rms %.4g beats the stored vector's rms %.4g on this row; the row's"
                    " duplicated cross entry contradicts the stored vector)",
                    estimate.residual, stored_rms);
      note = buffer;
    }
    rep.require(overlap_value >= 0.999, "stored-data overlap, state " + std::to_string(state) +
                                            " = " + std::to_string(overlap_value) + note);
  }

  std::mt19937 rng(0xacce);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::vector<std::string> pair_labels = {"Z", "X"};
  const std::vector<std::string> quad_labels = {"ZZ", "ZI", "IZ", "XX", "ZX", "XZ"};
  int recovered = 0;
  for (int dim : {2, 4}) {
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd v(dim);
      for (int i = 0; i < dim; ++i) v(i) = gauss(rng);
      v.normalize();
      ExpectationDataset dataset;
      const StateVector psi = state_from_amplitudes(dim == 2 ? 1 : 2,
                                                    v.cast<std::complex<double>>());
      for (const std::string& label : dim == 2 ? pair_labels : quad_labels) {
        dataset.entries.push_back(
            {PauliString::parse(label), exact_expectation(PauliString::parse(label), psi), 0});
      }
      const RealStateEstimate estimate = reconstruct_real_state(dataset, dim);
      if (std::abs(estimate.amplitudes.dot(v)) >= 0.9999) ++recovered;
    }
  }
  rep.require(recovered == 200, "noiseless recovery count " + std::to_string(recovered) +
                                    " of 200");
}

// ---------------------------------------------------------------------------
// 6. Excitation-matrix assembly and unitarization.
void criterion_excitation_pipeline(Reporter& rep) {
  const auto states = refdata::h2_fitted_states();
  Eigen::MatrixXd raw = states[1] * states[0].transpose() + states[0] * states[1].transpose() +
                        states[2] * states[2].transpose() + states[3] * states[3].transpose();
  const double raw_gap =
      (raw.cast<std::complex<double>>() - refdata::h2_fitted_raw_matrix()).cwiseAbs().maxCoeff();
  char raw_note[256];
  std::snprintf(raw_note, sizeof(raw_note),
                "raw matrix rebuild: max entry gap %.4g (the stored matrix was formed from the"
                " fits at full precision; the stored vectors are rounded and the two disagree"
                " in the entries touching the smallest components)",
                raw_gap);
  rep.require(raw_gap < 1e-4, raw_note);

  const PolarResult polar = polar_unitarize(refdata::h2_fitted_raw_matrix());
  rep.require((polar.unitary_factor - refdata::h2_fitted_unitarized_matrix())
                      .cwiseAbs()
                      .maxCoeff() < 5e-6,
              "unitarized matrix rebuild");

  const PauliSum h = build_model(ModelParams::h2());
  const SpectralOracle oracle = exact_eigenpairs(h);
  const StateVector ground =
      run_schedule(basis_state(2, 2), h, TwirlSchedule::adaptive(4, ShiftPolicy::BiasLow)).state;

  const ExcitationUnitary from_fit = build_excitation_unitary(states, 0, 1,
                                                              UnitarySource::Simulated);
  rep.require_close(excitation_roundtrip_check(from_fit, ground, h).energy_after,
                    oracle.eigenvalue(1), 5e-3, "excited energy via fitted matrix");

  const ExcitationUnitary pinned =
      pinned_excitation_unitary(unitarized_algebraic_unitary_h2(), UnitarySource::Algebraic);
  rep.require_close(excitation_roundtrip_check(pinned, ground, h).energy_after,
                    oracle.eigenvalue(1), 5e-3, "excited energy via stored matrix");
}

// ---------------------------------------------------------------------------
// 7. Molecular circuits with the stored unitarized matrix.
void criterion_h2_circuits(Reporter& rep) {
  const PauliSum h = build_model(ModelParams::h2());
  const ExcitationUnitary u =
      pinned_excitation_unitary(unitarized_algebraic_unitary_h2(), UnitarySource::Algebraic);
  const StateVector ground =
      run_schedule(basis_state(2, 2), h, TwirlSchedule::adaptive(4, ShiftPolicy::BiasLow)).state;

  const std::vector<std::string> labels = {"ZZ", "ZI", "IZ", "XX", "XI", "YY", "YI"};
  for (const std::string& label : labels) {
    const double real_value = circuit_difference(CircuitKind::RealPart, ground, u, label);
    const double imag_value = circuit_difference(CircuitKind::ImagPart, ground, u, label);
    if (label == "XI") {
      rep.require_close(real_value, 1.5545, 1e-3, "exact real XI");
    } else {
      rep.require(std::abs(real_value) < 1e-3, "exact real zero " + label);
    }
    if (label == "YI") {
      rep.require_close(imag_value, -1.2584, 1e-3, "exact imag YI");
    } else {
      rep.require(std::abs(imag_value) < 1e-3, "exact imag zero " + label);
    }
  }

  rep.require_close(circuit_difference(CircuitKind::RealPart, ground, u, "XI",
                                       ShotPlan{1'000'000, 555, 4}),
                    1.5545, 6e-3, "sampled real XI");
  rep.require_close(circuit_difference(CircuitKind::ImagPart, ground, u, "YI",
                                       ShotPlan{1'000'000, 556, 4}),
                    -1.2584, 6e-3, "sampled imag YI");
}

// ---------------------------------------------------------------------------
// 8. Measurement-only end-to-end pipeline.
void criterion_end_to_end(Reporter& rep) {
  TableRunOptions options;
  options.shots = 1'000'000;
  options.seed = 2024;
  options.streams = 8;

  const std::vector<TableRow> real_rows = run_table(TableId::X, options);
  const std::vector<TableRow> imag_rows = run_table(TableId::XI, options);

  for (const TableRow& row : real_rows) {
    if (row.pauli == "XI") {
      rep.require_close(row.simulated, 1.5545, 2.5e-2, "end-to-end real XI mean");
    } else {
      rep.require(std::abs(row.simulated) < 5e-3, "end-to-end real zero " + row.pauli + " = " +
                                                      std::to_string(row.simulated));
    }
    rep.require(row.repeats == 10, "real repeats");
    std::printf("    real %-3s mean % .6f  ci95 %.2e\n", row.pauli.c_str(), row.simulated,
                row.ci95);
  }
  for (const TableRow& row : imag_rows) {
    if (row.pauli == "YI") {
      rep.require_close(row.simulated, -1.2584, 2.5e-2, "end-to-end imag YI mean");
    } else {
      rep.require(std::abs(row.simulated) < 5e-3, "end-to-end imag zero " + row.pauli + " = " +
                                                      std::to_string(row.simulated));
    }
    std::printf("    imag %-3s mean % .6f  ci95 %.2e\n", row.pauli.c_str(), row.simulated,
                row.ci95);
  }
}

// ---------------------------------------------------------------------------
// 9. Always-on property checks.
void criterion_properties(Reporter& rep) {
  std::mt19937 rng(0x9009);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Norm preservation through a long random circuit.
  {
    ComplexVector amps(16);
    for (int i = 0; i < 16; ++i) amps(i) = std::complex<double>(gauss(rng), gauss(rng));
    amps.normalize();
    StateVector psi = state_from_amplitudes(4, amps);
    for (int step = 0; step < 40; ++step) {
      ComplexMatrix g(2, 2);
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) g(r, c) = std::complex<double>(gauss(rng), gauss(rng));
      }
      const ComplexMatrix gate = polar_unitarize(g).unitary_factor;
      const int target = static_cast<int>(rng() % 4);
      psi = apply_unitary(psi, gate, {target});
      const int control = (target + 1 + static_cast<int>(rng() % 3)) % 4;
      psi = apply_controlled(psi, gate, control, {target});
    }
    rep.require(std::abs(psi.norm() - 1.0) < 1e-12, "norm preservation");
  }

  // Filter multipliers against the spectral oracle.
  for (const ModelParams& model : {ModelParams::single_qubit(1.0), ModelParams::h2()}) {
    const PauliSum h = build_model(model);
    const SpectralOracle oracle = exact_eigenpairs(h);
    const int n = h.n_qubits;
    for (int trial = 0; trial < 10; ++trial) {
      ComplexVector amps(Eigen::Index(1) << n);
      for (Eigen::Index i = 0; i < amps.size(); ++i) {
        amps(i) = std::complex<double>(gauss(rng), gauss(rng));
      }
      amps.normalize();
      const StateVector psi = state_from_amplitudes(n, amps);
      const double tau = 0.2 + 0.3 * trial;
      StateVector filtered = psi;
      double probability = 1.0;
      try {
        std::tie(filtered, probability) = twirl_once(psi, h, tau);
      } catch (const ZeroProbabilityError&) {
        continue;
      }
      const auto multipliers = exact_twirl_multipliers(oracle, tau);
      double norm2 = 0.0;
      for (Eigen::Index k = 0; k < oracle.dim(); ++k) {
        norm2 += std::norm(multipliers[k] * overlap(oracle.eigenstate(static_cast<int>(k)), psi));
      }
      bool ok = std::abs(probability - norm2) < 1e-12;
      for (Eigen::Index k = 0; k < oracle.dim(); ++k) {
        const std::complex<double> expected =
            multipliers[k] * overlap(oracle.eigenstate(static_cast<int>(k)), psi) /
            std::sqrt(norm2);
        ok = ok && std::abs(expected -
                            overlap(oracle.eigenstate(static_cast<int>(k)), filtered)) < 1e-10;
      }
      rep.require(ok, "filter multiplier equivalence");
    }
  }

  // Circuit-versus-oracle combinations over all 15 two-qubit paulis.
  {
    const PauliSum h = build_model(ModelParams::h2());
    const SpectralOracle oracle = exact_eigenpairs(h);
    std::vector<RealVector> states;
    for (int k = 0; k < 4; ++k) {
      states.push_back(oracle.decomposition.eigenvectors.col(k).real());
    }
    const ExcitationUnitary u = build_excitation_unitary(states, 0, 1);
    const StateVector ground = oracle.eigenstate(0);
    const std::complex<double> imag_unit(0.0, 1.0);
    const char* paulis[] = {"IX", "IY", "IZ", "XI", "XX", "XY", "XZ", "YI",
                            "YX", "YY", "YZ", "ZI", "ZX", "ZY", "ZZ"};
    for (const char* label : paulis) {
      const PauliString q = PauliString::parse(label);
      const std::complex<double> element = exact_matrix_element(oracle, 0, 1, q);
      const std::complex<double> conj_element = exact_matrix_element(oracle, 1, 0, q);
      const double real_value = circuit_difference(CircuitKind::RealPart, ground, u, label);
      const double imag_value = circuit_difference(CircuitKind::ImagPart, ground, u, label);
      rep.require(std::abs(real_value - (element + conj_element).real()) < 1e-10,
                  std::string("circuit-oracle real ") + label);
      rep.require(std::abs(imag_value -
                           (-imag_unit * element + imag_unit * conj_element).real()) < 1e-10,
                  std::string("circuit-oracle imag ") + label);
    }
  }

  // Sampling determinism across stream counts.
  {
    const SpectralOracle oracle = exact_eigenpairs(build_model(ModelParams::h2()));
    const StateVector psi = oracle.eigenstate(0);
    const SampledExpectation base =
        sample_pauli(psi, PauliString::parse("XX"), ShotPlan{300001, 77, 1});
    bool identical = true;
    for (int streams : {2, 3, 6, 8}) {
      const SampledExpectation other =
          sample_pauli(psi, PauliString::parse("XX"), ShotPlan{300001, 77, streams});
      identical = identical && other.value == base.value && other.std_error == base.std_error &&
                  other.shots_used == base.shots_used;
    }
    rep.require(identical, "stream-count determinism");
  }

  // Polar projection produces exact unitaries.
  {
    bool ok = true;
    for (int trial = 0; trial < 10; ++trial) {
      ComplexMatrix m(4, 4);
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) m(r, c) = std::complex<double>(gauss(rng), gauss(rng));
      }
      m += 4.0 * ComplexMatrix::Identity(4, 4);
      ok = ok && unitarity_defect(polar_unitarize(m).unitary_factor) < 1e-12;
    }
    ok = ok && unitarity_defect(polar_unitarize(refdata::h2_fitted_raw_matrix()).unitary_factor) <
                   1e-12;
    rep.require(ok, "polar unitarity");
  }
}

struct Criterion {
  int number;
  const char* title;
  double time_budget_seconds;
  std::function<void(Reporter&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "spectral oracle exactness", 1.0, criterion_oracle_exactness},
      {2, "one-qubit circuits, closed-form swap matrix", 30.0, criterion_j1_circuits},
      {3, "one-qubit circuits at J=2, stored fitted matrix", 30.0, criterion_j2_circuits},
      {4, "ancilla-filter ground-state extraction", 5.0, criterion_twirl_extraction},
      {5, "real-state reconstruction fidelity", 30.0, criterion_reconstruction},
      {6, "excitation-matrix assembly and unitarization", 5.0, criterion_excitation_pipeline},
      {7, "molecular circuits, stored unitarized matrix", 60.0, criterion_h2_circuits},
      {8, "measurement-only end-to-end pipeline", 600.0, criterion_end_to_end},
      {9, "property suite", 600.0, criterion_properties},
  };

  int failed = 0;
  for (const Criterion& criterion : criteria) {
    Reporter rep;
    const auto start = std::chrono::steady_clock::now();
    criterion.body(rep);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rep.require(seconds < criterion.time_budget_seconds,
                "runtime " + std::to_string(seconds) + "s exceeds the " +
                    std::to_string(criterion.time_budget_seconds) + "s budget");
    if (rep.failures.empty()) {
      std::printf("[PASS] criterion %d: %s (%.2fs)\n", criterion.number, criterion.title,
                  seconds);
    } else {
      ++failed;
      std::printf("[FAIL] criterion %d: %s (%.2fs)\n", criterion.number, criterion.title,
                  seconds);
      for (const std::string& failure : rep.failures) {
        std::printf("       %s\n", failure.c_str());
      }
    }
  }
  if (failed != 0) {
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
