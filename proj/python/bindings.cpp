#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twirlkit/experiment.hpp"

namespace py = pybind11;
using namespace twirlkit;

namespace {

ShotPlan make_plan(std::uint64_t shots, std::uint64_t seed, int streams) {
  return ShotPlan{shots, seed, streams};
}

CircuitKind parse_kind(const std::string& kind) {
  if (kind == "real_part") return CircuitKind::RealPart;
  if (kind == "imag_part") return CircuitKind::ImagPart;
  throw InvalidParamsError("circuit kind must be real_part or imag_part, got \"" + kind + "\"");
}

ModelParams parse_model(const std::string& kind, double j) {
  if (kind == "single_qubit") return ModelParams::single_qubit(j);
  if (kind == "h2") return ModelParams::h2();
  throw InvalidParamsError("model must be single_qubit or h2, got \"" + kind + "\"");
}

TwirlSchedule make_schedule(const std::string& mode, int steps, double tau0,
                            const std::vector<double>& taus, const std::string& shift,
                            double shift_value) {
  ShiftPolicy policy = ShiftPolicy::None;
  if (shift == "none") {
    policy = ShiftPolicy::None;
  } else if (shift == "tracked") {
    policy = ShiftPolicy::TrackedEnergy;
  } else if (shift == "bias_low") {
    policy = ShiftPolicy::BiasLow;
  } else if (shift == "bias_high") {
    policy = ShiftPolicy::BiasHigh;
  } else if (shift == "fixed") {
    policy = ShiftPolicy::FixedValue;
  } else {
    throw InvalidParamsError("shift must be none|tracked|bias_low|bias_high|fixed");
  }
  if (mode == "fixed") return TwirlSchedule::fixed(steps, tau0, policy, shift_value);
  if (mode == "adaptive") return TwirlSchedule::adaptive(steps, policy);
  if (mode == "explicit") return TwirlSchedule::explicit_taus(taus, policy, shift_value);
  throw InvalidParamsError("schedule mode must be fixed|adaptive|explicit");
}

py::dict row_to_dict(const TableRow& row) {
  py::dict d;
  if (!row.state.empty()) d["state"] = row.state;
  d["pauli"] = row.pauli;
  d["algebraic"] = row.algebraic;
  d["simulated"] = row.simulated;
  d["ci95"] = row.ci95;
  d["shots"] = row.shots;
  d["repeats"] = row.repeats;
  d["seed"] = row.seed;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Eigenstate extraction and matrix-element estimation on small Pauli models";

  py::register_exception<Error>(m, "TwirlkitError");

  // Dense linear algebra.
  m.def("kron", &kron, py::arg("a"), py::arg("b"),
        "Tensor product; a is the left (more significant) factor");
  m.def(
      "hermitian_eig",
      [](const ComplexMatrix& a) {
        const HermitianEigenDecomposition eig = hermitian_eig(a);
        return py::make_tuple(eig.eigenvalues, eig.eigenvectors);
      },
      py::arg("a"), "Ascending eigenvalues and sign-normalized eigenvector columns");
  m.def("unitary_exp", &unitary_exp, py::arg("h"), py::arg("tau"), "exp(-i*tau*h)");
  m.def(
      "polar_unitarize",
      [](const ComplexMatrix& a) {
        const PolarResult polar = polar_unitarize(a);
        return py::make_tuple(polar.unitary_factor, polar.hermitian_factor, polar.deviation_norm);
      },
      py::arg("m"), "(nearest unitary, Hermitian factor, Frobenius deviation)");

  // Pauli model.
  py::class_<PauliString>(m, "PauliString")
      .def(py::init(&PauliString::parse), py::arg("label"))
      .def_property_readonly("label", &PauliString::label)
      .def_property_readonly("n_qubits", &PauliString::n_qubits)
      .def("__repr__", [](const PauliString& s) { return "PauliString('" + s.label() + "')"; });

  py::class_<PauliSum>(m, "PauliSum")
      .def(py::init([](int n_qubits) { return PauliSum(n_qubits, {}); }), py::arg("n_qubits"))
      .def("add",
           [](PauliSum& s, double coefficient, const std::string& label) {
             s.add(coefficient, PauliString::parse(label));
             return s;
           })
      .def_property_readonly("n_qubits", [](const PauliSum& s) { return s.n_qubits; })
      .def_property_readonly("terms", [](const PauliSum& s) {
        std::vector<std::pair<double, std::string>> out;
        for (const auto& t : s.terms) out.emplace_back(t.coefficient, t.string.label());
        return out;
      });

  m.def(
      "build_model",
      [](const std::string& kind, double j, std::optional<std::array<double, 5>> a) {
        ModelParams params = parse_model(kind, j);
        if (a.has_value()) params = ModelParams::h2_with(*a);
        return build_model(params);
      },
      py::arg("kind"), py::arg("j") = 1.0, py::arg("a") = std::nullopt);
  m.def("to_dense", py::overload_cast<const PauliSum&>(&to_dense), py::arg("s"));
  m.def(
      "to_dense_pauli",
      [](const std::string& label) { return to_dense(PauliString::parse(label)); },
      py::arg("label"));

  // Statevector.
  py::class_<StateVector>(m, "StateVector")
      .def_property_readonly("n_qubits", [](const StateVector& s) { return s.n_qubits; })
      .def_property_readonly("amplitudes", [](const StateVector& s) { return s.amplitudes; })
      .def("__repr__", [](const StateVector& s) {
        return "StateVector(n_qubits=" + std::to_string(s.n_qubits) + ")";
      });
  m.def("basis_state", &basis_state, py::arg("n_qubits"), py::arg("index"));
  m.def("state_from_amplitudes", &state_from_amplitudes, py::arg("n_qubits"),
        py::arg("amplitudes"));
  m.def("apply_unitary", &apply_unitary, py::arg("psi"), py::arg("u"), py::arg("targets"));
  m.def("apply_controlled", &apply_controlled, py::arg("psi"), py::arg("u"), py::arg("control"),
        py::arg("targets"));
  m.def("phase_s", &phase_s, py::arg("psi"), py::arg("qubit"));
  m.def("project_postselect", &project_postselect, py::arg("psi"), py::arg("qubit"),
        py::arg("outcome"));
  m.def(
      "exact_expectation",
      [](const std::string& label, const StateVector& psi) {
        return exact_expectation(PauliString::parse(label), psi);
      },
      py::arg("pauli"), py::arg("psi"));
  m.def("exact_energy",
        py::overload_cast<const PauliSum&, const StateVector&>(&exact_expectation), py::arg("h"),
        py::arg("psi"));
  m.def("energy_variance", &energy_variance, py::arg("h"), py::arg("psi"));

  // Sampling.
  py::class_<SampledExpectation>(m, "SampledExpectation")
      .def_readonly("value", &SampledExpectation::value)
      .def_readonly("shots_used", &SampledExpectation::shots_used)
      .def_readonly("std_error", &SampledExpectation::std_error);
  m.def(
      "sample_pauli",
      [](const StateVector& psi, const std::string& label, std::uint64_t shots,
         std::uint64_t seed, int streams) {
        return sample_pauli(psi, PauliString::parse(label), make_plan(shots, seed, streams));
      },
      py::arg("psi"), py::arg("pauli"), py::arg("shots") = 1'000'000, py::arg("seed") = 0,
      py::arg("streams") = 1);
  m.def(
      "sample_conditional_pauli",
      [](const StateVector& psi, int ancilla, const std::string& label, std::uint64_t shots,
         std::uint64_t seed, int streams) {
        const ConditionalSamples samples = sample_conditional_pauli(
            psi, ancilla, PauliString::parse(label), make_plan(shots, seed, streams));
        py::dict d;
        d["value0"] = samples.outcome0.value;
        d["value1"] = samples.outcome1.value;
        d["shots0"] = samples.outcome0.shots_used;
        d["shots1"] = samples.outcome1.shots_used;
        d["bin0_empty"] = samples.bin0_empty;
        d["bin1_empty"] = samples.bin1_empty;
        return d;
      },
      py::arg("psi"), py::arg("ancilla"), py::arg("pauli"), py::arg("shots") = 1'000'000,
      py::arg("seed") = 0, py::arg("streams") = 1);

  // Oracle.
  py::class_<SpectralOracle>(m, "SpectralOracle")
      .def_property_readonly("eigenvalues",
                             [](const SpectralOracle& o) { return o.decomposition.eigenvalues; })
      .def_property_readonly("eigenvectors",
                             [](const SpectralOracle& o) { return o.decomposition.eigenvectors; })
      .def("eigenstate", &SpectralOracle::eigenstate, py::arg("k"))
      .def(
          "matrix_element",
          [](const SpectralOracle& o, int i, int j, const std::string& label) {
            return exact_matrix_element(o, i, j, PauliString::parse(label));
          },
          py::arg("i"), py::arg("j"), py::arg("pauli"))
      .def("twirl_multipliers", &exact_twirl_multipliers, py::arg("tau"));
  m.def("exact_eigenpairs", &exact_eigenpairs, py::arg("h"));
  m.def(
      "reference_eigensystem",
      [](const std::string& kind, double j) {
        const ReferenceEigensystem ref = reference_eigensystem(parse_model(kind, j));
        return py::make_tuple(ref.eigenvalues, ref.eigenvectors);
      },
      py::arg("kind"), py::arg("j") = 1.0);

  // Twirl engine.
  py::class_<TwirlSchedule>(m, "TwirlSchedule")
      .def(py::init(&make_schedule), py::arg("mode") = "adaptive", py::arg("steps") = 4,
           py::arg("tau0") = 1.0, py::arg("taus") = std::vector<double>{},
           py::arg("shift") = "none", py::arg("shift_value") = 0.0);
  py::class_<TwirlOutcome>(m, "TwirlOutcome")
      .def_readonly("state", &TwirlOutcome::state)
      .def_readonly("success_probability", &TwirlOutcome::success_probability)
      .def_readonly("energy_history", &TwirlOutcome::energy_history)
      .def_readonly("variance_history", &TwirlOutcome::variance_history)
      .def_property_readonly("steps_taken", [](const TwirlOutcome& o) {
        std::vector<std::pair<double, double>> out;
        for (const TwirlStep& s : o.steps_taken) out.emplace_back(s.tau, s.shift);
        return out;
      });
  m.def("twirl_once", &twirl_once, py::arg("psi"), py::arg("h"), py::arg("tau"),
        py::arg("shift") = 0.0);
  m.def("run_schedule", &run_schedule, py::arg("psi0"), py::arg("h"), py::arg("schedule"));
  m.def(
      "extract_all_eigenstates",
      [](const PauliSum& h, int steps, double variance_threshold) {
        return extract_all_eigenstates(h, default_recipes(h, steps), variance_threshold);
      },
      py::arg("h"), py::arg("steps") = 6, py::arg("variance_threshold") = 1e-4);

  // State estimation.
  py::class_<RealStateEstimate>(m, "RealStateEstimate")
      .def_readonly("amplitudes", &RealStateEstimate::amplitudes)
      .def_readonly("residual", &RealStateEstimate::residual)
      .def_readonly("sign_convention", &RealStateEstimate::sign_convention);
  py::class_<ExcitationUnitary>(m, "ExcitationUnitary")
      .def_readonly("matrix", &ExcitationUnitary::matrix)
      .def_readonly("pair", &ExcitationUnitary::pair)
      .def_readonly("unitarization_deviation", &ExcitationUnitary::unitarization_deviation);
  m.def(
      "reconstruct_real_state",
      [](const std::vector<std::tuple<std::string, double, std::uint64_t>>& entries, int dim) {
        ExpectationDataset dataset;
        for (const auto& [label, value, shots] : entries) {
          dataset.entries.push_back({PauliString::parse(label), value, shots});
        }
        return reconstruct_real_state(dataset, dim);
      },
      py::arg("entries"), py::arg("dim"));
  m.def(
      "build_excitation_unitary",
      [](const std::vector<RealVector>& states, int i, int j) {
        return build_excitation_unitary(states, i, j);
      },
      py::arg("states"), py::arg("i") = 0, py::arg("j") = 1);
  m.def(
      "pinned_excitation_unitary",
      [](const ComplexMatrix& matrix) {
        return pinned_excitation_unitary(matrix, UnitarySource::Simulated);
      },
      py::arg("matrix"), "Wraps a stored near-unitary matrix, projecting it to a unitary");
  m.def(
      "algebraic_excitation_unitary",
      [](const std::string& kind, double j) {
        return algebraic_excitation_unitary(parse_model(kind, j));
      },
      py::arg("kind"), py::arg("j") = 1.0);
  m.def(
      "excitation_roundtrip_check",
      [](const ExcitationUnitary& u, const StateVector& ground, const PauliSum& h) {
        const RoundtripEnergies energies = excitation_roundtrip_check(u, ground, h);
        return py::make_tuple(energies.energy_after, energies.energy_roundtrip);
      },
      py::arg("u"), py::arg("ground"), py::arg("h"));

  // Superposition circuits.
  m.def(
      "run_superposition",
      [](const std::string& kind, const StateVector& ground, const ExcitationUnitary& u,
         const std::string& observable, std::optional<std::uint64_t> shots, std::uint64_t seed,
         int streams) {
        SuperpositionRun run{parse_kind(kind), ground, u, PauliString::parse(observable),
                             std::nullopt};
        if (shots.has_value()) run.plan = make_plan(*shots, seed, streams);
        const MatrixElementResult result = run_superposition(run);
        py::dict d;
        d["cond_expectation_0"] = result.cond_expectation_0;
        d["cond_expectation_1"] = result.cond_expectation_1;
        d["difference"] = result.difference;
        d["shots_0"] = result.shots_0;
        d["shots_1"] = result.shots_1;
        return d;
      },
      py::arg("kind"), py::arg("ground"), py::arg("u"), py::arg("observable"),
      py::arg("shots") = std::nullopt, py::arg("seed") = 0, py::arg("streams") = 1);
  m.def(
      "full_matrix_element",
      [](const StateVector& ground, const ExcitationUnitary& u, const std::string& observable,
         std::optional<std::uint64_t> shots, std::uint64_t seed, int streams) {
        std::optional<ShotPlan> plan;
        if (shots.has_value()) plan = make_plan(*shots, seed, streams);
        return full_matrix_element(ground, u, PauliString::parse(observable), plan);
      },
      py::arg("ground"), py::arg("u"), py::arg("observable"), py::arg("shots") = std::nullopt,
      py::arg("seed") = 0, py::arg("streams") = 1);
  m.def(
      "repeated_runs_ci",
      [](const std::string& kind, const StateVector& ground, const ExcitationUnitary& u,
         const std::string& observable, int repeats, std::uint64_t shots, std::uint64_t seed,
         int streams) {
        SuperpositionRun run{parse_kind(kind), ground, u, PauliString::parse(observable),
                             make_plan(shots, seed, streams)};
        const RepeatedRuns repeated = repeated_runs_ci(run, repeats);
        return py::make_tuple(repeated.mean_difference, repeated.ci95_halfwidth);
      },
      py::arg("kind"), py::arg("ground"), py::arg("u"), py::arg("observable"),
      py::arg("repeats") = 10, py::arg("shots") = 1'000'000, py::arg("seed") = 0,
      py::arg("streams") = 1);

  // Preset experiments.
  m.def(
      "run_table",
      [](const std::string& id, std::optional<std::uint64_t> shots, std::uint64_t seed,
         int streams, bool exact) {
        TableRunOptions options;
        options.shots = shots;
        options.seed = seed;
        options.streams = streams;
        options.exact = exact;
        const std::vector<TableRow> rows = run_table(parse_table_id(id), options);
        py::list out;
        for (const TableRow& row : rows) out.append(row_to_dict(row));
        return out;
      },
      py::arg("id"), py::arg("shots") = std::nullopt, py::arg("seed") = 0, py::arg("streams") = 1,
      py::arg("exact") = false);
  m.def(
      "run_config_text",
      [](const std::string& text) {
        const ExperimentConfig config = parse_config_text(text);
        const ExperimentOutput output = run_config(config);
        return output.render(config.format);
      },
      py::arg("text"), "Parses and runs a key=value config, returning the rendered output");
}
