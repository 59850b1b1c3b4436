#include "twirlkit/superposition.hpp"

#include <cmath>
#include <numeric>

namespace twirlkit {

namespace {

constexpr std::uint64_t kDomainRepeat = 0x72707431u;
constexpr std::uint64_t kDomainTerm = 0x7465726du;

ComplexMatrix hadamard_gate() {
  ComplexMatrix h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

StateVector build_circuit_state(const SuperpositionRun& run) {
  const StateVector& ground = run.ground;
  if (run.unitary.matrix.rows() != ground.dim()) {
    throw DimensionMismatchError("run_superposition: unitary dimension " +
                                 std::to_string(run.unitary.matrix.rows()) +
                                 " does not match the ground register");
  }
  const int ancilla = ground.n_qubits;
  std::vector<int> targets(ground.n_qubits);
  std::iota(targets.begin(), targets.end(), 0);

  StateVector work = attach_ancilla(ground);
  work = apply_unitary(work, hadamard_gate(), {ancilla});
  if (run.circuit_kind == CircuitKind::ImagPart) work = phase_s(work, ancilla);
  work = apply_controlled(work, run.unitary.matrix, ancilla, targets);
  work = apply_unitary(work, hadamard_gate(), {ancilla});
  return work;
}

double observable_expectation(const std::variant<PauliString, PauliSum>& q,
                              const StateVector& psi) {
  if (std::holds_alternative<PauliString>(q)) {
    return exact_expectation(std::get<PauliString>(q), psi);
  }
  return exact_expectation(std::get<PauliSum>(q), psi);
}

MatrixElementResult run_exact(const SuperpositionRun& run, const StateVector& circuit_state) {
  const int ancilla = run.ground.n_qubits;
  MatrixElementResult out;
  out.interpretation = run.circuit_kind;
  auto [state0, p0] = project_postselect(circuit_state, ancilla, 0);
  auto [state1, p1] = project_postselect(circuit_state, ancilla, 1);
  const StateVector phys0 = discard_qubit(state0, ancilla, 0);
  const StateVector phys1 = discard_qubit(state1, ancilla, 1);
  out.cond_expectation_0 = observable_expectation(run.observable, phys0);
  out.cond_expectation_1 = observable_expectation(run.observable, phys1);
  out.difference = out.cond_expectation_0 - out.cond_expectation_1;
  (void)p0;
  (void)p1;
  return out;
}

MatrixElementResult run_sampled(const SuperpositionRun& run, const StateVector& circuit_state) {
  const int ancilla = run.ground.n_qubits;
  const ShotPlan& plan = *run.plan;
  MatrixElementResult out;
  out.interpretation = run.circuit_kind;

  if (std::holds_alternative<PauliString>(run.observable)) {
    const ConditionalSamples samples =
        sample_conditional_pauli(circuit_state, ancilla, std::get<PauliString>(run.observable),
                                 plan);
    if (samples.bin0_empty || samples.bin1_empty) {
      throw EmptyBinError("run_superposition: an ancilla bin received no shots");
    }
    out.cond_expectation_0 = samples.outcome0.value;
    out.cond_expectation_1 = samples.outcome1.value;
    out.shots_0 = samples.outcome0.shots_used;
    out.shots_1 = samples.outcome1.shots_used;
  } else {
    // A Pauli sum is measured term by term on separate sub-streams and
    // combined with its coefficients. Identity terms shift both bins equally.
    const PauliSum& sum = std::get<PauliSum>(run.observable);
    std::uint64_t term_index = 0;
    for (const PauliSum::Term& term : sum.terms) {
      ShotPlan term_plan = plan;
      term_plan.seed = derive_seed(plan.seed, kDomainTerm, term_index++);
      if (term.string.is_identity()) {
        out.cond_expectation_0 += term.coefficient;
        out.cond_expectation_1 += term.coefficient;
        continue;
      }
      const ConditionalSamples samples =
          sample_conditional_pauli(circuit_state, ancilla, term.string, term_plan);
      if (samples.bin0_empty || samples.bin1_empty) {
        throw EmptyBinError("run_superposition: an ancilla bin received no shots");
      }
      out.cond_expectation_0 += term.coefficient * samples.outcome0.value;
      out.cond_expectation_1 += term.coefficient * samples.outcome1.value;
      out.shots_0 = std::max(out.shots_0, samples.outcome0.shots_used);
      out.shots_1 = std::max(out.shots_1, samples.outcome1.shots_used);
    }
  }
  out.difference = out.cond_expectation_0 - out.cond_expectation_1;
  return out;
}

}  // namespace

MatrixElementResult run_superposition(const SuperpositionRun& run) {
  if (std::abs(run.ground.norm() - 1.0) > 1e-10) {
    throw DimensionMismatchError("run_superposition: ground state is not normalized");
  }
  const StateVector circuit_state = build_circuit_state(run);
  return run.plan.has_value() ? run_sampled(run, circuit_state) : run_exact(run, circuit_state);
}

std::complex<double> full_matrix_element(const StateVector& ground, const ExcitationUnitary& u,
                                         const PauliString& q,
                                         const std::optional<ShotPlan>& plan) {
  SuperpositionRun real_run{CircuitKind::RealPart, ground, u, q, plan};
  SuperpositionRun imag_run{CircuitKind::ImagPart, ground, u, q, plan};
  if (plan.has_value()) {
    // Decorrelate the two circuits' shot streams.
    imag_run.plan->seed = derive_seed(plan->seed, kDomainTerm, 0x696d6167u);
  }
  const double re_sum = run_superposition(real_run).difference;
  const double im_combination = run_superposition(imag_run).difference;
  return {0.5 * re_sum, 0.5 * im_combination};
}

RepeatedRuns repeated_runs_ci(const SuperpositionRun& run, int repeats) {
  if (repeats < 2) throw InvalidParamsError("repeated_runs_ci: need at least two repeats");
  if (!run.plan.has_value()) {
    throw InvalidParamsError("repeated_runs_ci: repeats require a sampled plan");
  }
  RepeatedRuns out;
  out.differences.reserve(repeats);
  for (int r = 0; r < repeats; ++r) {
    SuperpositionRun repeat_run = run;
    repeat_run.plan->seed = derive_seed(run.plan->seed, kDomainRepeat, static_cast<std::uint64_t>(r));
    out.differences.push_back(run_superposition(repeat_run).difference);
  }
  const double mean = std::accumulate(out.differences.begin(), out.differences.end(), 0.0) /
                      repeats;
  double ss = 0.0;
  for (double d : out.differences) ss += (d - mean) * (d - mean);
  const double sample_sd = std::sqrt(ss / (repeats - 1));
  out.mean_difference = mean;
  out.ci95_halfwidth = student_t_975(repeats - 1) * sample_sd / std::sqrt(repeats);
  return out;
}

double student_t_975(int dof) {
  static constexpr double kTable[] = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (dof < 1) throw InvalidParamsError("student_t_975: dof must be positive");
  if (dof <= 30) return kTable[dof - 1];
  if (dof <= 40) return 2.021;
  if (dof <= 60) return 2.000;
  return 1.960;
}

}  // namespace twirlkit
