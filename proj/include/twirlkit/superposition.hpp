#pragma once

#include <complex>
#include <optional>
#include <variant>

#include "twirlkit/estimation.hpp"
#include "twirlkit/sampling.hpp"

namespace twirlkit {

/// RealPart: Hadamard on the ancilla, controlled excitation, Hadamard; the
/// conditional difference is <E1|Q|E0> + <E0|Q|E1>. ImagPart inserts the
/// phase gate after the first Hadamard; the difference becomes
/// -i<E1|Q|E0> + i<E0|Q|E1>.
enum class CircuitKind { RealPart, ImagPart };

struct SuperpositionRun {
  CircuitKind circuit_kind = CircuitKind::RealPart;
  StateVector ground;
  ExcitationUnitary unitary;
  std::variant<PauliString, PauliSum> observable;
  std::optional<ShotPlan> plan;  // nullopt = exact conditional expectations
};

struct MatrixElementResult {
  double cond_expectation_0 = 0.0;
  double cond_expectation_1 = 0.0;
  double difference = 0.0;  // cond_expectation_0 - cond_expectation_1
  CircuitKind interpretation = CircuitKind::RealPart;
  std::uint64_t shots_0 = 0;
  std::uint64_t shots_1 = 0;
  double ci95_halfwidth = 0.0;  // 0 in exact mode and for single runs
};

/// Runs one interference circuit; the ancilla is the last-indexed qubit.
/// Sampled mode samples the exact post-circuit state and bins by the ancilla
/// readout; an empty bin raises EmptyBinError.
MatrixElementResult run_superposition(const SuperpositionRun& run);

/// Combines both circuits into <E1|Q|E0> = re_sum/2 + i*imag_combination/2,
/// which assumes a Hermitian observable.
std::complex<double> full_matrix_element(const StateVector& ground, const ExcitationUnitary& u,
                                         const PauliString& q,
                                         const std::optional<ShotPlan>& plan);

struct RepeatedRuns {
  double mean_difference = 0.0;
  double ci95_halfwidth = 0.0;
  std::vector<double> differences;
};

/// Repeats a sampled run with independent per-repeat seeds and returns the
/// mean difference with a Student-t 95% half-width.
RepeatedRuns repeated_runs_ci(const SuperpositionRun& run, int repeats);

/// 97.5% Student-t quantile used for the confidence intervals.
double student_t_975(int dof);

}  // namespace twirlkit
