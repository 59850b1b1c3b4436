#pragma once

#include <optional>
#include <vector>

#include "twirlkit/pauli.hpp"
#include "twirlkit/sampling.hpp"
#include "twirlkit/statevector.hpp"

namespace twirlkit {

/// One filter application: duration tau, optionally with a spectral shift c.
/// The circuit is Hadamard on a fresh ancilla, controlled exp(-i*tau*H),
/// a phase gate exp(i*tau*c) on the ancilla, Hadamard, post-select ancilla 0.
/// The surviving eigencomponent multipliers are (1 + exp(-i*tau*(E_k - c)))/2;
/// with c = 0 this is the plain filter.
struct TwirlStep {
  double tau = 0.0;
  double shift = 0.0;
};

/// Where a schedule takes its per-step spectral shift from. The shift breaks
/// the filter's E -> -E magnitude symmetry; without one, spectra that are
/// symmetric about zero (the X + J*Z family) have amplitude ratios that no
/// choice of durations can change.
enum class ShiftPolicy {
  None,           // plain filter
  FixedValue,     // constant, from TwirlSchedule::shift_value
  TrackedEnergy,  // current <H>
  BiasLow,        // <H> - sqrt(var H): favors the component below the mean
  BiasHigh,       // <H> + sqrt(var H): favors the component above the mean
};

enum class ScheduleMode { Fixed, Adaptive, Explicit };

struct TwirlSchedule {
  ScheduleMode mode = ScheduleMode::Adaptive;
  int steps = 4;
  double tau0 = 1.0;               // Fixed mode duration
  std::vector<double> taus;        // Explicit mode durations, length == steps
  std::vector<double> adaptive_grid;  // empty = default log grid, rebuilt per step
  ShiftPolicy shift_policy = ShiftPolicy::None;
  double shift_value = 0.0;  // FixedValue only

  static TwirlSchedule fixed(int steps, double tau0, ShiftPolicy shift = ShiftPolicy::None,
                             double shift_value = 0.0);
  static TwirlSchedule adaptive(int steps, ShiftPolicy shift = ShiftPolicy::TrackedEnergy);
  static TwirlSchedule explicit_taus(std::vector<double> taus,
                                     ShiftPolicy shift = ShiftPolicy::None,
                                     double shift_value = 0.0);
};

struct TwirlOutcome {
  StateVector state;                  // physical register, ancillas projected out
  double success_probability = 1.0;   // product of per-step post-selection probabilities
  std::vector<double> energy_history;    // <H> after each step
  std::vector<double> variance_history;  // <H^2> - <H>^2 after each step
  std::vector<TwirlStep> steps_taken;
};

/// One filter step. Throws ZeroProbabilityError when the filter annihilates
/// the state. Returns the filtered physical state and the ancilla-0
/// probability.
std::pair<StateVector, double> twirl_once(const StateVector& psi, const PauliSum& h, double tau,
                                          double shift = 0.0);

/// Runs a schedule. Adaptive mode picks each duration from the candidate grid
/// (plus the identity step) to minimize the post-step energy variance,
/// evaluated exactly on the emulated state.
TwirlOutcome run_schedule(const StateVector& psi0, const PauliSum& h, const TwirlSchedule& sched);

/// Sampled-readout variant: each step measures the ancilla (consuming plan
/// randomness) and restarts from psi0 whenever it reads 1. attempts reports
/// how many step executions were consumed.
struct SampledTwirlOutcome {
  TwirlOutcome outcome;
  std::uint64_t attempts = 0;
};
SampledTwirlOutcome run_schedule_restart_on_one(const StateVector& psi0, const PauliSum& h,
                                                const TwirlSchedule& sched, const ShotPlan& plan);

struct TwirlRecipe {
  StateVector initial;
  TwirlSchedule schedule;
};

/// Extraction recipes that need no spectral knowledge: computational basis
/// states ranked by <H>, the lower half biased toward the spectrum bottom and
/// the upper half toward the top.
std::vector<TwirlRecipe> default_recipes(const PauliSum& h, int steps = 6);

/// Runs each recipe and demands a final energy variance below
/// variance_threshold; results are ordered by final <H> ascending.
/// Throws ConvergenceFailureError naming the recipe and achieved variance.
std::vector<TwirlOutcome> extract_all_eigenstates(const PauliSum& h,
                                                  const std::vector<TwirlRecipe>& recipes,
                                                  double variance_threshold = 1e-4);

/// Duration that maximizes the gap between the target's filter gain and the
/// strongest unwanted gain, given known eigenvalues and a shift. Used to
/// build fixed-duration fixtures.
double choose_fixed_tau(const std::vector<double>& eigenvalues, int target, double shift,
                        int grid_size = 4096, double tau_max = 16.0);

}  // namespace twirlkit
