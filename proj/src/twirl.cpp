#include "twirlkit/twirl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace twirlkit {

namespace {

constexpr std::uint64_t kDomainRestart = 0x72737472u;

ComplexMatrix hadamard_gate() {
  ComplexMatrix h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

std::vector<int> physical_targets(int n) {
  std::vector<int> targets(n);
  std::iota(targets.begin(), targets.end(), 0);
  return targets;
}

double resolve_shift(const TwirlSchedule& sched, const PauliSum& h, const StateVector& psi) {
  switch (sched.shift_policy) {
    case ShiftPolicy::None:
      return 0.0;
    case ShiftPolicy::FixedValue:
      return sched.shift_value;
    case ShiftPolicy::TrackedEnergy:
      return exact_expectation(h, psi);
    case ShiftPolicy::BiasLow:
      return exact_expectation(h, psi) - std::sqrt(std::max(0.0, energy_variance(h, psi)));
    case ShiftPolicy::BiasHigh:
      return exact_expectation(h, psi) + std::sqrt(std::max(0.0, energy_variance(h, psi)));
  }
  return 0.0;
}

std::vector<double> candidate_grid(const TwirlSchedule& sched, const PauliSum& h,
                                   const StateVector& psi) {
  if (!sched.adaptive_grid.empty()) return sched.adaptive_grid;
  // 32 durations log-spaced up to one filter period of the current energy
  // spread estimate.
  const double spread = std::sqrt(std::max(energy_variance(h, psi), 1e-12));
  const double lo = 0.05;
  const double hi = std::max(2.0 * lo, std::min(2.0 * M_PI / spread, 1e4));
  std::vector<double> grid(32);
  const double ratio = std::pow(hi / lo, 1.0 / 31.0);
  double tau = lo;
  for (int k = 0; k < 32; ++k) {
    grid[k] = tau;
    tau *= ratio;
  }
  return grid;
}

}  // namespace

TwirlSchedule TwirlSchedule::fixed(int steps, double tau0, ShiftPolicy shift, double shift_value) {
  TwirlSchedule s;
  s.mode = ScheduleMode::Fixed;
  s.steps = steps;
  s.tau0 = tau0;
  s.shift_policy = shift;
  s.shift_value = shift_value;
  return s;
}

TwirlSchedule TwirlSchedule::adaptive(int steps, ShiftPolicy shift) {
  TwirlSchedule s;
  s.mode = ScheduleMode::Adaptive;
  s.steps = steps;
  s.shift_policy = shift;
  return s;
}

TwirlSchedule TwirlSchedule::explicit_taus(std::vector<double> taus, ShiftPolicy shift,
                                           double shift_value) {
  TwirlSchedule s;
  s.mode = ScheduleMode::Explicit;
  s.steps = static_cast<int>(taus.size());
  s.taus = std::move(taus);
  s.shift_policy = shift;
  s.shift_value = shift_value;
  return s;
}

std::pair<StateVector, double> twirl_once(const StateVector& psi, const PauliSum& h, double tau,
                                          double shift) {
  if (h.n_qubits != psi.n_qubits) {
    throw DimensionMismatchError("twirl_once: Hamiltonian acts on " +
                                 std::to_string(h.n_qubits) + " qubits, state has " +
                                 std::to_string(psi.n_qubits));
  }
  if (!std::isfinite(tau)) throw InvalidParamsError("twirl_once: tau must be finite");

  const int ancilla = psi.n_qubits;  // appended as the last-indexed qubit
  const ComplexMatrix propagator = unitary_exp(to_dense(h), tau);

  StateVector work = attach_ancilla(psi);
  work = apply_unitary(work, hadamard_gate(), {ancilla});
  work = apply_controlled(work, propagator, ancilla, physical_targets(psi.n_qubits));
  if (shift != 0.0) work = phase_rotation(work, ancilla, tau * shift);
  work = apply_unitary(work, hadamard_gate(), {ancilla});

  auto [projected, probability] = project_postselect(work, ancilla, 0);
  return {discard_qubit(projected, ancilla), probability};
}

TwirlOutcome run_schedule(const StateVector& psi0, const PauliSum& h, const TwirlSchedule& sched) {
  if (sched.steps < 1) throw InvalidParamsError("run_schedule: need at least one step");
  if (sched.mode == ScheduleMode::Explicit &&
      static_cast<int>(sched.taus.size()) != sched.steps) {
    throw InvalidParamsError("run_schedule: explicit schedule needs one tau per step");
  }

  TwirlOutcome out;
  out.state = psi0;
  for (int step = 0; step < sched.steps; ++step) {
    const double shift = resolve_shift(sched, h, out.state);
    TwirlStep chosen{0.0, shift};
    StateVector next = out.state;
    double step_probability = 1.0;

    if (sched.mode == ScheduleMode::Adaptive) {
      // Greedy variance minimization; the identity step is always a
      // candidate, so the variance never increases.
      double best_variance = energy_variance(h, out.state);
      for (double tau : candidate_grid(sched, h, out.state)) {
        try {
          auto [candidate, probability] = twirl_once(out.state, h, tau, shift);
          const double variance = energy_variance(h, candidate);
          if (variance < best_variance - 1e-15) {
            best_variance = variance;
            next = candidate;
            step_probability = probability;
            chosen.tau = tau;
          }
        } catch (const ZeroProbabilityError&) {
          continue;
        }
      }
    } else {
      chosen.tau = sched.mode == ScheduleMode::Fixed ? sched.tau0 : sched.taus[step];
      try {
        std::tie(next, step_probability) = twirl_once(out.state, h, chosen.tau, shift);
      } catch (const ZeroProbabilityError& e) {
        throw ZeroProbabilityError("run_schedule: step " + std::to_string(step) + ": " + e.what());
      }
    }

    out.state = next;
    out.success_probability *= step_probability;
    out.energy_history.push_back(exact_expectation(h, out.state));
    out.variance_history.push_back(energy_variance(h, out.state));
    out.steps_taken.push_back(chosen);
  }
  return out;
}

SampledTwirlOutcome run_schedule_restart_on_one(const StateVector& psi0, const PauliSum& h,
                                                const TwirlSchedule& sched, const ShotPlan& plan) {
  SampledTwirlOutcome result;
  constexpr std::uint64_t kMaxAttempts = 100000;
  std::uint64_t draw = 0;
  while (true) {
    TwirlOutcome out;
    out.state = psi0;
    bool restarted = false;
    for (int step = 0; step < sched.steps && !restarted; ++step) {
      const double shift = resolve_shift(sched, h, out.state);
      double tau = 0.0;
      if (sched.mode == ScheduleMode::Adaptive) {
        // Reuse the exact-mode selection rule for the duration choice.
        TwirlSchedule one = sched;
        one.steps = 1;
        TwirlOutcome probe = run_schedule(out.state, h, one);
        tau = probe.steps_taken[0].tau;
      } else {
        tau = sched.mode == ScheduleMode::Fixed ? sched.tau0 : sched.taus[step];
      }
      auto [next, probability] = twirl_once(out.state, h, tau, shift);
      ++result.attempts;
      if (result.attempts > kMaxAttempts) {
        throw ConvergenceFailureError("run_schedule_restart_on_one: attempt budget exhausted",
                                      energy_variance(h, out.state));
      }
      const double u = counter_uniform(plan.seed, kDomainRestart, draw++);
      if (u >= probability) {  // ancilla read 1
        restarted = true;
        break;
      }
      out.state = next;
      out.success_probability *= probability;
      out.energy_history.push_back(exact_expectation(h, out.state));
      out.variance_history.push_back(energy_variance(h, out.state));
      out.steps_taken.push_back(TwirlStep{tau, shift});
    }
    if (!restarted) {
      result.outcome = std::move(out);
      return result;
    }
  }
}

std::vector<TwirlRecipe> default_recipes(const PauliSum& h, int steps) {
  const int n = h.n_qubits;
  const Eigen::Index dim = Eigen::Index(1) << n;
  std::vector<std::pair<double, unsigned>> ranked;
  for (unsigned idx = 0; idx < static_cast<unsigned>(dim); ++idx) {
    const StateVector b = basis_state(n, idx);
    ranked.emplace_back(exact_expectation(h, b), idx);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& lhs, const auto& rhs) { return lhs.first < rhs.first; });

  std::vector<TwirlRecipe> recipes;
  recipes.reserve(dim);
  for (Eigen::Index rank = 0; rank < dim; ++rank) {
    const ShiftPolicy bias = rank < dim / 2 ? ShiftPolicy::BiasLow : ShiftPolicy::BiasHigh;
    recipes.push_back(TwirlRecipe{basis_state(n, ranked[rank].second),
                                  TwirlSchedule::adaptive(steps, bias)});
  }
  return recipes;
}

std::vector<TwirlOutcome> extract_all_eigenstates(const PauliSum& h,
                                                  const std::vector<TwirlRecipe>& recipes,
                                                  double variance_threshold) {
  std::vector<TwirlOutcome> outcomes;
  outcomes.reserve(recipes.size());
  for (std::size_t r = 0; r < recipes.size(); ++r) {
    TwirlOutcome out = run_schedule(recipes[r].initial, h, recipes[r].schedule);
    const double variance = out.variance_history.back();
    if (variance >= variance_threshold) {
      throw ConvergenceFailureError("extract_all_eigenstates: recipe " + std::to_string(r) +
                                        " reached variance " + std::to_string(variance) +
                                        ", threshold " + std::to_string(variance_threshold),
                                    variance);
    }
    outcomes.push_back(std::move(out));
  }
  std::stable_sort(outcomes.begin(), outcomes.end(), [](const auto& lhs, const auto& rhs) {
    return lhs.energy_history.back() < rhs.energy_history.back();
  });
  return outcomes;
}

double choose_fixed_tau(const std::vector<double>& eigenvalues, int target, double shift,
                        int grid_size, double tau_max) {
  if (target < 0 || target >= static_cast<int>(eigenvalues.size())) {
    throw BadIndexError("choose_fixed_tau: target index out of range");
  }
  double best_tau = tau_max / grid_size;
  double best_gap = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= grid_size; ++k) {
    const double tau = tau_max * k / grid_size;
    const double target_gain = std::abs(std::cos(0.5 * tau * (eigenvalues[target] - shift)));
    double worst_other = 0.0;
    for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
      if (static_cast<int>(j) == target) continue;
      worst_other =
          std::max(worst_other, std::abs(std::cos(0.5 * tau * (eigenvalues[j] - shift))));
    }
    const double gap = target_gain - worst_other;
    if (gap > best_gap) {
      best_gap = gap;
      best_tau = tau;
    }
  }
  return best_tau;
}

}  // namespace twirlkit
