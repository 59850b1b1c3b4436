#pragma once

#include <cstdint>
#include <utility>

#include "twirlkit/pauli.hpp"
#include "twirlkit/statevector.hpp"

namespace twirlkit {

/// Shot budget plus reproducibility contract. Shots are split into `streams`
/// contiguous partitions that may execute concurrently; every shot draws its
/// randomness from a counter generator keyed on (seed, global shot index), and
/// partition results are integer counts, so outputs are identical for any
/// stream count and any scheduling.
struct ShotPlan {
  std::uint64_t shots = 1'000'000;
  std::uint64_t seed = 0;
  int streams = 1;
};

struct SampledExpectation {
  double value = 0.0;
  std::uint64_t shots_used = 0;
  double std_error = 0.0;  // sqrt(1 - value^2) / sqrt(shots) for a +-1 estimator
};

/// Conditional statistics of a Pauli observable binned by one ancilla bit.
struct ConditionalSamples {
  SampledExpectation outcome0;
  SampledExpectation outcome1;
  bool bin0_empty = false;
  bool bin1_empty = false;
};

/// splitmix64 finalizer; the building block for all shot randomness.
std::uint64_t mix64(std::uint64_t x);

/// Uniform double in [0, 1) for one (seed, domain, counter) triple.
double counter_uniform(std::uint64_t seed, std::uint64_t domain, std::uint64_t counter);

/// Seed for an independent sub-stream (repeat runs, per-term sampling).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t domain, std::uint64_t index);

/// Measures a Pauli string by basis rotation and projective sampling: H for X
/// factors, then S-adjoint followed by H for Y factors, nothing for Z, skip
/// for identity; the +-1 parity over non-identity slots is averaged.
/// Deterministic for a fixed plan. Throws DimensionMismatchError.
SampledExpectation sample_pauli(const StateVector& psi, const PauliString& q,
                                const ShotPlan& plan);

/// One joint sampling pass over the full register; each shot's parity is
/// binned by the ancilla bit. `q` acts on the non-ancilla qubits in index
/// order. Empty bins are flagged, with value 0 and no shots.
ConditionalSamples sample_conditional_pauli(const StateVector& psi, int ancilla,
                                            const PauliString& q, const ShotPlan& plan);

}  // namespace twirlkit
