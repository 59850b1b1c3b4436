#include "twirlkit/sampling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <vector>

namespace twirlkit {

namespace {

constexpr std::uint64_t kDomainShot = 0x73686f74u;  // tags shot draws

struct BinCounts {
  std::uint64_t plus0 = 0, minus0 = 0, plus1 = 0, minus1 = 0;

  BinCounts& operator+=(const BinCounts& other) {
    plus0 += other.plus0;
    minus0 += other.minus0;
    plus1 += other.plus1;
    minus1 += other.minus1;
    return *this;
  }
};

// Cumulative distribution over basis indices; the last entry is forced to 1
// so the lookup can never run off the end.
std::vector<double> cumulative_probabilities(const StateVector& psi) {
  std::vector<double> cdf(psi.dim());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < psi.dim(); ++i) {
    acc += std::norm(psi.amplitudes(i));
    cdf[i] = acc;
  }
  cdf.back() = 1.0;
  return cdf;
}

unsigned sample_index(const std::vector<double>& cdf, double u) {
  return static_cast<unsigned>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
}

// Rotates every non-identity, non-Z slot of q into the Z basis. bit_for_slot
// maps q's k-th factor to an index bit of the state.
StateVector rotate_to_eigenbasis(const StateVector& psi, const PauliString& q,
                                 const std::vector<int>& qubit_for_slot) {
  ComplexMatrix hadamard(2, 2);
  hadamard << 1, 1, 1, -1;
  hadamard /= std::sqrt(2.0);
  ComplexMatrix s_adjoint(2, 2);
  s_adjoint << 1, 0, 0, std::complex<double>(0.0, -1.0);

  StateVector rotated = psi;
  for (int slot = 0; slot < q.n_qubits(); ++slot) {
    switch (q.factors[slot]) {
      case PauliOp::I:
      case PauliOp::Z:
        break;
      case PauliOp::X:
        rotated = apply_unitary(rotated, hadamard, {qubit_for_slot[slot]});
        break;
      case PauliOp::Y:
        rotated = apply_unitary(rotated, s_adjoint, {qubit_for_slot[slot]});
        rotated = apply_unitary(rotated, hadamard, {qubit_for_slot[slot]});
        break;
    }
  }
  return rotated;
}

unsigned parity_mask(const StateVector& psi, const PauliString& q,
                     const std::vector<int>& qubit_for_slot) {
  unsigned mask = 0;
  for (int slot = 0; slot < q.n_qubits(); ++slot) {
    if (q.factors[slot] != PauliOp::I) {
      mask |= 1u << (psi.n_qubits - 1 - qubit_for_slot[slot]);
    }
  }
  return mask;
}

BinCounts count_partition(const std::vector<double>& cdf, unsigned parity_bits, int ancilla_shift,
                          std::uint64_t seed, std::uint64_t begin, std::uint64_t end) {
  BinCounts counts;
  for (std::uint64_t i = begin; i < end; ++i) {
    const double u = counter_uniform(seed, kDomainShot, i);
    const unsigned idx = sample_index(cdf, u);
    const bool minus = std::popcount(idx & parity_bits) & 1;
    const bool anc = ancilla_shift >= 0 && ((idx >> ancilla_shift) & 1u);
    if (anc) {
      (minus ? counts.minus1 : counts.plus1) += 1;
    } else {
      (minus ? counts.minus0 : counts.plus0) += 1;
    }
  }
  return counts;
}

BinCounts run_shots(const std::vector<double>& cdf, unsigned parity_bits, int ancilla_shift,
                    const ShotPlan& plan) {
  if (plan.shots < 1) throw InvalidParamsError("ShotPlan: need at least one shot");
  if (plan.streams < 1) throw InvalidParamsError("ShotPlan: need at least one stream");
  const std::uint64_t streams = std::min<std::uint64_t>(plan.streams, plan.shots);
  const std::uint64_t base = plan.shots / streams;
  const std::uint64_t extra = plan.shots % streams;

  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
  std::uint64_t cursor = 0;
  for (std::uint64_t k = 0; k < streams; ++k) {
    const std::uint64_t size = base + (k < extra ? 1 : 0);
    ranges.emplace_back(cursor, cursor + size);
    cursor += size;
  }

  BinCounts total;
  if (streams == 1) {
    total = count_partition(cdf, parity_bits, ancilla_shift, plan.seed, 0, plan.shots);
  } else {
    std::vector<std::future<BinCounts>> futures;
    futures.reserve(ranges.size());
    for (const auto& [begin, end] : ranges) {
      futures.push_back(std::async(std::launch::async, count_partition, std::cref(cdf),
                                   parity_bits, ancilla_shift, plan.seed, begin, end));
    }
    for (auto& f : futures) total += f.get();  // reduced in partition order
  }
  return total;
}

SampledExpectation expectation_from_counts(std::uint64_t plus, std::uint64_t minus) {
  SampledExpectation out;
  out.shots_used = plus + minus;
  if (out.shots_used == 0) return out;
  out.value = (static_cast<double>(plus) - static_cast<double>(minus)) /
              static_cast<double>(out.shots_used);
  out.std_error =
      std::sqrt(std::max(0.0, 1.0 - out.value * out.value) / static_cast<double>(out.shots_used));
  return out;
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double counter_uniform(std::uint64_t seed, std::uint64_t domain, std::uint64_t counter) {
  const std::uint64_t x = mix64(seed ^ mix64(domain ^ mix64(counter)));
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t domain, std::uint64_t index) {
  return mix64(seed ^ mix64(domain ^ mix64(index)));
}

SampledExpectation sample_pauli(const StateVector& psi, const PauliString& q,
                                const ShotPlan& plan) {
  if (q.n_qubits() != psi.n_qubits) {
    throw DimensionMismatchError("sample_pauli: observable acts on " +
                                 std::to_string(q.n_qubits()) + " qubits, state has " +
                                 std::to_string(psi.n_qubits));
  }
  std::vector<int> qubit_for_slot(q.n_qubits());
  for (int k = 0; k < q.n_qubits(); ++k) qubit_for_slot[k] = k;

  const StateVector rotated = rotate_to_eigenbasis(psi, q, qubit_for_slot);
  const std::vector<double> cdf = cumulative_probabilities(rotated);
  const unsigned mask = parity_mask(psi, q, qubit_for_slot);
  const BinCounts counts = run_shots(cdf, mask, /*ancilla_shift=*/-1, plan);
  return expectation_from_counts(counts.plus0, counts.minus0);
}

ConditionalSamples sample_conditional_pauli(const StateVector& psi, int ancilla,
                                            const PauliString& q, const ShotPlan& plan) {
  if (ancilla < 0 || ancilla >= psi.n_qubits) {
    throw BadTargetsError("sample_conditional_pauli: ancilla index out of range");
  }
  if (q.n_qubits() != psi.n_qubits - 1) {
    throw DimensionMismatchError("sample_conditional_pauli: observable must act on the " +
                                 std::to_string(psi.n_qubits - 1) + " non-ancilla qubits");
  }
  std::vector<int> qubit_for_slot;
  for (int qb = 0; qb < psi.n_qubits; ++qb) {
    if (qb != ancilla) qubit_for_slot.push_back(qb);
  }

  const StateVector rotated = rotate_to_eigenbasis(psi, q, qubit_for_slot);
  const std::vector<double> cdf = cumulative_probabilities(rotated);
  const unsigned mask = parity_mask(psi, q, qubit_for_slot);
  const int ancilla_shift = psi.n_qubits - 1 - ancilla;
  const BinCounts counts = run_shots(cdf, mask, ancilla_shift, plan);

  ConditionalSamples out;
  out.outcome0 = expectation_from_counts(counts.plus0, counts.minus0);
  out.outcome1 = expectation_from_counts(counts.plus1, counts.minus1);
  out.bin0_empty = out.outcome0.shots_used == 0;
  out.bin1_empty = out.outcome1.shots_used == 0;
  return out;
}

}  // namespace twirlkit
