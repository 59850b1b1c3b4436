#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "twirlkit/pauli.hpp"

namespace twirlkit {

/// Measured Pauli expectations for one state.
struct ExpectationDataset {
  struct Entry {
    PauliString pauli;
    double value = 0.0;
    std::uint64_t shots = 0;
  };
  std::vector<Entry> entries;

  /// CSV with header pauli_label,value,shots.
  static ExpectationDataset from_csv(const std::string& text);
  std::string to_csv() const;
};

/// Real unit vector fitted to expectation data.
struct RealStateEstimate {
  RealVector amplitudes;
  double residual = 0.0;  // root-mean-square expectation mismatch
  std::string sign_convention;
};

/// Least-squares reconstruction of a real unit vector from Pauli
/// expectations, by multi-start Gauss-Newton on the unit sphere. dim must be
/// 2 or 4. For dim 2 with Z and X data the implied relative phase must be
/// within 0.99 of +-1 (it is snapped to +-1), otherwise the data is not
/// consistent with a real vector and RankDeficientError is thrown; the same
/// error reports well-separated minimizers that fit equally well.
RealStateEstimate reconstruct_real_state(const ExpectationDataset& data, int dim);

enum class UnitarySource { Algebraic, Simulated };

/// Unitary that swaps eigenstates i and j and fixes the rest.
struct ExcitationUnitary {
  ComplexMatrix matrix;
  UnitarySource source = UnitarySource::Algebraic;
  std::pair<int, int> pair = {0, 1};
  double unitarization_deviation = 0.0;
};

/// |s_j><s_i| + |s_i><s_j| + sum over the remaining |s_k><s_k|, then
/// polar-projected to the nearest unitary. States must be mutually orthogonal
/// to within 0.05; for dim > 2 all dim states are required.
ExcitationUnitary build_excitation_unitary(const std::vector<RealVector>& states, int i, int j,
                                           UnitarySource source = UnitarySource::Algebraic);
ExcitationUnitary build_excitation_unitary(const std::vector<RealStateEstimate>& states, int i,
                                           int j, UnitarySource source = UnitarySource::Simulated);

/// <H> after applying u once and twice to the ground state.
struct RoundtripEnergies {
  double energy_after = 0.0;
  double energy_roundtrip = 0.0;
};
RoundtripEnergies excitation_roundtrip_check(const ExcitationUnitary& u, const StateVector& ground,
                                             const PauliSum& h);

}  // namespace twirlkit
