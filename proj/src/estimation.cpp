#include "twirlkit/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace twirlkit {

namespace {

constexpr int kRandomStarts = 8;
constexpr int kMaxIterations = 200;
constexpr double kResidualTieTol = 1e-6;
constexpr double kOrthogonalityTol = 0.05;

struct FitProblem {
  std::vector<Eigen::MatrixXd> observables;  // real parts; Y carries no signal on real states
  std::vector<double> targets;
  int dim = 0;
};

FitProblem make_problem(const ExpectationDataset& data, int dim) {
  FitProblem p;
  p.dim = dim;
  for (const auto& entry : data.entries) {
    if ((Eigen::Index(1) << entry.pauli.n_qubits()) != dim) {
      throw DimensionMismatchError("reconstruct_real_state: entry \"" + entry.pauli.label() +
                                   "\" does not match dimension " + std::to_string(dim));
    }
    // Measured averages can overshoot the physical range by shot noise.
    if (std::abs(entry.value) > 1.05) {
      throw InvalidParamsError("reconstruct_real_state: |" + entry.pauli.label() + "| = " +
                               std::to_string(entry.value) + " is far outside [-1, 1]");
    }
    p.observables.push_back(to_dense(entry.pauli).real());
    p.targets.push_back(entry.value);
  }
  return p;
}

Eigen::VectorXd residuals(const FitProblem& p, const Eigen::VectorXd& v) {
  Eigen::VectorXd r(p.observables.size());
  for (std::size_t k = 0; k < p.observables.size(); ++k) {
    r(static_cast<Eigen::Index>(k)) = v.dot(p.observables[k] * v) - p.targets[k];
  }
  return r;
}

double rms(const Eigen::VectorXd& r) {
  return r.size() == 0 ? 0.0 : std::sqrt(r.squaredNorm() / r.size());
}

// Gauss-Newton on the unit sphere with a small ridge; the quadratic model
// <v|A|v> is scale-fixed by renormalizing after every step.
Eigen::VectorXd refine(const FitProblem& p, Eigen::VectorXd v) {
  v.normalize();
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const Eigen::VectorXd r = residuals(p, v);
    Eigen::MatrixXd jac(p.observables.size(), p.dim);
    for (std::size_t k = 0; k < p.observables.size(); ++k) {
      const Eigen::VectorXd grad = 2.0 * (p.observables[k] * v - v.dot(p.observables[k] * v) * v);
      jac.row(static_cast<Eigen::Index>(k)) = grad.transpose();
    }
    Eigen::MatrixXd normal = jac.transpose() * jac;
    normal.diagonal().array() += 1e-12;
    const Eigen::VectorXd step = normal.ldlt().solve(-jac.transpose() * r);
    v = (v + step).normalized();
    if (step.norm() < 1e-14) break;
  }
  return v;
}

std::vector<Eigen::VectorXd> make_starts(const FitProblem& p) {
  // Spectral seed: the top eigenvector of sum_k m_k * Q_k aligns with the
  // data; every sign pattern of it is tried, plus fixed random directions.
  Eigen::MatrixXd guide = Eigen::MatrixXd::Zero(p.dim, p.dim);
  for (std::size_t k = 0; k < p.observables.size(); ++k) {
    guide += p.targets[k] * p.observables[k];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(guide);
  Eigen::VectorXd spectral = solver.eigenvectors().col(p.dim - 1).cwiseAbs();
  for (int i = 0; i < p.dim; ++i) spectral(i) = std::max(spectral(i), 0.05);
  spectral.normalize();

  std::vector<Eigen::VectorXd> starts;
  for (int pattern = 0; pattern < (1 << p.dim); ++pattern) {
    Eigen::VectorXd v = spectral;
    for (int i = 0; i < p.dim; ++i) {
      if ((pattern >> i) & 1) v(i) = -v(i);
    }
    starts.push_back(v);
  }
  std::mt19937 rng(0x7f15u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < kRandomStarts; ++k) {
    Eigen::VectorXd v(p.dim);
    for (int i = 0; i < p.dim; ++i) v(i) = gauss(rng);
    starts.push_back(v.normalized());
  }
  return starts;
}

// Dim-2 data carrying both Z and X pins the relative phase through
// cos(phi) = <X>/(2ab); anything materially away from +-1 cannot come from a
// real vector.
void check_dim2_phase(const ExpectationDataset& data) {
  bool have_z = false, have_x = false;
  double mz = 0.0, mx = 0.0;
  for (const auto& entry : data.entries) {
    if (entry.pauli.label() == "Z") {
      have_z = true;
      mz = entry.value;
    } else if (entry.pauli.label() == "X") {
      have_x = true;
      mx = entry.value;
    }
  }
  if (!have_z || !have_x) return;
  const double clamped = std::clamp(mz, -1.0, 1.0);
  const double a = std::sqrt((1.0 + clamped) / 2.0);
  const double b = std::sqrt((1.0 - clamped) / 2.0);
  if (2.0 * a * b < 1e-9) return;  // basis state, phase is immaterial
  const double cos_phi = mx / (2.0 * a * b);
  if (std::abs(cos_phi) <= 0.99) {
    throw RankDeficientError("reconstruct_real_state: implied cos(phase) " +
                             std::to_string(cos_phi) +
                             " is not within 0.99 of +-1; data is inconsistent with a real vector");
  }
}

// Global sign fix. dim 2 keeps the first significant component positive (the
// a, b >= 0 parametrization of the one-qubit solve); dim 4 makes the
// largest-magnitude component positive, and a relative magnitude tie (2%)
// resolves to the lowest index so that vectors of the (|00> -+ |11>) shape
// get a stable sign under noise.
std::string apply_sign_convention(Eigen::VectorXd& v) {
  if (v.size() == 2) {
    const double max_mag = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v(i)) >= 0.02 * max_mag) {
        if (v(i) < 0) v = -v;
        return "first-significant-component-positive";
      }
    }
    return "first-significant-component-positive";
  }
  const double max_mag = v.cwiseAbs().maxCoeff();
  Eigen::Index pivot = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= 0.98 * max_mag) {
      pivot = i;
      break;
    }
  }
  if (v(pivot) < 0) v = -v;
  return "largest-component-positive(tie->lowest-index)";
}

RealVector as_unit_real(const RealVector& v, const char* who) {
  const double norm = v.norm();
  if (norm < 1e-12) throw InvalidParamsError(std::string(who) + ": zero state vector");
  return v / norm;
}

}  // namespace

ExpectationDataset ExpectationDataset::from_csv(const std::string& text) {
  ExpectationDataset out;
  std::istringstream stream(text);
  std::string line;
  bool first = true;
  while (std::getline(stream, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (first && line.rfind("pauli_label", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    std::istringstream row(line);
    std::string label, value_text, shots_text;
    if (!std::getline(row, label, ',') || !std::getline(row, value_text, ',')) {
      throw ConfigError("ExpectationDataset: malformed row \"" + line + "\"");
    }
    std::getline(row, shots_text, ',');
    Entry entry;
    entry.pauli = PauliString::parse(label);
    try {
      entry.value = std::stod(value_text);
      entry.shots = shots_text.empty() ? 0 : std::stoull(shots_text);
    } catch (const std::exception&) {
      throw ConfigError("ExpectationDataset: malformed row \"" + line + "\"");
    }
    out.entries.push_back(std::move(entry));
  }
  return out;
}

std::string ExpectationDataset::to_csv() const {
  std::ostringstream out;
  out << "pauli_label,value,shots\n";
  char buffer[64];
  for (const auto& entry : entries) {
    std::snprintf(buffer, sizeof(buffer), "%.9g", entry.value);
    out << entry.pauli.label() << ',' << buffer << ',' << entry.shots << '\n';
  }
  return out.str();
}

RealStateEstimate reconstruct_real_state(const ExpectationDataset& data, int dim) {
  if (dim != 2 && dim != 4) {
    throw InvalidParamsError("reconstruct_real_state: dimension must be 2 or 4");
  }
  if (data.entries.empty()) {
    throw InvalidParamsError("reconstruct_real_state: empty dataset");
  }
  if (dim == 2) check_dim2_phase(data);

  const FitProblem problem = make_problem(data, dim);
  struct Candidate {
    Eigen::VectorXd v;
    double residual;
    std::size_t start;
  };
  std::vector<Candidate> minima;
  const std::vector<Eigen::VectorXd> starts = make_starts(problem);
  for (std::size_t s = 0; s < starts.size(); ++s) {
    Eigen::VectorXd v = refine(problem, starts[s]);
    minima.push_back(Candidate{v, rms(residuals(problem, v)), s});
  }
  std::stable_sort(minima.begin(), minima.end(), [](const Candidate& a, const Candidate& b) {
    return a.residual != b.residual ? a.residual < b.residual : a.start < b.start;
  });

  const Candidate& best = minima.front();
  for (const Candidate& c : minima) {
    if (c.residual > best.residual + kResidualTieTol) break;
    if (std::abs(c.v.dot(best.v)) < 0.999) {
      throw RankDeficientError(
          "reconstruct_real_state: sign-inequivalent minimizers fit equally well "
          "(residual " +
          std::to_string(best.residual) + "); the dataset does not determine the state");
    }
  }

  RealStateEstimate out;
  out.amplitudes = best.v;
  out.residual = best.residual;
  out.sign_convention = apply_sign_convention(out.amplitudes);
  return out;
}

ExcitationUnitary build_excitation_unitary(const std::vector<RealVector>& states, int i, int j,
                                           UnitarySource source) {
  if (states.empty()) throw MissingStatesError("build_excitation_unitary: no states supplied");
  const Eigen::Index dim = states[0].size();
  if (i == j || i < 0 || j < 0 || i >= static_cast<int>(states.size()) ||
      j >= static_cast<int>(states.size())) {
    throw BadIndexError("build_excitation_unitary: pair indices invalid");
  }
  if (dim > 2 && static_cast<Eigen::Index>(states.size()) < dim) {
    throw MissingStatesError("build_excitation_unitary: dimension " + std::to_string(dim) +
                             " needs all " + std::to_string(dim) + " states, got " +
                             std::to_string(states.size()));
  }

  std::vector<RealVector> unit;
  unit.reserve(states.size());
  for (const RealVector& s : states) {
    if (s.size() != dim) {
      throw DimensionMismatchError("build_excitation_unitary: inconsistent state dimensions");
    }
    unit.push_back(as_unit_real(s, "build_excitation_unitary"));
  }
  for (std::size_t a = 0; a < unit.size(); ++a) {
    for (std::size_t b = a + 1; b < unit.size(); ++b) {
      const double dot = std::abs(unit[a].dot(unit[b]));
      if (dot > kOrthogonalityTol) {
        throw NotOrthogonalError("build_excitation_unitary: states " + std::to_string(a) +
                                 " and " + std::to_string(b) + " overlap by " +
                                 std::to_string(dot));
      }
    }
  }

  Eigen::MatrixXd raw = unit[j] * unit[i].transpose() + unit[i] * unit[j].transpose();
  for (std::size_t k = 0; k < unit.size(); ++k) {
    if (static_cast<int>(k) == i || static_cast<int>(k) == j) continue;
    raw += unit[k] * unit[k].transpose();
  }

  const PolarResult polar = polar_unitarize(raw.cast<std::complex<double>>());
  ExcitationUnitary out;
  out.matrix = polar.unitary_factor;
  out.source = source;
  out.pair = {i, j};
  out.unitarization_deviation = polar.deviation_norm;
  return out;
}

ExcitationUnitary build_excitation_unitary(const std::vector<RealStateEstimate>& states, int i,
                                           int j, UnitarySource source) {
  std::vector<RealVector> vectors;
  vectors.reserve(states.size());
  for (const RealStateEstimate& s : states) vectors.push_back(s.amplitudes);
  return build_excitation_unitary(vectors, i, j, source);
}

RoundtripEnergies excitation_roundtrip_check(const ExcitationUnitary& u, const StateVector& ground,
                                             const PauliSum& h) {
  if (u.matrix.rows() != ground.dim()) {
    throw DimensionMismatchError("excitation_roundtrip_check: unitary dimension mismatch");
  }
  std::vector<int> targets(ground.n_qubits);
  for (int q = 0; q < ground.n_qubits; ++q) targets[q] = q;
  const StateVector once = apply_unitary(ground, u.matrix, targets);
  const StateVector twice = apply_unitary(once, u.matrix, targets);
  return RoundtripEnergies{exact_expectation(h, once), exact_expectation(h, twice)};
}

}  // namespace twirlkit
