#include "twirlkit/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace twirlkit {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDomainRow = 0x726f7773u;
constexpr std::uint64_t kDomainDiagonal = 0x64696167u;

// Exactly-zero algebraic values come out of the emulation as ~1e-17 dust.
double flush_tiny(double value) { return std::abs(value) < 1e-12 ? 0.0 : value; }

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream stream(s);
  std::string item;
  while (std::getline(stream, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double out = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config: key \"" + key + "\" has non-numeric value \"" + value + "\"");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    if (!value.empty() && value[0] == '-') throw std::invalid_argument(value);
    std::size_t used = 0;
    const std::uint64_t out = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config: key \"" + key + "\" needs a non-negative integer, got \"" + value +
                      "\"");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string v = lower(value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: key \"" + key + "\" has non-boolean value \"" + value + "\"");
}

const std::vector<std::string> kSingleQubitObs = {"X", "Z", "Y"};
const std::vector<std::string> kH2CircuitObs = {"ZZ", "ZI", "IZ", "XX", "XI", "YY", "YI"};
const std::vector<std::string> kH2DiagonalObs = {"ZZ", "ZI", "IZ", "XX", "ZX", "XZ"};

std::string model_name(const ModelParams& model) {
  if (model.kind == ModelKind::SingleQubit) {
    return "single_qubit(J=" + format_double(model.j) + ")";
  }
  return "h2";
}

StateVector reference_ground(const ModelParams& model) {
  const ReferenceEigensystem ref = reference_eigensystem(model);
  return state_from_amplitudes(model.kind == ModelKind::SingleQubit ? 1 : 2,
                               ref.eigenvectors.col(0));
}

StateVector lowest_energy_basis_state(const PauliSum& h) {
  const Eigen::Index dim = Eigen::Index(1) << h.n_qubits;
  unsigned best = 0;
  double best_energy = std::numeric_limits<double>::infinity();
  for (unsigned idx = 0; idx < static_cast<unsigned>(dim); ++idx) {
    const double e = exact_expectation(h, basis_state(h.n_qubits, idx));
    if (e < best_energy) {
      best_energy = e;
      best = idx;
    }
  }
  return basis_state(h.n_qubits, best);
}

StateVector twirled_ground(const PauliSum& h, int steps = 4) {
  const TwirlSchedule schedule = TwirlSchedule::adaptive(steps, ShiftPolicy::BiasLow);
  return run_schedule(lowest_energy_basis_state(h), h, schedule).state;
}

struct CircuitTableSpec {
  ModelParams model;
  CircuitKind kind = CircuitKind::RealPart;
  std::vector<std::string> observables;
  ExcitationUnitary unitary;
  int repeats = 1;
  std::uint64_t default_shots = 1'000'000;
};

std::vector<TableRow> run_circuit_table(const CircuitTableSpec& spec,
                                        const TableRunOptions& options) {
  const std::uint64_t shots = options.shots.value_or(spec.default_shots);
  const PauliSum h = build_model(spec.model);
  const ExcitationUnitary exact_unitary = algebraic_excitation_unitary(spec.model);
  const StateVector exact_ground = reference_ground(spec.model);
  const StateVector ground = twirled_ground(h);

  std::vector<TableRow> rows;
  std::uint64_t row_index = 0;
  for (const std::string& label : spec.observables) {
    const PauliString q = PauliString::parse(label);
    TableRow row;
    row.pauli = label;
    row.shots = options.exact ? 0 : shots;
    row.repeats = options.exact ? 1 : spec.repeats;
    row.seed = options.seed;

    SuperpositionRun algebraic_run{spec.kind, exact_ground, exact_unitary, q, std::nullopt};
    row.algebraic = flush_tiny(run_superposition(algebraic_run).difference);

    if (options.exact) {
      SuperpositionRun run{spec.kind, ground, spec.unitary, q, std::nullopt};
      row.simulated = run_superposition(run).difference;
    } else {
      ShotPlan plan{shots, derive_seed(options.seed, kDomainRow, row_index), options.streams};
      SuperpositionRun run{spec.kind, ground, spec.unitary, q, plan};
      if (spec.repeats >= 2) {
        const RepeatedRuns repeated = repeated_runs_ci(run, spec.repeats);
        row.simulated = repeated.mean_difference;
        row.ci95 = repeated.ci95_halfwidth;
      } else {
        const MatrixElementResult result = run_superposition(run);
        row.simulated = result.difference;
        const double se0 = std::sqrt(std::max(0.0, 1.0 - result.cond_expectation_0 *
                                                          result.cond_expectation_0) /
                                     std::max<std::uint64_t>(result.shots_0, 1));
        const double se1 = std::sqrt(std::max(0.0, 1.0 - result.cond_expectation_1 *
                                                          result.cond_expectation_1) /
                                     std::max<std::uint64_t>(result.shots_1, 1));
        row.ci95 = 1.96 * std::sqrt(se0 * se0 + se1 * se1);
      }
    }
    rows.push_back(std::move(row));
    ++row_index;
  }
  return rows;
}

std::vector<TableRow> run_diagonal_table(const TableRunOptions& options) {
  const std::uint64_t shots = options.shots.value_or(1'000'000);
  const ModelParams model = ModelParams::h2();
  const PauliSum h = build_model(model);
  const SpectralOracle oracle = exact_eigenpairs(h);
  const std::vector<TwirlOutcome> extracted =
      extract_all_eigenstates(h, default_recipes(h, 6), 1e-4);

  std::vector<TableRow> rows;
  for (std::size_t state = 0; state < extracted.size(); ++state) {
    std::uint64_t obs_index = 0;
    for (const std::string& label : kH2DiagonalObs) {
      const PauliString q = PauliString::parse(label);
      TableRow row;
      row.state = "E" + std::to_string(state);
      row.pauli = label;
      row.algebraic = exact_matrix_element(oracle, static_cast<int>(state),
                                           static_cast<int>(state), q)
                          .real();
      row.seed = options.seed;
      row.repeats = 1;
      if (options.exact) {
        row.simulated = exact_expectation(q, extracted[state].state);
        row.shots = 0;
      } else {
        ShotPlan plan{shots,
                      derive_seed(options.seed, kDomainDiagonal, state * 16 + obs_index),
                      options.streams};
        const SampledExpectation sampled = sample_pauli(extracted[state].state, q, plan);
        row.simulated = sampled.value;
        row.ci95 = 1.96 * sampled.std_error;
        row.shots = shots;
      }
      rows.push_back(std::move(row));
      ++obs_index;
    }
  }
  return rows;
}

/// The measurement-only pipeline: extract all eigenstates, fit them from
/// sampled diagonal expectations, assemble the excitation unitary, then run
/// the interference circuits on the extracted ground state.
struct EndToEndParts {
  StateVector ground;
  ExcitationUnitary unitary;
  std::vector<RealStateEstimate> estimates;
};

EndToEndParts build_end_to_end(const ModelParams& model, std::uint64_t reconstruction_shots,
                               std::uint64_t seed, int streams) {
  const PauliSum h = build_model(model);
  const std::vector<TwirlOutcome> extracted =
      extract_all_eigenstates(h, default_recipes(h, 8), 1e-6);

  const std::vector<std::string>& labels =
      model.kind == ModelKind::H2 ? kH2DiagonalObs : kSingleQubitObs;
  const int dim = model.kind == ModelKind::H2 ? 4 : 2;

  EndToEndParts parts;
  parts.ground = extracted.front().state;
  for (std::size_t state = 0; state < extracted.size(); ++state) {
    ExpectationDataset dataset;
    std::uint64_t obs_index = 0;
    for (const std::string& label : labels) {
      const PauliString q = PauliString::parse(label);
      if (model.kind == ModelKind::SingleQubit && q.label() == "Y") continue;
      ShotPlan plan{reconstruction_shots,
                    derive_seed(seed, kDomainDiagonal, state * 16 + obs_index), streams};
      const SampledExpectation sampled = sample_pauli(extracted[state].state, q, plan);
      dataset.entries.push_back({q, sampled.value, sampled.shots_used});
      ++obs_index;
    }
    parts.estimates.push_back(reconstruct_real_state(dataset, dim));
  }
  parts.unitary = build_excitation_unitary(parts.estimates, 0, 1, UnitarySource::Simulated);
  return parts;
}

std::vector<TableRow> run_end_to_end_table(CircuitKind kind, const TableRunOptions& options) {
  const std::uint64_t shots = options.shots.value_or(1'000'000);
  const int repeats = 10;
  // The eigenvector fits get the same total budget as the circuit stage.
  const EndToEndParts parts =
      build_end_to_end(ModelParams::h2(), shots * repeats,
                       derive_seed(options.seed, kDomainRow, 0x65326531u), options.streams);
  const ModelParams model = ModelParams::h2();

  const ExcitationUnitary exact_unitary = algebraic_excitation_unitary(model);
  const StateVector exact_ground = reference_ground(model);

  std::vector<TableRow> rows;
  std::uint64_t row_index = 0;
  for (const std::string& label : kH2CircuitObs) {
    const PauliString q = PauliString::parse(label);
    TableRow row;
    row.pauli = label;
    row.seed = options.seed;

    SuperpositionRun algebraic_run{kind, exact_ground, exact_unitary, q, std::nullopt};
    row.algebraic = flush_tiny(run_superposition(algebraic_run).difference);

    if (options.exact) {
      SuperpositionRun run{kind, parts.ground, parts.unitary, q, std::nullopt};
      row.simulated = run_superposition(run).difference;
      row.shots = 0;
      row.repeats = 1;
    } else {
      ShotPlan plan{shots, derive_seed(options.seed, kDomainRow, row_index), options.streams};
      SuperpositionRun run{kind, parts.ground, parts.unitary, q, plan};
      const RepeatedRuns repeated = repeated_runs_ci(run, repeats);
      row.simulated = repeated.mean_difference;
      row.ci95 = repeated.ci95_halfwidth;
      row.shots = shots;
      row.repeats = repeats;
    }
    rows.push_back(std::move(row));
    ++row_index;
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& doc) {
  if (!doc.contains("matrix") || !doc["matrix"].is_array()) {
    throw ConfigError("unitary file: expected a top-level \"matrix\" array");
  }
  const auto& rows = doc["matrix"];
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  ComplexMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ConfigError("unitary file: matrix must be square");
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto& cell = row[static_cast<std::size_t>(c)];
      if (cell.is_number()) {
        m(r, c) = cell.get<double>();
      } else if (cell.is_array() && cell.size() == 2) {
        m(r, c) = std::complex<double>(cell[0].get<double>(), cell[1].get<double>());
      } else {
        throw ConfigError("unitary file: entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

json row_to_json(const TableRow& row) {
  json j;
  if (!row.state.empty()) j["state"] = row.state;
  j["pauli"] = row.pauli;
  j["algebraic"] = row.algebraic;
  j["simulated"] = row.simulated;
  j["ci95"] = row.ci95;
  j["shots"] = row.shots;
  j["repeats"] = row.repeats;
  j["seed"] = row.seed;
  return j;
}

json superpose_row_to_json(const SuperposeRow& row) {
  json j;
  j["model"] = row.model;
  j["circuit_kind"] = row.circuit_kind;
  j["observable"] = row.observable;
  j["mean"] = row.mean;
  j["ci95"] = row.ci95;
  j["shots"] = row.shots;
  j["repeats"] = row.repeats;
  j["seed"] = row.seed;
  return j;
}

}  // namespace

TableId parse_table_id(const std::string& text) {
  static const std::vector<std::pair<std::string, TableId>> kNames = {
      {"I", TableId::I},   {"II", TableId::II},   {"III", TableId::III}, {"IV", TableId::IV},
      {"V", TableId::V},   {"VI", TableId::VI},   {"VII", TableId::VII}, {"VIII", TableId::VIII},
      {"IX", TableId::IX}, {"X", TableId::X},     {"XI", TableId::XI}};
  std::string upper = text;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (const auto& [name, id] : kNames) {
    if (name == upper) return id;
  }
  throw ConfigError("unknown table id \"" + text + "\" (expected I..XI)");
}

std::string table_id_name(TableId id) {
  static const char* kNames[] = {"I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI"};
  return kNames[static_cast<int>(id)];
}

ExcitationUnitary pinned_excitation_unitary(const ComplexMatrix& matrix, UnitarySource source) {
  const PolarResult polar = polar_unitarize(matrix);
  ExcitationUnitary out;
  out.matrix = polar.unitary_factor;
  out.source = source;
  out.unitarization_deviation = polar.deviation_norm;
  return out;
}

ExcitationUnitary algebraic_excitation_unitary(const ModelParams& model, int i, int j) {
  const ReferenceEigensystem ref = reference_eigensystem(model);
  std::vector<RealVector> states;
  states.reserve(ref.eigenvectors.cols());
  for (Eigen::Index c = 0; c < ref.eigenvectors.cols(); ++c) {
    states.push_back(ref.eigenvectors.col(c).real());
  }
  return build_excitation_unitary(states, i, j, UnitarySource::Algebraic);
}

const ComplexMatrix& fitted_unitary_j1() {
  static const ComplexMatrix m = [] {
    ComplexMatrix out(2, 2);
    out << 0.70731675, -0.70689675, -0.70689675, -0.70731675;
    return out;
  }();
  return m;
}

const ComplexMatrix& fitted_unitary_j2() {
  static const ComplexMatrix m = [] {
    ComplexMatrix out(2, 2);
    out << 0.44748977, -0.89428905, -0.89428905, -0.44748977;
    return out;
  }();
  return m;
}

const ComplexMatrix& unitarized_algebraic_unitary_h2() {
  static const ComplexMatrix m = [] {
    ComplexMatrix out(4, 4);
    out << 0.49999944, -0.07401925, 0.70322198, 0.500000056,
        -0.07401925, 0.98904231, 0.10410381, 0.07401925,
        0.70322198, 0.104104381, 0.01095882, -0.70322198,
        0.500000056, 0.07401925, -0.70322198, 0.49999944;
    return out;
  }();
  return m;
}

std::vector<TableRow> run_table(TableId id, const TableRunOptions& options) {
  CircuitTableSpec spec;
  switch (id) {
    case TableId::I:
    case TableId::II:
      spec.model = ModelParams::single_qubit(1.0);
      spec.kind = id == TableId::I ? CircuitKind::RealPart : CircuitKind::ImagPart;
      spec.observables = kSingleQubitObs;
      spec.unitary = algebraic_excitation_unitary(spec.model);
      return run_circuit_table(spec, options);
    case TableId::III:
    case TableId::IV:
      spec.model = ModelParams::single_qubit(1.0);
      spec.kind = id == TableId::III ? CircuitKind::RealPart : CircuitKind::ImagPart;
      spec.observables = kSingleQubitObs;
      spec.unitary = pinned_excitation_unitary(fitted_unitary_j1(), UnitarySource::Simulated);
      return run_circuit_table(spec, options);
    case TableId::V:
    case TableId::VI:
      spec.model = ModelParams::single_qubit(2.0);
      spec.kind = id == TableId::V ? CircuitKind::RealPart : CircuitKind::ImagPart;
      spec.observables = kSingleQubitObs;
      spec.unitary = pinned_excitation_unitary(fitted_unitary_j2(), UnitarySource::Simulated);
      return run_circuit_table(spec, options);
    case TableId::VII:
    case TableId::VIII:
      spec.model = ModelParams::h2();
      spec.kind = id == TableId::VII ? CircuitKind::RealPart : CircuitKind::ImagPart;
      spec.observables = kH2CircuitObs;
      spec.unitary =
          pinned_excitation_unitary(unitarized_algebraic_unitary_h2(), UnitarySource::Algebraic);
      return run_circuit_table(spec, options);
    case TableId::IX:
      return run_diagonal_table(options);
    case TableId::X:
      return run_end_to_end_table(CircuitKind::RealPart, options);
    case TableId::XI:
      return run_end_to_end_table(CircuitKind::ImagPart, options);
  }
  throw ConfigError("run_table: unknown table id");
}

double table_check_tolerance(TableId id, const TableRow& row, std::uint64_t shots) {
  double base = 0.0;
  switch (id) {
    case TableId::I:
    case TableId::II:
    case TableId::III:
    case TableId::IV:
      base = 5e-3;
      break;
    case TableId::V:
    case TableId::VI:
    case TableId::VII:
    case TableId::VIII:
      base = 6e-3;
      break;
    case TableId::IX:
      base = 1e-2;
      break;
    case TableId::X:
    case TableId::XI:
      base = std::abs(row.algebraic) > 0.1 ? 2.5e-2 : 5e-3;
      break;
  }
  const double scale = shots > 0 && shots < 1'000'000
                           ? std::sqrt(1'000'000.0 / static_cast<double>(shots))
                           : 1.0;
  return base * scale;
}

bool check_table_rows(TableId id, const std::vector<TableRow>& rows, std::uint64_t shots,
                      std::string* failure_message) {
  for (const TableRow& row : rows) {
    const double tolerance = table_check_tolerance(id, row, shots);
    const double error = std::abs(row.simulated - row.algebraic);
    if (error > tolerance) {
      if (failure_message != nullptr) {
        *failure_message = "table " + table_id_name(id) + " " +
                           (row.state.empty() ? row.pauli : row.state + ":" + row.pauli) +
                           ": |" + format_double(row.simulated) + " - " +
                           format_double(row.algebraic) + "| = " + format_double(error) +
                           " exceeds " + format_double(tolerance);
      }
      return false;
    }
  }
  return true;
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig config;
  bool model_seen = false;
  std::istringstream stream(text);
  std::string line;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_number) +
                        ": expected key = value, got \"" + line + "\"");
    }
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config line " + std::to_string(line_number) + ": empty key or value");
    }

    if (key == "model.kind") {
      const std::string kind = lower(value);
      if (kind == "single_qubit") {
        config.model.kind = ModelKind::SingleQubit;
      } else if (kind == "h2") {
        config.model.kind = ModelKind::H2;
      } else {
        throw ConfigError("config: model.kind must be single_qubit or h2, got \"" + value + "\"");
      }
      model_seen = true;
    } else if (key == "model.j") {
      config.model.j = parse_double(key, value);
    } else if (key == "model.a") {
      const std::vector<std::string> parts = split(value, ',');
      if (parts.size() != 5) {
        throw ConfigError("config: model.a needs 5 comma-separated values");
      }
      for (int k = 0; k < 5; ++k) config.model.a[k] = parse_double(key, parts[k]);
    } else if (key == "pipeline") {
      const std::string p = lower(value);
      if (p == "eigenstate") {
        config.pipeline = PipelineKind::Eigenstate;
      } else if (p == "reconstruct") {
        config.pipeline = PipelineKind::Reconstruct;
      } else if (p == "superpose") {
        config.pipeline = PipelineKind::Superpose;
      } else if (p == "table") {
        config.pipeline = PipelineKind::Table;
      } else {
        throw ConfigError("config: unknown pipeline \"" + value + "\"");
      }
    } else if (key == "table") {
      config.table = value;
    } else if (key == "schedule.mode") {
      const std::string m = lower(value);
      if (m == "fixed") {
        config.schedule.mode = ScheduleMode::Fixed;
      } else if (m == "adaptive") {
        config.schedule.mode = ScheduleMode::Adaptive;
      } else if (m == "explicit") {
        config.schedule.mode = ScheduleMode::Explicit;
      } else {
        throw ConfigError("config: unknown schedule.mode \"" + value + "\"");
      }
    } else if (key == "schedule.steps") {
      config.schedule.steps = static_cast<int>(parse_u64(key, value));
    } else if (key == "schedule.tau0") {
      config.schedule.tau0 = parse_double(key, value);
    } else if (key == "schedule.taus") {
      config.schedule.taus.clear();
      for (const std::string& part : split(value, ',')) {
        config.schedule.taus.push_back(parse_double(key, part));
      }
      config.schedule.steps = static_cast<int>(config.schedule.taus.size());
    } else if (key == "schedule.grid") {
      config.schedule.adaptive_grid.clear();
      for (const std::string& part : split(value, ',')) {
        config.schedule.adaptive_grid.push_back(parse_double(key, part));
      }
    } else if (key == "schedule.sampled") {
      config.schedule_sampled = parse_bool(key, value);
    } else if (key == "schedule.shift") {
      const std::string s = lower(value);
      if (s == "none") {
        config.schedule.shift_policy = ShiftPolicy::None;
      } else if (s == "tracked") {
        config.schedule.shift_policy = ShiftPolicy::TrackedEnergy;
      } else if (s == "bias_low") {
        config.schedule.shift_policy = ShiftPolicy::BiasLow;
      } else if (s == "bias_high") {
        config.schedule.shift_policy = ShiftPolicy::BiasHigh;
      } else {
        config.schedule.shift_policy = ShiftPolicy::FixedValue;
        config.schedule.shift_value = parse_double(key, value);
      }
    } else if (key == "initial") {
      config.initial_state = static_cast<unsigned>(parse_u64(key, value));
    } else if (key == "shots") {
      config.shots = parse_u64(key, value);
      if (config.shots < 1) throw ConfigError("config: shots must be at least 1");
    } else if (key == "repeats") {
      config.repeats = static_cast<int>(parse_u64(key, value));
      if (config.repeats < 1) throw ConfigError("config: repeats must be at least 1");
    } else if (key == "seed") {
      config.seed = parse_u64(key, value);
    } else if (key == "streams") {
      config.streams = static_cast<int>(parse_u64(key, value));
      if (config.streams < 1) throw ConfigError("config: streams must be at least 1");
    } else if (key == "exact") {
      config.exact = parse_bool(key, value);
    } else if (key == "observables") {
      config.observables.clear();
      for (const std::string& token : split(value, ',')) {
        try {
          config.observables.push_back(PauliString::parse(token));
        } catch (const InvalidParamsError&) {
          throw ConfigError("config: malformed observable label \"" + token + "\"");
        }
      }
    } else if (key == "unitary.source") {
      const std::string s = lower(value);
      if (s == "algebraic") {
        config.unitary_source = ConfigUnitarySource::Algebraic;
      } else if (s == "simulated") {
        config.unitary_source = ConfigUnitarySource::Simulated;
      } else if (s == "file") {
        config.unitary_source = ConfigUnitarySource::File;
      } else {
        throw ConfigError("config: unknown unitary.source \"" + value + "\"");
      }
    } else if (key == "unitary.file") {
      config.unitary_file = value;
    } else if (key == "ground.source") {
      const std::string s = lower(value);
      if (s == "twirl") {
        config.ground_source = GroundSource::Twirl;
      } else if (s == "exact") {
        config.ground_source = GroundSource::Exact;
      } else {
        throw ConfigError("config: unknown ground.source \"" + value + "\"");
      }
    } else if (key == "dataset") {
      config.dataset_path = value;
    } else if (key == "output.path") {
      config.output_path = value;
    } else if (key == "output.format") {
      const std::string f = lower(value);
      if (f == "csv") {
        config.format = OutputFormat::Csv;
      } else if (f == "json") {
        config.format = OutputFormat::Json;
      } else {
        throw ConfigError("config: unknown output.format \"" + value + "\"");
      }
    } else {
      throw ConfigError("config line " + std::to_string(line_number) + ": unknown key \"" + key +
                        "\"");
    }
  }
  if (!model_seen && config.pipeline != PipelineKind::Table) {
    throw ConfigError("config: model.kind is required");
  }
  for (const PauliString& q : config.observables) {
    const int expected = config.model.kind == ModelKind::SingleQubit ? 1 : 2;
    if (q.n_qubits() != expected) {
      throw ConfigError("config: observable \"" + q.label() + "\" does not act on " +
                        std::to_string(expected) + " qubit(s)");
    }
  }
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open \"" + path + "\"");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string ExperimentOutput::to_csv() const {
  std::ostringstream out;
  if (kind == PipelineKind::Superpose) {
    out << "model,circuit_kind,observable,mean,ci95,shots,repeats,seed\n";
    for (const SuperposeRow& row : superpose_rows) {
      out << row.model << ',' << row.circuit_kind << ',' << row.observable << ','
          << format_double(row.mean) << ',' << format_double(row.ci95) << ',' << row.shots << ','
          << row.repeats << ',' << row.seed << '\n';
    }
    return out.str();
  }
  if (kind == PipelineKind::Table) {
    bool with_state = false;
    for (const TableRow& row : rows) with_state = with_state || !row.state.empty();
    if (with_state) out << "state,";
    out << "pauli,algebraic,simulated,ci95,shots,repeats,seed\n";
    for (const TableRow& row : rows) {
      if (with_state) out << row.state << ',';
      out << row.pauli << ',' << format_double(row.algebraic) << ','
          << format_double(row.simulated) << ',' << format_double(row.ci95) << ',' << row.shots
          << ',' << row.repeats << ',' << row.seed << '\n';
    }
    return out.str();
  }
  return json_document + "\n";
}

std::string ExperimentOutput::to_json() const {
  if (kind == PipelineKind::Superpose) {
    json doc;
    doc["rows"] = json::array();
    for (const SuperposeRow& row : superpose_rows) doc["rows"].push_back(superpose_row_to_json(row));
    return doc.dump(2);
  }
  if (kind == PipelineKind::Table) {
    json doc;
    doc["rows"] = json::array();
    for (const TableRow& row : rows) doc["rows"].push_back(row_to_json(row));
    return doc.dump(2);
  }
  return json_document;
}

std::string ExperimentOutput::render(OutputFormat format) const {
  return format == OutputFormat::Csv ? to_csv() : to_json();
}

namespace {

ExperimentOutput run_eigenstate_pipeline(const ExperimentConfig& config) {
  const PauliSum h = build_model(config.model);
  const StateVector psi0 = config.initial_state.has_value()
                               ? basis_state(h.n_qubits, *config.initial_state)
                               : lowest_energy_basis_state(h);
  TwirlOutcome outcome;
  std::uint64_t attempts = 0;
  if (config.schedule_sampled) {
    // Readout realism: the ancilla is measured and a 1 restarts the run.
    const SampledTwirlOutcome sampled = run_schedule_restart_on_one(
        psi0, h, config.schedule, ShotPlan{1, config.seed, config.streams});
    outcome = sampled.outcome;
    attempts = sampled.attempts;
  } else {
    outcome = run_schedule(psi0, h, config.schedule);
  }

  json doc;
  doc["model"] = model_name(config.model);
  if (config.schedule_sampled) doc["attempts"] = attempts;
  doc["final_energy"] = outcome.energy_history.back();
  doc["final_variance"] = outcome.variance_history.back();
  doc["success_probability"] = outcome.success_probability;
  doc["energy_history"] = outcome.energy_history;
  doc["variance_history"] = outcome.variance_history;
  json steps = json::array();
  for (const TwirlStep& step : outcome.steps_taken) {
    steps.push_back({{"tau", step.tau}, {"shift", step.shift}});
  }
  doc["steps"] = steps;
  json amplitudes = json::array();
  for (Eigen::Index i = 0; i < outcome.state.dim(); ++i) {
    amplitudes.push_back({outcome.state.amplitudes(i).real(), outcome.state.amplitudes(i).imag()});
  }
  doc["state"] = amplitudes;

  ExperimentOutput out;
  out.kind = PipelineKind::Eigenstate;
  out.json_document = doc.dump(2);
  return out;
}

ExperimentOutput run_reconstruct_pipeline(const ExperimentConfig& config) {
  if (config.dataset_path.empty()) {
    throw ConfigError("config: reconstruct pipeline needs dataset = <csv path>");
  }
  std::ifstream in(config.dataset_path);
  if (!in) throw ConfigError("config: cannot open dataset \"" + config.dataset_path + "\"");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const ExpectationDataset dataset = ExpectationDataset::from_csv(buffer.str());
  const int dim = config.model.kind == ModelKind::SingleQubit ? 2 : 4;
  const RealStateEstimate estimate = reconstruct_real_state(dataset, dim);

  json doc;
  doc["model"] = model_name(config.model);
  doc["amplitudes"] = std::vector<double>(estimate.amplitudes.data(),
                                          estimate.amplitudes.data() + estimate.amplitudes.size());
  doc["residual"] = estimate.residual;
  doc["sign_convention"] = estimate.sign_convention;

  ExperimentOutput out;
  out.kind = PipelineKind::Reconstruct;
  out.json_document = doc.dump(2);
  return out;
}

ExperimentOutput run_superpose_pipeline(const ExperimentConfig& config) {
  if (config.observables.empty()) {
    throw ConfigError("config: superpose pipeline needs observables = <labels>");
  }
  const PauliSum h = build_model(config.model);

  ExcitationUnitary unitary;
  switch (config.unitary_source) {
    case ConfigUnitarySource::Algebraic:
      unitary = algebraic_excitation_unitary(config.model);
      break;
    case ConfigUnitarySource::Simulated: {
      const EndToEndParts parts = build_end_to_end(
          config.model, config.shots * std::max(config.repeats, 1),
          derive_seed(config.seed, kDomainRow, 0x75736f75u), config.streams);
      unitary = parts.unitary;
      break;
    }
    case ConfigUnitarySource::File: {
      if (config.unitary_file.empty()) {
        throw ConfigError("config: unitary.source = file needs unitary.file = <path>");
      }
      std::ifstream in(config.unitary_file);
      if (!in) throw ConfigError("config: cannot open unitary file \"" + config.unitary_file + "\"");
      json doc;
      try {
        in >> doc;
      } catch (const json::exception& e) {
        throw ConfigError("config: unitary file parse error: " + std::string(e.what()));
      }
      unitary = pinned_excitation_unitary(matrix_from_json(doc), UnitarySource::Simulated);
      break;
    }
  }

  const StateVector ground = config.ground_source == GroundSource::Exact
                                 ? reference_ground(config.model)
                                 : run_schedule(lowest_energy_basis_state(h), h, config.schedule)
                                       .state;

  ExperimentOutput out;
  out.kind = PipelineKind::Superpose;
  std::uint64_t row_index = 0;
  for (CircuitKind kind : {CircuitKind::RealPart, CircuitKind::ImagPart}) {
    for (const PauliString& q : config.observables) {
      SuperposeRow row;
      row.model = model_name(config.model);
      row.circuit_kind = kind == CircuitKind::RealPart ? "real_part" : "imag_part";
      row.observable = q.label();
      row.seed = config.seed;
      if (config.exact) {
        SuperpositionRun run{kind, ground, unitary, q, std::nullopt};
        row.mean = flush_tiny(run_superposition(run).difference);
        row.repeats = 1;
        row.shots = 0;
      } else {
        ShotPlan plan{config.shots, derive_seed(config.seed, kDomainRow, row_index),
                      config.streams};
        SuperpositionRun run{kind, ground, unitary, q, plan};
        if (config.repeats >= 2) {
          const RepeatedRuns repeated = repeated_runs_ci(run, config.repeats);
          row.mean = repeated.mean_difference;
          row.ci95 = repeated.ci95_halfwidth;
        } else {
          row.mean = run_superposition(run).difference;
        }
        row.repeats = config.repeats;
        row.shots = config.shots;
      }
      out.superpose_rows.push_back(std::move(row));
      ++row_index;
    }
  }
  return out;
}

}  // namespace

ExperimentOutput run_config(const ExperimentConfig& config) {
  switch (config.pipeline) {
    case PipelineKind::Eigenstate:
      return run_eigenstate_pipeline(config);
    case PipelineKind::Reconstruct:
      return run_reconstruct_pipeline(config);
    case PipelineKind::Superpose:
      return run_superpose_pipeline(config);
    case PipelineKind::Table: {
      if (config.table.empty()) {
        throw ConfigError("config: table pipeline needs table = <I..XI>");
      }
      TableRunOptions options;
      options.shots = config.shots;
      options.seed = config.seed;
      options.streams = config.streams;
      options.exact = config.exact;
      ExperimentOutput out;
      out.kind = PipelineKind::Table;
      out.rows = run_table(parse_table_id(config.table), options);
      return out;
    }
  }
  throw ConfigError("run_config: unknown pipeline");
}

}  // namespace twirlkit
