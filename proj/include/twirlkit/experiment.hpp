#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twirlkit/oracle.hpp"
#include "twirlkit/superposition.hpp"
#include "twirlkit/twirl.hpp"

namespace twirlkit {

enum class PipelineKind { Eigenstate, Reconstruct, Superpose, Table };
enum class OutputFormat { Csv, Json };
enum class ConfigUnitarySource { Algebraic, Simulated, File };
enum class GroundSource { Twirl, Exact };

/// Flat dotted-key configuration for the command-line runner. All randomness
/// in a run derives from `seed`, so identical configurations produce
/// byte-identical outputs, independent of `streams`.
struct ExperimentConfig {
  ModelParams model = ModelParams::h2();
  PipelineKind pipeline = PipelineKind::Table;
  std::string table;  // Table pipeline: I..XI
  TwirlSchedule schedule = TwirlSchedule::adaptive(4, ShiftPolicy::BiasLow);
  bool schedule_sampled = false;  // eigenstate pipeline: restart on an ancilla readout of 1
  std::optional<unsigned> initial_state;  // eigenstate pipeline start, basis index
  std::uint64_t shots = 1'000'000;
  int repeats = 1;
  std::uint64_t seed = 0;
  int streams = 1;
  bool exact = false;
  std::vector<PauliString> observables;
  ConfigUnitarySource unitary_source = ConfigUnitarySource::Algebraic;
  std::string unitary_file;
  GroundSource ground_source = GroundSource::Twirl;
  std::string dataset_path;  // reconstruct pipeline input CSV
  std::string output_path;   // empty = stdout
  OutputFormat format = OutputFormat::Csv;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// One row of a matrix-element table: the exact value next to the estimate.
struct TableRow {
  std::string state;  // filled only for the diagonal-expectation table
  std::string pauli;
  double algebraic = 0.0;
  double simulated = 0.0;
  double ci95 = 0.0;
  std::uint64_t shots = 0;
  int repeats = 1;
  std::uint64_t seed = 0;
};

/// One row of the superpose pipeline output.
struct SuperposeRow {
  std::string model;
  std::string circuit_kind;
  std::string observable;
  double mean = 0.0;
  double ci95 = 0.0;
  std::uint64_t shots = 0;
  int repeats = 1;
  std::uint64_t seed = 0;
};

struct ExperimentOutput {
  PipelineKind kind = PipelineKind::Table;
  std::vector<TableRow> rows;
  std::vector<SuperposeRow> superpose_rows;
  std::string json_document;  // eigenstate / reconstruct pipelines

  std::string to_csv() const;
  std::string to_json() const;
  std::string render(OutputFormat format) const;
};

/// The eleven preset experiments. Each maps to a fixed model, circuit,
/// observable list and excitation-unitary source.
enum class TableId { I, II, III, IV, V, VI, VII, VIII, IX, X, XI };

TableId parse_table_id(const std::string& text);
std::string table_id_name(TableId id);

struct TableRunOptions {
  std::optional<std::uint64_t> shots;  // preset default when unset
  std::uint64_t seed = 0;
  int streams = 1;
  bool exact = false;
};

std::vector<TableRow> run_table(TableId id, const TableRunOptions& options = {});

/// Largest |simulated - algebraic| allowed by --check for this preset at
/// 1e6 shots; scaled by sqrt(1e6/shots) for smaller budgets.
double table_check_tolerance(TableId id, const TableRow& row, std::uint64_t shots);
bool check_table_rows(TableId id, const std::vector<TableRow>& rows, std::uint64_t shots,
                      std::string* failure_message = nullptr);

ExperimentOutput run_config(const ExperimentConfig& config);

/// Wraps a stored near-unitary matrix as an excitation unitary by projecting
/// it to the closest exact unitary (stored matrices carry print precision).
ExcitationUnitary pinned_excitation_unitary(const ComplexMatrix& matrix, UnitarySource source);

/// Excitation unitary built from the closed-form model eigenvectors.
ExcitationUnitary algebraic_excitation_unitary(const ModelParams& model, int i = 0, int j = 1);

/// Reconstructed excitation matrices shipped with the presets (fitted at 1e7
/// shots, then unitarized).
const ComplexMatrix& fitted_unitary_j1();
const ComplexMatrix& fitted_unitary_j2();
const ComplexMatrix& unitarized_algebraic_unitary_h2();

}  // namespace twirlkit
