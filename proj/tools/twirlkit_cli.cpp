#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "twirlkit/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitPipeline = 3;
constexpr int kExitCheck = 4;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw twirlkit::ConfigError("cannot open output path \"" + out_path + "\"");
  out << text;
}

twirlkit::OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return twirlkit::OutputFormat::Csv;
  if (text == "json") return twirlkit::OutputFormat::Json;
  throw twirlkit::ConfigError("unknown format \"" + text + "\" (expected csv or json)");
}

int run_table_command(const std::string& id_text, std::optional<std::uint64_t> shots,
                      std::uint64_t seed, int streams, bool exact, bool check,
                      const std::string& out_path, const std::string& format) {
  const twirlkit::TableId id = twirlkit::parse_table_id(id_text);
  twirlkit::TableRunOptions options;
  options.shots = shots;
  options.seed = seed;
  options.streams = streams;
  options.exact = exact;
  const std::vector<twirlkit::TableRow> rows = twirlkit::run_table(id, options);

  twirlkit::ExperimentOutput output;
  output.kind = twirlkit::PipelineKind::Table;
  output.rows = rows;
  emit(output.render(parse_format(format)), out_path);

  if (check && !exact) {
    std::string message;
    if (!twirlkit::check_table_rows(id, rows, shots.value_or(1'000'000), &message)) {
      std::cerr << "check failed: " << message << "\n";
      return kExitCheck;
    }
  }
  return kExitOk;
}

int run_config_command(const std::string& path, std::optional<std::uint64_t> shots,
                       std::optional<std::uint64_t> seed, std::optional<int> streams, bool exact,
                       const std::string& out_path, const std::string& format_override) {
  twirlkit::ExperimentConfig config = twirlkit::parse_config_file(path);
  if (shots.has_value()) config.shots = *shots;
  if (seed.has_value()) config.seed = *seed;
  if (streams.has_value()) config.streams = *streams;
  if (exact) config.exact = true;
  if (!out_path.empty()) config.output_path = out_path;
  if (!format_override.empty()) config.format = parse_format(format_override);

  const twirlkit::ExperimentOutput output = twirlkit::run_config(config);
  emit(output.render(config.format), config.output_path);
  return kExitOk;
}

int run_oracle_command(const std::string& model_text, double j, const std::string& out_path,
                       const std::string& format) {
  twirlkit::ModelParams model;
  if (model_text == "single_qubit") {
    model = twirlkit::ModelParams::single_qubit(j);
  } else if (model_text == "h2") {
    model = twirlkit::ModelParams::h2();
  } else {
    throw twirlkit::ConfigError("unknown model \"" + model_text +
                                "\" (expected single_qubit or h2)");
  }
  const twirlkit::PauliSum h = twirlkit::build_model(model);
  const twirlkit::SpectralOracle oracle = twirlkit::exact_eigenpairs(h);

  std::ostringstream text;
  if (format == "json") {
    text << "{\n  \"eigenvalues\": [";
    for (Eigen::Index k = 0; k < oracle.dim(); ++k) {
      text << (k > 0 ? ", " : "") << oracle.eigenvalue(static_cast<int>(k));
    }
    text << "],\n  \"eigenvectors\": [\n";
    for (Eigen::Index k = 0; k < oracle.dim(); ++k) {
      text << "    [";
      for (Eigen::Index r = 0; r < oracle.dim(); ++r) {
        const auto z = oracle.decomposition.eigenvectors(r, k);
        text << (r > 0 ? ", " : "") << "[" << z.real() << ", " << z.imag() << "]";
      }
      text << "]" << (k + 1 < oracle.dim() ? "," : "") << "\n";
    }
    text << "  ]\n}\n";
  } else {
    for (Eigen::Index k = 0; k < oracle.dim(); ++k) {
      text << "E" << k << " = " << oracle.eigenvalue(static_cast<int>(k)) << "  |E" << k
           << "> = (";
      for (Eigen::Index r = 0; r < oracle.dim(); ++r) {
        const auto z = oracle.decomposition.eigenvectors(r, k);
        text << (r > 0 ? ", " : "") << z.real();
        if (std::abs(z.imag()) > 1e-12) text << (z.imag() > 0 ? "+" : "") << z.imag() << "i";
      }
      text << ")\n";
    }
  }
  emit(text.str(), out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenstate extraction and matrix-element estimation on small Pauli models"};
  app.require_subcommand(1);

  std::string table_id;
  std::string config_path;
  std::string oracle_model;
  double oracle_j = 1.0;
  std::optional<std::uint64_t> shots;
  std::optional<std::uint64_t> seed;
  std::optional<int> streams;
  bool exact = false;
  bool check = false;
  std::string out_path;
  std::string format = "csv";

  CLI::App* table_cmd = app.add_subcommand("table", "Run one of the preset experiments I..XI");
  table_cmd->add_option("id", table_id, "Preset id (I..XI)")->required();

  CLI::App* run_cmd = app.add_subcommand("run", "Run a key=value config file");
  run_cmd->add_option("config", config_path, "Path to the config file")->required();

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Print the exact eigensystem of a model");
  oracle_cmd->add_option("model", oracle_model, "single_qubit or h2")->required();
  oracle_cmd->add_option("--j", oracle_j, "Coupling for the single-qubit model");

  for (CLI::App* cmd : {table_cmd, run_cmd}) {
    cmd->add_option("--shots", [&shots](const std::vector<std::string>& v) {
      shots = std::stoull(v.back());
      return true;
    }, "Shot budget per run");
    cmd->add_option("--seed", [&seed](const std::vector<std::string>& v) {
      seed = std::stoull(v.back());
      return true;
    }, "Root random seed");
    cmd->add_option("--streams", [&streams](const std::vector<std::string>& v) {
      streams = std::stoi(v.back());
      return true;
    }, "Parallel shot partitions");
    cmd->add_flag("--exact", exact, "Exact conditional expectations instead of sampling");
  }
  table_cmd->add_flag("--check", check, "Exit 4 when a row misses its preset tolerance");
  for (CLI::App* cmd : {table_cmd, run_cmd, oracle_cmd}) {
    cmd->add_option("--out", out_path, "Output path (default stdout)");
    cmd->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (table_cmd->parsed()) {
      return run_table_command(table_id, shots, seed.value_or(0), streams.value_or(1), exact,
                               check, out_path, format);
    }
    if (run_cmd->parsed()) {
      return run_config_command(config_path, shots, seed, streams, exact, out_path,
                                run_cmd->count("--format") > 0 ? format : "");
    }
    if (oracle_cmd->parsed()) {
      return run_oracle_command(oracle_model, oracle_j, out_path, format);
    }
  } catch (const twirlkit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const twirlkit::Error& e) {
    std::cerr << "pipeline error: " << e.what() << "\n";
    return kExitPipeline;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPipeline;
  }
  return kExitOk;
}
