#include <CLI11.hpp>
#include <cstddef>
#include <iostream>
#include <string>

#include <gapower/cli.hpp>

namespace {

constexpr const char* kExitCodes =
    "Exit codes:\n"
    "  0  success\n"
    "  1  unexpected error\n"
    "  2  bad command line\n"
    "  3  I/O failure (missing or unwritable file)\n"
    "  4  malformed input (CSV/config parse, bad grid, aliasing order)\n"
    "  5  voltage vector not invertible\n"
    "  6  out-of-band current while in linear mode (rerun with --nonlinear)\n"
    "  7  unknown demo or column name\n"
    "  8  impedance undefined at every sample\n";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gapower: time-domain geometric power analysis for periodic multi-phase waveforms"};
  app.footer(kExitCodes);
  app.require_subcommand(1);

  gapower::RunConfig cfg;
  std::size_t samples_override = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--samples", samples_override,
                    "Sample count override for demo/config inputs (even, >= 4)");
    cmd->add_option("--threshold", cfg.threshold,
                    "Relative harmonic-support cutoff, in (0, 1)")
        ->check(CLI::Range(1e-15, 0.999999));
    cmd->add_option("--out", cfg.out_dir, "Output directory (created if missing)");
    cmd->add_option("--impedance", cfg.impedance_phases,
                    "Emit impedance_<k>.csv for these phases (repeatable)");
  };

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Ingest waveforms, run the analysis pipeline and emit artifacts");
  auto* input = analyze->add_option_group("input", "exactly one source");
  input->add_option("--csv", cfg.csv_path, "Waveform CSV (t,u1,...,un,i1,...,in)");
  input->add_option("--demo", cfg.demo_name, "Builtin scenario: ex1a, ex1b or ex2");
  input->add_option("--config", cfg.config_path, "Scenario config file");
  input->require_option(1);
  analyze->add_flag("--nonlinear", cfg.nonlinear,
                    "Route out-of-band current to the breve axes instead of failing");
  add_common(analyze);

  CLI::App* demo = app.add_subcommand(
      "demo", "Materialize a builtin scenario to CSV plus its full analysis");
  std::string demo_name;
  demo->add_option("name", demo_name, "ex1a, ex1b or ex2")->required();
  add_common(demo);

  CLI::App* hilb = app.add_subcommand(
      "hilbert", "Append the Hilbert transform of one column to a CSV table");
  std::string hilbert_csv, hilbert_column, hilbert_out;
  hilb->add_option("--csv", hilbert_csv, "Input CSV with a leading t column")->required();
  hilb->add_option("--column", hilbert_column, "Column to transform")->required();
  hilb->add_option("--out", hilbert_out, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gapower::exit_code::usage;
  }

  if (samples_override != 0) cfg.n_samples = samples_override;

  if (analyze->parsed()) return gapower::cmd_analyze(cfg, std::cout, std::cerr);
  if (demo->parsed()) return gapower::cmd_demo(demo_name, cfg, std::cout, std::cerr);
  if (hilb->parsed())
    return gapower::cmd_hilbert(hilbert_csv, hilbert_column, hilbert_out, std::cerr);
  return gapower::exit_code::usage;
}
