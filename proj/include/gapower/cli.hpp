#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gapower/decomp.hpp"
#include "gapower/geompower.hpp"
#include "gapower/impedance.hpp"
#include "gapower/io.hpp"
#include "gapower/scenarios.hpp"

namespace gapower {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;      // unexpected error
inline constexpr int usage = 2;        // bad command line
inline constexpr int io = 3;           // missing/unwritable file
inline constexpr int malformed = 4;    // CSV/config parse or grid error
inline constexpr int near_zero = 5;    // voltage not invertible
inline constexpr int out_of_band = 6;  // nonlinear current in linear mode
inline constexpr int unknown = 7;      // unknown demo or column name
inline constexpr int singular = 8;     // impedance undefined everywhere
}  // namespace exit_code

inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e)) return exit_code::io;
  if (dynamic_cast<const ParseError*>(&e)) return exit_code::malformed;
  if (dynamic_cast<const NearZeroVector*>(&e)) return exit_code::near_zero;
  if (dynamic_cast<const OutOfBandInLinearMode*>(&e)) return exit_code::out_of_band;
  if (dynamic_cast<const UnknownName*>(&e)) return exit_code::unknown;
  if (dynamic_cast<const AllSingular*>(&e)) return exit_code::singular;
  if (dynamic_cast<const AliasingOrder*>(&e)) return exit_code::malformed;
  if (dynamic_cast<const GridMismatch*>(&e)) return exit_code::malformed;
  if (dynamic_cast<const Error*>(&e)) return exit_code::failure;
  return exit_code::failure;
}

struct RunConfig {
  std::string csv_path;
  std::string config_path;
  std::string demo_name;
  std::optional<std::size_t> n_samples;  // override for demo/config inputs
  double threshold = 1e-6;
  bool nonlinear = false;
  std::vector<int> impedance_phases;
  std::filesystem::path out_dir = ".";
};

struct AnalysisArtifacts {
  WaveformSet waves;
  HarmonicSupport support;
  GeomVector voltage;
  GeomVector current;
  GeomPowerTrace trace;
  PowerSummary summary;
  CurrentDecomposition decomposition;
  std::optional<SequenceComponents> sequence;  // three-phase runs only
};

inline Scenario builtin_scenario(const std::string& name, std::size_t n_samples) {
  if (name == "ex1a") return example1('a', n_samples);
  if (name == "ex1b") return example1('b', n_samples);
  if (name == "ex2") return example2(230.0, 1.0, 1.0, n_samples);
  throw UnknownName("unknown demo '" + name + "' (expected ex1a, ex1b or ex2)");
}

inline AnalysisArtifacts run_pipeline(WaveformSet waves, double threshold, bool nonlinear) {
  std::vector<HarmonicSeries> voltage_spectra;
  voltage_spectra.reserve(waves.voltage.size());
  for (const auto& u : waves.voltage) voltage_spectra.push_back(spectrum(u));
  HarmonicSupport support = support_of(voltage_spectra, threshold);

  GeomVector u = build_voltage(waves.voltage);
  GeomVector i = build_current(waves.current, support, nonlinear);
  GeomPowerTrace trace = instantaneous_power(u, i);
  PowerSummary summary = summarize(trace, u, i);
  CurrentDecomposition decomposition = decompose(u, i);

  std::optional<SequenceComponents> sequence;
  if (waves.voltage.size() == 3)
    sequence = sequence_split(decomposition.components.at(CurrentComponent::quadrature));

  return {std::move(waves), std::move(support),       std::move(u),
          std::move(i),     std::move(trace),         std::move(summary),
          std::move(decomposition), std::move(sequence)};
}

namespace detail {

/// Two-decimal display used by the norms table. Values are truncated toward
/// zero after an epsilon nudge, mirroring the reference tabulation.
inline std::string display_2dec(double v) {
  const double cents = std::floor(std::abs(v) * 100.0 + 1e-6);
  std::ostringstream os;
  os << (v < 0 ? "-" : "") << std::fixed << std::setprecision(2) << cents / 100.0;
  return os.str();
}

}  // namespace detail

inline void print_norms_table(const AnalysisArtifacts& art, std::ostream& out) {
  out << "component  rms_A\n";
  for (CurrentComponent c : all_components()) {
    if (c == CurrentComponent::out_of_band && !art.current.has_breve()) continue;
    std::string name = component_display(c);
    out << name << std::string(name.size() < 10 ? 10 - name.size() : 1, ' ')
        << detail::display_2dec(art.decomposition.rms.at(c)) << "\n";
  }
  out << "i" << std::string(9, ' ') << detail::display_2dec(rms(vec_norm(art.current)))
      << "\n";
}

inline void write_summary_json(const AnalysisArtifacts& art, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "{\n";
  out << "  \"P\": " << format_number(art.summary.active_power) << ",\n";
  out << "  \"Q\": " << format_number(art.summary.reactive_power) << ",\n";
  out << "  \"rms_u\": " << format_number(art.summary.rms_u) << ",\n";
  out << "  \"rms_i\": " << format_number(art.summary.rms_i);
  for (const auto& [plane, value] : art.summary.mq_mean)
    out << ",\n  \"mq_mean." << pair_label(plane) << "\": " << format_number(value);
  out << "\n}\n";
  if (!out) throw IoError("short write to " + path.string());
}

inline void write_power_csv(const AnalysisArtifacts& art, const std::filesystem::path& path) {
  CsvTable table;
  table.columns.push_back("t");
  std::vector<double> t(art.trace.grid.n_samples);
  for (std::size_t j = 0; j < t.size(); ++j) t[j] = art.trace.grid.time(j);
  table.data.push_back(std::move(t));
  table.columns.push_back("Mp");
  table.data.push_back(art.trace.m_p.samples());
  for (const auto& [plane, series] : art.trace.m_q) {
    table.columns.push_back("Mq_" + pair_label(plane));
    table.data.push_back(series);
  }
  for (const auto& [plane, series] : art.trace.m_perp) {
    table.columns.push_back("Mperp_" + pair_label(plane));
    table.data.push_back(series);
  }
  table.columns.push_back("p_classic");
  table.data.push_back(art.trace.p_classic.samples());
  write_csv_table(path, table);
}

inline void write_decomp_csv(const AnalysisArtifacts& art, const std::filesystem::path& path) {
  CsvTable table;
  table.columns.push_back("t");
  std::vector<double> t(art.trace.grid.n_samples);
  for (std::size_t j = 0; j < t.size(); ++j) t[j] = art.trace.grid.time(j);
  table.data.push_back(std::move(t));
  for (CurrentComponent c : all_components()) {
    const auto& phases = art.decomposition.time_domain.at(c);
    for (std::size_t k = 0; k < phases.size(); ++k) {
      table.columns.push_back(component_key(c) + "_" + std::to_string(k + 1));
      table.data.push_back(phases[k].samples());
    }
  }
  write_csv_table(path, table);
}

inline void write_sequence_csv(const SequenceComponents& seq, const SamplingGrid& grid,
                               const std::filesystem::path& path) {
  CsvTable table;
  table.columns.push_back("t");
  std::vector<double> t(grid.n_samples);
  for (std::size_t j = 0; j < t.size(); ++j) t[j] = grid.time(j);
  table.data.push_back(std::move(t));
  auto add = [&](const std::string& name, const GeomVector& v) {
    auto phases = project_time(v);
    for (std::size_t k = 0; k < phases.size(); ++k) {
      table.columns.push_back(name + "_" + std::to_string(k + 1));
      table.data.push_back(phases[k].samples());
    }
  };
  add("i0", seq.zero);
  add("ineg", seq.negative);
  add("ipos", seq.positive);
  write_csv_table(path, table);
}

inline void write_impedance_csv(const AnalysisArtifacts& art, int phase,
                                const std::filesystem::path& path) {
  const ImpedanceTrace trace = phase_impedance(art.voltage, art.current, phase);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "t,R_" << phase << ",X_" << phase << ",singular\n";
  for (std::size_t j = 0; j < trace.grid.n_samples; ++j) {
    out << format_number(trace.grid.time(j)) << ',' << format_number(trace.resistance[j])
        << ',' << format_number(trace.reactance[j]) << ','
        << (trace.singular.contains(j) ? 1 : 0) << "\n";
  }
  if (!out) throw IoError("short write to " + path.string());
}

inline void write_artifacts(const AnalysisArtifacts& art, const RunConfig& cfg,
                            std::ostream& table_out) {
  std::filesystem::create_directories(cfg.out_dir);
  write_summary_json(art, cfg.out_dir / "summary.json");
  write_power_csv(art, cfg.out_dir / "power.csv");
  write_decomp_csv(art, cfg.out_dir / "decomp.csv");
  if (art.sequence)
    write_sequence_csv(*art.sequence, art.trace.grid, cfg.out_dir / "sequence.csv");
  for (int phase : cfg.impedance_phases)
    write_impedance_csv(art, phase, cfg.out_dir / ("impedance_" + std::to_string(phase) + ".csv"));
  print_norms_table(art, table_out);
}

inline WaveformSet load_input(const RunConfig& cfg) {
  const int sources = (cfg.csv_path.empty() ? 0 : 1) + (cfg.config_path.empty() ? 0 : 1) +
                      (cfg.demo_name.empty() ? 0 : 1);
  if (sources != 1) throw Error("exactly one input source is required");
  if (!(cfg.threshold > 0.0) || !(cfg.threshold < 1.0))
    throw Error("threshold must lie in (0, 1)");
  if (!cfg.csv_path.empty()) return read_waveform_csv(cfg.csv_path);
  if (!cfg.config_path.empty()) {
    ScenarioConfig sc = read_scenario_config(cfg.config_path);
    if (cfg.n_samples) sc.n_samples = *cfg.n_samples;
    return materialize(sc);
  }
  return materialize(builtin_scenario(cfg.demo_name, cfg.n_samples.value_or(4096)));
}

inline int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    AnalysisArtifacts art = run_pipeline(load_input(cfg), cfg.threshold, cfg.nonlinear);
    write_artifacts(art, cfg, out);
    return exit_code::ok;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

/// Materialize a builtin scenario to CSV next to its full analysis.
inline int cmd_demo(const std::string& name, const RunConfig& base, std::ostream& out,
                    std::ostream& err) {
  try {
    const Scenario scenario = builtin_scenario(name, base.n_samples.value_or(4096));
    RunConfig cfg = base;
    cfg.csv_path.clear();
    cfg.config_path.clear();
    cfg.demo_name = name;
    std::filesystem::create_directories(cfg.out_dir);
    export_scenario_csv(scenario, cfg.out_dir / (name + ".csv"));
    AnalysisArtifacts art = run_pipeline(materialize(scenario), cfg.threshold, cfg.nonlinear);
    write_artifacts(art, cfg, out);
    return exit_code::ok;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

/// Append the Hilbert transform of one named column to a CSV table.
inline int cmd_hilbert(const std::filesystem::path& input, const std::string& column,
                       const std::filesystem::path& output, std::ostream& err) {
  try {
    CsvTable table = read_csv_table(input);
    if (table.columns.empty() || table.columns.front() != "t")
      throw ParseError(input.string() + ": first column must be t");
    std::size_t col = table.columns.size();
    for (std::size_t c = 1; c < table.columns.size(); ++c)
      if (table.columns[c] == column) col = c;
    if (col == table.columns.size())
      throw UnknownName(input.string() + ": no column named '" + column + "'");
    const std::size_t n = table.data.front().size();
    if (n < 4 || n % 2 != 0)
      throw ParseError(input.string() + ": need an even number (>= 4) of rows");
    const double dt = n > 1 ? table.data[0][1] - table.data[0][0] : 0.0;
    if (!(dt > 0.0)) throw ParseError(input.string() + ": time column must increase");
    SamplingGrid grid(2.0 * std::numbers::pi / (dt * static_cast<double>(n)), n);
    PhaseSignal transformed = hilbert(PhaseSignal(grid, table.data[col]));
    table.columns.push_back("H_" + column);
    table.data.push_back(transformed.samples());
    write_csv_table(output, table);
    return exit_code::ok;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace gapower
