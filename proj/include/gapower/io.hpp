#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "gapower/errors.hpp"
#include "gapower/scenarios.hpp"
#include "gapower/waveform.hpp"

namespace gapower {

/// Fixed 9-significant-digit, locale-free rendering for emitted artifacts.
inline std::string format_number(double v) {
  char buf[48];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  if (res.ec != std::errc{}) throw Error("format_number: conversion failed");
  return std::string(buf, res.ptr);
}

/// Shortest round-trip rendering; used where re-ingest fidelity matters.
inline std::string format_exact(double v) {
  char buf[48];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc{}) throw Error("format_exact: conversion failed");
  return std::string(buf, res.ptr);
}

namespace detail {

inline double parse_double(std::string_view text, std::size_t line_no) {
  double out = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc{} || res.ptr != last)
    throw ParseError("line " + std::to_string(line_no) + ": bad number '" +
                     std::string(text) + "'");
  return out;
}

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

/// Read one full period of waveforms. Header: t,u1,...,un,i1,...,in. The time
/// column must be uniform from zero and is validated against the implied grid
/// to 1e-9 relative.
inline WaveformSet read_waveform_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  auto header = detail::split(detail::trim(line), ',');
  if (header.size() < 3 || header[0] != "t" || header.size() % 2 == 0)
    throw ParseError(path.string() + ": header must be t,u1,...,un,i1,...,in");
  const std::size_t n_phases = (header.size() - 1) / 2;
  for (std::size_t k = 0; k < n_phases; ++k) {
    if (header[1 + k] != "u" + std::to_string(k + 1) ||
        header[1 + n_phases + k] != "i" + std::to_string(k + 1))
      throw ParseError(path.string() + ": header must be t,u1,...,un,i1,...,in");
  }

  std::vector<double> times;
  std::vector<std::vector<double>> columns(2 * n_phases);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    auto cells = detail::split(trimmed, ',');
    if (cells.size() != header.size())
      throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                       " has " + std::to_string(cells.size()) + " columns, expected " +
                       std::to_string(header.size()));
    times.push_back(detail::parse_double(cells[0], line_no));
    for (std::size_t c = 0; c < columns.size(); ++c)
      columns[c].push_back(detail::parse_double(cells[1 + c], line_no));
  }

  const std::size_t n = times.size();
  if (n < 4 || n % 2 != 0)
    throw ParseError(path.string() + ": need an even number (>= 4) of rows, got " +
                     std::to_string(n));
  const double dt = n > 1 ? times[1] - times[0] : 0.0;
  if (!(dt > 0.0)) throw ParseError(path.string() + ": time column must increase");
  const double period = dt * static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double expected = static_cast<double>(j) * dt;
    if (std::abs(times[j] - expected) > 1e-9 * period)
      throw ParseError(path.string() + ": non-uniform time at row " + std::to_string(j + 1));
  }

  SamplingGrid grid(2.0 * std::numbers::pi / period, n);
  WaveformSet out{grid, {}, {}};
  for (std::size_t k = 0; k < n_phases; ++k)
    out.voltage.emplace_back(grid, std::move(columns[k]));
  for (std::size_t k = 0; k < n_phases; ++k)
    out.current.emplace_back(grid, std::move(columns[n_phases + k]));
  return out;
}

/// Write waveforms at full precision so that a re-ingested file reproduces
/// the analysis bit-for-bit.
inline void write_waveform_csv(const std::filesystem::path& path, const WaveformSet& waves) {
  if (waves.voltage.size() != waves.current.size() || waves.voltage.empty())
    throw Error("write_waveform_csv: need matching voltage/current phases");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  const std::size_t n_phases = waves.voltage.size();
  out << "t";
  for (std::size_t k = 1; k <= n_phases; ++k) out << ",u" << k;
  for (std::size_t k = 1; k <= n_phases; ++k) out << ",i" << k;
  out << "\n";
  for (std::size_t j = 0; j < waves.grid.n_samples; ++j) {
    out << format_exact(waves.grid.time(j));
    for (const auto& u : waves.voltage) out << ',' << format_exact(u[j]);
    for (const auto& i : waves.current) out << ',' << format_exact(i[j]);
    out << "\n";
  }
  if (!out) throw IoError("short write to " + path.string());
}

inline void export_scenario_csv(const Scenario& s, const std::filesystem::path& path) {
  write_waveform_csv(path, materialize(s));
}

/// Key-value scenario description:
///   omega = 1.0
///   n_samples = 4096
///   phases = 1
///   u1.h1 = 0,141.42135623731
///   i1.h1 = 100,0
/// '#' starts a comment.
struct ScenarioConfig {
  double omega = 0.0;
  std::size_t n_samples = 0;
  int phases = 0;
  std::vector<HarmonicSeries> voltage;
  std::vector<HarmonicSeries> current;
};

inline ScenarioConfig read_scenario_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());

  struct Term {
    bool is_voltage;
    int phase;
    int order;
    double a, b;
  };
  std::vector<Term> terms;
  ScenarioConfig cfg;
  bool have_omega = false, have_samples = false, have_phases = false;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = detail::trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                       ": expected key = value");
    const std::string key = detail::trim(text.substr(0, eq));
    const std::string value = detail::trim(text.substr(eq + 1));

    if (key == "omega") {
      cfg.omega = detail::parse_double(value, line_no);
      have_omega = true;
    } else if (key == "n_samples") {
      cfg.n_samples = static_cast<std::size_t>(detail::parse_double(value, line_no));
      have_samples = true;
    } else if (key == "phases") {
      cfg.phases = static_cast<int>(detail::parse_double(value, line_no));
      have_phases = true;
    } else if ((key.front() == 'u' || key.front() == 'i') && key.find(".h") != std::string::npos) {
      const auto dot = key.find(".h");
      const std::string phase_text = key.substr(1, dot - 1);
      const std::string order_text = key.substr(dot + 2);
      if (phase_text.empty() || order_text.empty())
        throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                         ": bad harmonic key '" + key + "'");
      auto parts = detail::split(value, ',');
      if (parts.size() != 2)
        throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                         ": harmonic value must be 'a,b'");
      terms.push_back({key.front() == 'u', std::stoi(phase_text), std::stoi(order_text),
                       detail::parse_double(detail::trim(parts[0]), line_no),
                       detail::parse_double(detail::trim(parts[1]), line_no)});
    } else {
      throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                       ": unknown key '" + key + "'");
    }
  }
  if (!have_omega || !have_samples || !have_phases)
    throw ParseError(path.string() + ": omega, n_samples and phases are required");
  if (cfg.phases < 1) throw ParseError(path.string() + ": phases must be >= 1");

  for (int k = 0; k < cfg.phases; ++k) {
    cfg.voltage.emplace_back(cfg.omega);
    cfg.current.emplace_back(cfg.omega);
  }
  for (const auto& t : terms) {
    if (t.phase < 1 || t.phase > cfg.phases)
      throw ParseError(path.string() + ": harmonic term for unknown phase " +
                       std::to_string(t.phase));
    auto& dst = t.is_voltage ? cfg.voltage[static_cast<std::size_t>(t.phase - 1)]
                             : cfg.current[static_cast<std::size_t>(t.phase - 1)];
    dst.set_term(t.order, t.a, t.b);
  }
  return cfg;
}

inline WaveformSet materialize(const ScenarioConfig& cfg) {
  SamplingGrid grid(cfg.omega, cfg.n_samples);
  WaveformSet out{grid, {}, {}};
  for (const auto& s : cfg.voltage) out.voltage.push_back(sample_series(s, grid));
  for (const auto& s : cfg.current) out.current.push_back(sample_series(s, grid));
  return out;
}

/// Plain numeric table with named columns; first column is expected to be
/// time for the transforms that need a grid.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // column-major
};

inline CsvTable read_csv_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  CsvTable table;
  table.columns = detail::split(detail::trim(line), ',');
  table.data.resize(table.columns.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    auto cells = detail::split(trimmed, ',');
    if (cells.size() != table.columns.size())
      throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                       ": wrong column count");
    for (std::size_t c = 0; c < cells.size(); ++c)
      table.data[c].push_back(detail::parse_double(cells[c], line_no));
  }
  return table;
}

inline void write_csv_table(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << table.columns[c];
  out << "\n";
  const std::size_t rows = table.data.empty() ? 0 : table.data.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < table.data.size(); ++c)
      out << (c ? "," : "") << format_number(table.data[c][r]);
    out << "\n";
  }
  if (!out) throw IoError("short write to " + path.string());
}

}  // namespace gapower
