#pragma once

// Figure data and raw simulation dumps. Everything is computed in memory
// first and written afterwards by a single writer, so re-running with the
// same configuration reproduces identical files.

#include "pnavg/config.hpp"
#include "pnavg/spectral.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace pnavg {

// Two-column data: x strictly increasing, all values finite.
struct Table {
    std::string name;   // file stem, e.g. psd_log_base
    std::string source; // what produced the y column
    std::string x_label;
    std::string y_label;
    std::vector<double> x;
    std::vector<double> y;
};

struct Sidecar {
    std::string name; // file name including extension
    std::string content;
};

struct ExperimentOutput {
    std::vector<Table> tables;
    std::vector<Sidecar> sidecars;
};

enum class OutputFormat { table, json };

// Stem used in file names for a delay, e.g. 1e-6 -> "1em6", 2.5e-7 -> "2p5em7".
std::string delay_tag(double delta);

// Log-spaced offsets 1e3..1e7 Hz. For every curve (base, averaged
// independent pair, one per δ in cfg.deltas) emits `<name>` with the
// analytic spectrum and `<name>_mc` with the Monte Carlo estimate.
ExperimentOutput run_figure_log(const ExperimentConfig& cfg);

// Linear grid over ±cfg.linear_band for base, independent pair and each δ
// in cfg.linear_deltas, plus psd_lin_summary.json with notch positions.
ExperimentOutput run_figure_linear(const ExperimentConfig& cfg);

// Waveform-mode run of cfg.scenario: output samples, measured and
// predicted phase, and a JSON summary of the circuit checks.
ExperimentOutput run_simulate(const ExperimentConfig& cfg);

// Monte Carlo spectrum of the phase-shift process for one figure curve:
// kind is "base", "ind" or "delta" (which reads delta).
EnsembleSpectrum figure_estimate(const ExperimentConfig& cfg, const std::string& kind, double delta = 0.0);

// Strict interior local minima of y, returned as x positions.
std::vector<double> local_minima(const std::vector<double>& x, const std::vector<double>& y);

std::string render(const Table& t, std::uint64_t config_hash, OutputFormat format);

// Creates cfg.output_dir if needed and writes every table and sidecar.
// Returns the written paths. Throws IoError.
std::vector<std::filesystem::path> write_output(const ExperimentOutput& out, const ExperimentConfig& cfg,
                                                OutputFormat format);

void write_text_file(const std::filesystem::path& path, const std::string& content);

} // namespace pnavg
