#pragma once

// Experiment configuration: a flat `key = value` text file, '#' comments.
//
//   scenario          base | averaged_independent | averaged_n | delayed_self
//   beta              Hz, >= 0                       (1e4)
//   delta             s, required iff delayed_self
//   deltas            comma list of s for figure-log (1e-6, 1e-7)
//   linear_deltas     comma list of s for figure-linear (1e-6)
//   n_oscillators     >= 2, averaged_n only          (4)
//   f_c_scaled        Hz                             (1e6)
//   offset            delta:<Hz> | uniform:<f_o> | normal:<sigma>  (delta:0)
//   fs                Hz, waveform rate              (64 f_c)
//   duration          s, waveform length             (2e-3)
//   psd_fs            Hz, phase sampling rate for spectra (4e7)
//   n_paths           >= 1                           (4096)
//   segment_len       Welch segment                  (16384)
//   segments_per_path Welch segments per path (50% overlap)  (8)
//   window            hann | rect                    (hann)
//   log_points        grid points over 1e3..1e7 Hz   (161)
//   linear_points     grid points over +-linear_band (1001)
//   linear_band       Hz                             (2.5e6)
//   seed              u64                            (1)
//   threads           0 = all cores                  (0)
//   output_dir        path                           (.)

#include "pnavg/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pnavg {

enum class Scenario { base, averaged_independent, averaged_n, delayed_self };
std::string_view scenario_name(Scenario s);

struct ExperimentConfig {
    Scenario scenario = Scenario::base;
    double beta = 1e4;
    std::optional<double> delta;
    std::vector<double> deltas{1e-6, 1e-7};
    std::vector<double> linear_deltas{1e-6};
    std::size_t n_oscillators = 4;
    double f_c_scaled = 1e6;
    OffsetDistribution offset = DeltaOffset{0.0};
    double fs = 64e6;
    double duration = 2e-3;
    double psd_fs = 4e7;
    std::size_t n_paths = 4096;
    std::size_t segment_len = 16384;
    std::size_t segments_per_path = 8;
    std::string window = "hann";
    std::size_t log_points = 161;
    std::size_t linear_points = 1001;
    double linear_band = 2.5e6;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::filesystem::path output_dir = ".";

    // Throws ParameterError or ConfigError.
    void validate() const;
    // Canonical `key = value` form; parse(to_text()) round-trips.
    std::string to_text() const;
    // FNV-1a of to_text() without output_dir and threads, which do not
    // affect results.
    std::uint64_t hash() const;
};

// Unknown keys and malformed values are ConfigError; the result is validated.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

std::string format_hash(std::uint64_t h);

} // namespace pnavg
