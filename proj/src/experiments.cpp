#include "pnavg/experiments.hpp"

#include "pnavg/analytic.hpp"
#include "pnavg/circuit.hpp"
#include "pnavg/demod.hpp"
#include "pnavg/error.hpp"
#include "pnavg/stochastic.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace pnavg {

using nlohmann::json;

std::string delay_tag(double delta) {
    if (!std::isfinite(delta) || delta <= 0.0)
        throw ParameterError("delay_tag: delay must be positive");
    int e = static_cast<int>(std::floor(std::log10(delta)));
    double m = delta / std::pow(10.0, e);
    if (m >= 9.9999995) {
        m /= 10.0;
        ++e;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", m);
    std::string out = buf;
    std::replace(out.begin(), out.end(), '.', 'p');
    out += e < 0 ? "em" + std::to_string(-e) : "e" + std::to_string(e);
    return out;
}

namespace {

constexpr double log_fmin = 1e3;
constexpr double log_fmax = 1e7;

std::uint64_t curve_master(std::uint64_t seed, const std::string& name) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : name) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return mix64(seed ^ h);
}

std::vector<double> log_grid(std::size_t n) {
    std::vector<double> g(n);
    const double step = std::log10(log_fmax / log_fmin) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = log_fmin * std::pow(10.0, step * static_cast<double>(i));
    g.back() = log_fmax;
    return g;
}

std::vector<double> linear_grid(double band, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = -band + 2.0 * band * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

Table analytic_table(const std::string& name, CurveSource source, double beta, double delta,
                     const std::vector<double>& grid) {
    const AnalyticCurve c = analytic_curve(source, beta, delta, grid);
    Table t{name, std::string(source_name(source)), "offset_hz", "dbc_hz", c.grid, {}};
    t.y.reserve(c.values.size());
    for (double v : c.values)
        t.y.push_back(to_dbc_hz(v));
    return t;
}

WelchOptions welch_options(const ExperimentConfig& cfg) {
    return {cfg.segment_len, 0.5, cfg.window == "rect" ? Window::rect : Window::hann};
}

std::size_t path_length(const ExperimentConfig& cfg) {
    return cfg.segment_len + (cfg.segments_per_path - 1) * (cfg.segment_len / 2);
}

void require_beta(const ExperimentConfig& cfg) {
    if (cfg.beta <= 0.0)
        throw DegenerateModelError("figures need beta > 0: the spectrum of a noiseless carrier is a delta");
}

} // namespace

EnsembleSpectrum figure_estimate(const ExperimentConfig& cfg, const std::string& kind, double delta) {
    const double dt = 1.0 / cfg.psd_fs;
    const std::size_t n = path_length(cfg);
    const std::uint64_t master = curve_master(cfg.seed, kind == "delta" ? "delta_" + delay_tag(delta) : kind);
    SequenceSource make;
    if (kind == "base") {
        make = [=, &cfg](std::size_t i) { return phase_shift(wiener_path(cfg.beta, 0.0, dt, n, {master, i}).samples); };
    } else if (kind == "ind") {
        make = [=, &cfg](std::size_t i) {
            PhasePath a = wiener_path(cfg.beta, 0.0, dt, n, {master, 2 * i});
            const PhasePath b = wiener_path(cfg.beta, 0.0, dt, n, {master, 2 * i + 1});
            for (std::size_t k = 0; k < n; ++k)
                a.samples[k] = (a.samples[k] + b.samples[k]) / 2.0;
            return phase_shift(a.samples);
        };
    } else if (kind == "delta") {
        const std::size_t d = delay_in_samples(delta, cfg.psd_fs);
        make = [=, &cfg](std::size_t i) {
            const PhasePath p = wiener_path(cfg.beta, 0.0, dt, n + d, {master, i});
            return phase_shift(delayed_average_path(p, d).samples);
        };
    } else {
        throw ParameterError("figure_estimate: unknown curve kind " + kind);
    }
    return ensemble_psd(cfg.n_paths, make, cfg.psd_fs, welch_options(cfg), cfg.threads);
}

namespace {

// Positive-offset estimate on the Welch bins, averaged with the mirror bin.
Table log_mc_table(const std::string& name, const EnsembleSpectrum& est) {
    const auto& s = est.mean;
    const double df = s.bin_width();
    const double lo = std::max(log_fmin, 4.0 * df);
    const double hi = std::min(log_fmax, s.fs / 8.0);
    Table t{name, "welch_ensemble", "offset_hz", "dbc_hz", {}, {}};
    const std::size_t len = s.freqs.size();
    const std::size_t zero = len / 2; // freqs[zero] == 0 for even len
    for (std::size_t i = zero + 1; i < len; ++i) {
        const double f = s.freqs[i];
        if (f < lo || f > hi)
            continue;
        const double mirrored = 0.5 * (s.psd[i] + s.psd[2 * zero - i]);
        t.x.push_back(f);
        t.y.push_back(to_dbc_hz(mirrored));
    }
    return t;
}

Table linear_mc_table(const std::string& name, const EnsembleSpectrum& est, double band) {
    const auto& s = est.mean;
    Table t{name, "welch_ensemble", "offset_hz", "dbc_hz", {}, {}};
    for (std::size_t i = 0; i < s.freqs.size(); ++i)
        if (std::abs(s.freqs[i]) <= band) {
            t.x.push_back(s.freqs[i]);
            t.y.push_back(to_dbc_hz(s.psd[i]));
        }
    return t;
}

void check_even_segment(const ExperimentConfig& cfg) {
    if (cfg.segment_len % 2 != 0)
        throw ParameterError("segment_len must be even for the figure estimators");
}

} // namespace

ExperimentOutput run_figure_log(const ExperimentConfig& cfg) {
    cfg.validate();
    require_beta(cfg);
    check_even_segment(cfg);
    const std::vector<double> grid = log_grid(cfg.log_points);
    ExperimentOutput out;
    out.tables.push_back(analytic_table("psd_log_base", CurveSource::phase_shift_transform, cfg.beta, 0.0, grid));
    out.tables.push_back(log_mc_table("psd_log_base_mc", figure_estimate(cfg, "base")));
    out.tables.push_back(analytic_table("psd_log_ind", CurveSource::half_variance_transform, cfg.beta, 0.0, grid));
    out.tables.push_back(log_mc_table("psd_log_ind_mc", figure_estimate(cfg, "ind")));
    for (double d : cfg.deltas) {
        const std::string name = "psd_log_delta_" + delay_tag(d);
        out.tables.push_back(analytic_table(name, CurveSource::delayed_psd, cfg.beta, d, grid));
        out.tables.push_back(log_mc_table(name + "_mc", figure_estimate(cfg, "delta", d)));
    }
    return out;
}

std::vector<double> local_minima(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> out;
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
        if (y[i] < y[i - 1] && y[i] < y[i + 1])
            out.push_back(x[i]);
    return out;
}

ExperimentOutput run_figure_linear(const ExperimentConfig& cfg) {
    cfg.validate();
    require_beta(cfg);
    check_even_segment(cfg);
    const std::vector<double> grid = linear_grid(cfg.linear_band, cfg.linear_points);
    const double step = grid[1] - grid[0];
    ExperimentOutput out;
    json summary;
    summary["config_hash"] = format_hash(cfg.hash());
    summary["grid_step_hz"] = step;
    summary["band_hz"] = cfg.linear_band;
    json curves = json::array();

    auto add = [&](Table analytic, const EnsembleSpectrum& est, std::optional<double> delta) {
        json c;
        c["name"] = analytic.name;
        c["source"] = analytic.source;
        const std::vector<double> notches = local_minima(analytic.x, analytic.y);
        c["notches_hz"] = notches;
        if (notches.size() >= 2)
            c["notch_spacing_hz"] = (notches.back() - notches.front()) / static_cast<double>(notches.size() - 1);
        else
            c["notch_spacing_hz"] = nullptr;
        if (delta) {
            c["delta_s"] = *delta;
            c["expected_spacing_hz"] = 1.0 / *delta;
        }
        bool monotone = true;
        for (std::size_t i = 1; i < analytic.x.size(); ++i)
            if (analytic.x[i - 1] >= 0.0 && analytic.y[i] >= analytic.y[i - 1])
                monotone = false;
        c["monotone_positive_offsets"] = monotone;
        curves.push_back(c);
        Table mc = linear_mc_table(analytic.name + "_mc", est, cfg.linear_band);
        out.tables.push_back(std::move(analytic));
        out.tables.push_back(std::move(mc));
    };

    add(analytic_table("psd_lin_base", CurveSource::phase_shift_transform, cfg.beta, 0.0, grid),
        figure_estimate(cfg, "base"), std::nullopt);
    add(analytic_table("psd_lin_ind", CurveSource::half_variance_transform, cfg.beta, 0.0, grid),
        figure_estimate(cfg, "ind"), std::nullopt);
    for (double d : cfg.linear_deltas)
        add(analytic_table("psd_lin_delta_" + delay_tag(d), CurveSource::delayed_psd, cfg.beta, d, grid),
            figure_estimate(cfg, "delta", d), d);
    summary["curves"] = curves;
    out.sidecars.push_back({"psd_lin_summary.json", summary.dump(2) + "\n"});
    return out;
}

ExperimentOutput run_simulate(const ExperimentConfig& cfg) {
    cfg.validate();
    const OscillatorSpec spec(cfg.f_c_scaled, cfg.offset, cfg.beta, 0.0);
    const std::string stem = "simulate_" + std::string(scenario_name(cfg.scenario));
    ExperimentOutput out;
    json summary;
    summary["config_hash"] = format_hash(cfg.hash());
    summary["scenario"] = scenario_name(cfg.scenario);
    summary["fs_hz"] = cfg.fs;

    auto time_axis = [&](std::size_t n) {
        std::vector<double> t(n);
        for (std::size_t k = 0; k < n; ++k)
            t[k] = static_cast<double>(k) / cfg.fs;
        return t;
    };

    if (cfg.scenario == Scenario::base) {
        const std::size_t n = static_cast<std::size_t>(std::llround(cfg.duration * cfg.fs));
        const RealizedOscillator r = realize({spec, {cfg.seed, 0}}, cfg.fs, n);
        const Waveform w = oscillator_waveform(spec, r.offset, r.phase, cfg.fs, n);
        out.tables.push_back({stem, "oscillator_waveform", "time_s", "amplitude", time_axis(n), w.samples});
        out.tables.push_back({stem + "_phase", "wiener_path", "time_s", "phase_rad", time_axis(n), r.phase.samples});
        summary["samples"] = n;
        summary["offset_hz"] = r.offset;
    } else {
        std::vector<OscillatorSource> oscs;
        const std::size_t count = cfg.scenario == Scenario::averaged_n ? cfg.n_oscillators : 2;
        for (std::size_t i = 0; i < count; ++i)
            oscs.push_back({spec, {cfg.seed, i}});
        CircuitRun run;
        switch (cfg.scenario) {
        case Scenario::averaged_independent:
            run = simulate_fig1(oscs[0], oscs[1], cfg.fs, cfg.duration);
            break;
        case Scenario::averaged_n:
            run = simulate_n_average(oscs, cfg.fs, cfg.duration);
            break;
        default:
            run = simulate_delayed_self_average(oscs[0], *cfg.delta, cfg.fs, cfg.duration);
            break;
        }
        const std::size_t n = run.output.size();
        out.tables.push_back({stem, "waveform_circuit", "time_s", "amplitude", time_axis(n), run.output.samples});
        const auto first = static_cast<std::ptrdiff_t>(run.trim);
        const auto last = static_cast<std::ptrdiff_t>(n - run.trim);
        const std::vector<double> t = time_axis(n);
        out.tables.push_back({stem + "_phase", "demodulated_output", "time_s", "phase_rad",
                              {t.begin() + first, t.begin() + last},
                              {run.demodulated_phase.begin() + first, run.demodulated_phase.begin() + last}});
        out.tables.push_back({stem + "_predicted", "steady_state_symbolic", "time_s", "phase_rad",
                              {t.begin() + first, t.begin() + last},
                              {run.predicted_phase.begin() + first, run.predicted_phase.begin() + last}});
        summary["samples"] = n;
        summary["trim"] = run.trim;
        summary["output_frequency_hz"] = run.symbolic.omega_prime / two_pi;
        summary["substitution_residual_rad"] = run.substitution_residual;
        summary["loop_rms"] = run.loop_rms;
        summary["phase_rms_error_rad"] =
            phase_rms_error(run.demodulated_phase, run.predicted_phase, run.trim, run.phase_ambiguity);
    }
    out.sidecars.push_back({stem + "_summary.json", summary.dump(2) + "\n"});
    return out;
}

namespace {

std::string number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void check_table(const Table& t) {
    if (t.x.size() != t.y.size())
        throw ShapeError("table " + t.name + ": column lengths differ");
    for (std::size_t i = 0; i < t.x.size(); ++i) {
        if (!std::isfinite(t.x[i]) || !std::isfinite(t.y[i]))
            throw DomainError("table " + t.name + ": non-finite value");
        if (i > 0 && !(t.x[i] > t.x[i - 1]))
            throw DomainError("table " + t.name + ": first column not increasing");
    }
}

} // namespace

std::string render(const Table& t, std::uint64_t config_hash, OutputFormat format) {
    check_table(t);
    if (format == OutputFormat::json) {
        json j;
        j["name"] = t.name;
        j["source"] = t.source;
        j["config_hash"] = format_hash(config_hash);
        j["columns"] = {t.x_label, t.y_label};
        j["x"] = t.x;
        j["y"] = t.y;
        return j.dump() + "\n";
    }
    std::string s;
    s += "# " + t.name + "\n";
    s += "# source " + t.source + "\n";
    s += "# config_hash " + format_hash(config_hash) + "\n";
    s += "# columns " + t.x_label + " " + t.y_label + "\n";
    for (std::size_t i = 0; i < t.x.size(); ++i)
        s += number(t.x[i]) + " " + number(t.y[i]) + "\n";
    return s;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw IoError("cannot open " + path.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.close();
    if (!f)
        throw IoError("failed writing " + path.string());
}

std::vector<std::filesystem::path> write_output(const ExperimentOutput& out, const ExperimentConfig& cfg,
                                                OutputFormat format) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec || !std::filesystem::is_directory(cfg.output_dir))
        throw IoError("cannot create output directory " + cfg.output_dir.string());
    const std::uint64_t h = cfg.hash();
    std::vector<std::filesystem::path> written;
    for (const auto& t : out.tables) {
        auto p = cfg.output_dir / (t.name + (format == OutputFormat::json ? ".json" : ".data"));
        write_text_file(p, render(t, h, format));
        written.push_back(std::move(p));
    }
    for (const auto& s : out.sidecars) {
        auto p = cfg.output_dir / s.name;
        write_text_file(p, s.content);
        written.push_back(std::move(p));
    }
    return written;
}

} // namespace pnavg
