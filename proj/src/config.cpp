#include "pnavg/config.hpp"

#include "pnavg/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace pnavg {

std::string_view scenario_name(Scenario s) {
    switch (s) {
    case Scenario::base: return "base";
    case Scenario::averaged_independent: return "averaged_independent";
    case Scenario::averaged_n: return "averaged_n";
    case Scenario::delayed_self: return "delayed_self";
    }
    return "?";
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0)
            out += ",";
        out += fmt(v[i]);
    }
    return out;
}

std::string offset_text(const OffsetDistribution& d) {
    if (const auto* p = std::get_if<DeltaOffset>(&d))
        return "delta:" + fmt(p->value);
    if (const auto* p = std::get_if<UniformOffset>(&d))
        return "uniform:" + fmt(p->half_width);
    return "normal:" + fmt(std::get<NormalOffset>(d).sigma);
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError("config: " + std::string(key) + " expects a number, got '" + std::string(v) + "'");
    return out;
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("config: " + std::string(key) + " expects a non-negative integer, got '" +
                          std::string(v) + "'");
    return out;
}

std::vector<double> to_list(std::string_view key, std::string_view v) {
    std::vector<double> out;
    while (!v.empty()) {
        const auto comma = v.find(',');
        const auto item = trim(v.substr(0, comma));
        if (item.empty())
            throw ConfigError("config: empty entry in " + std::string(key));
        out.push_back(to_double(key, item));
        if (comma == std::string_view::npos)
            break;
        v.remove_prefix(comma + 1);
    }
    return out;
}

OffsetDistribution to_offset(std::string_view v) {
    const auto colon = v.find(':');
    if (colon == std::string_view::npos)
        throw ConfigError("config: offset expects kind:value");
    const auto kind = trim(v.substr(0, colon));
    const double x = to_double("offset", trim(v.substr(colon + 1)));
    if (kind == "delta")
        return DeltaOffset{x};
    if (kind == "uniform")
        return UniformOffset{x};
    if (kind == "normal")
        return NormalOffset{x};
    throw ConfigError("config: unknown offset kind '" + std::string(kind) + "'");
}

Scenario to_scenario(std::string_view v) {
    for (auto s : {Scenario::base, Scenario::averaged_independent, Scenario::averaged_n, Scenario::delayed_self})
        if (scenario_name(s) == v)
            return s;
    throw ConfigError("config: unknown scenario '" + std::string(v) + "'");
}

void require_positive(const char* key, double v) {
    if (!std::isfinite(v) || v <= 0.0)
        throw ParameterError(std::string("config: ") + key + " must be positive");
}

} // namespace

void ExperimentConfig::validate() const {
    if (!std::isfinite(beta) || beta < 0.0)
        throw ParameterError("config: beta must be finite and non-negative");
    require_positive("f_c_scaled", f_c_scaled);
    require_positive("fs", fs);
    require_positive("duration", duration);
    require_positive("psd_fs", psd_fs);
    require_positive("linear_band", linear_band);
    pnavg::validate(offset);
    if (n_paths < 1)
        throw ParameterError("config: n_paths must be at least 1");
    if (segment_len < 16)
        throw ParameterError("config: segment_len must be at least 16");
    if (segments_per_path < 1)
        throw ParameterError("config: segments_per_path must be at least 1");
    if (log_points < 2 || linear_points < 3)
        throw ParameterError("config: grids need at least 2 (log) and 3 (linear) points");
    if (window != "hann" && window != "rect")
        throw ConfigError("config: window must be hann or rect");
    if (n_oscillators < 2)
        throw ParameterError("config: n_oscillators must be at least 2");
    if (scenario == Scenario::delayed_self && !delta)
        throw ConfigError("config: delta is required for the delayed_self scenario");
    if (scenario != Scenario::delayed_self && delta)
        throw ConfigError("config: delta is only valid for the delayed_self scenario");
    if (delta && (!std::isfinite(*delta) || *delta < 0.0))
        throw ParameterError("config: delta must be non-negative");
    for (const auto* list : {&deltas, &linear_deltas})
        for (double d : *list)
            require_positive("deltas", d);
}

std::string ExperimentConfig::to_text() const {
    std::ostringstream out;
    out << "scenario = " << scenario_name(scenario) << '\n';
    out << "beta = " << fmt(beta) << '\n';
    if (delta)
        out << "delta = " << fmt(*delta) << '\n';
    out << "deltas = " << join(deltas) << '\n';
    out << "linear_deltas = " << join(linear_deltas) << '\n';
    out << "n_oscillators = " << n_oscillators << '\n';
    out << "f_c_scaled = " << fmt(f_c_scaled) << '\n';
    out << "offset = " << offset_text(offset) << '\n';
    out << "fs = " << fmt(fs) << '\n';
    out << "duration = " << fmt(duration) << '\n';
    out << "psd_fs = " << fmt(psd_fs) << '\n';
    out << "n_paths = " << n_paths << '\n';
    out << "segment_len = " << segment_len << '\n';
    out << "segments_per_path = " << segments_per_path << '\n';
    out << "window = " << window << '\n';
    out << "log_points = " << log_points << '\n';
    out << "linear_points = " << linear_points << '\n';
    out << "linear_band = " << fmt(linear_band) << '\n';
    out << "seed = " << seed << '\n';
    out << "threads = " << threads << '\n';
    out << "output_dir = " << output_dir.string() << '\n';
    return out.str();
}

std::uint64_t ExperimentConfig::hash() const {
    ExperimentConfig canonical = *this;
    canonical.output_dir = ".";
    canonical.threads = 0;
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical.to_text()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string format_hash(std::uint64_t h) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig cfg;
    bool fs_set = false;
    std::map<std::string, std::size_t, std::less<>> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view v = trim(line.substr(eq + 1));
        if (!seen.emplace(key, line_no).second)
            throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key " + key);

        if (key == "scenario") cfg.scenario = to_scenario(v);
        else if (key == "beta") cfg.beta = to_double(key, v);
        else if (key == "delta") cfg.delta = to_double(key, v);
        else if (key == "deltas") cfg.deltas = to_list(key, v);
        else if (key == "linear_deltas") cfg.linear_deltas = to_list(key, v);
        else if (key == "n_oscillators") cfg.n_oscillators = to_u64(key, v);
        else if (key == "f_c_scaled") cfg.f_c_scaled = to_double(key, v);
        else if (key == "offset") cfg.offset = to_offset(v);
        else if (key == "fs") { cfg.fs = to_double(key, v); fs_set = true; }
        else if (key == "duration") cfg.duration = to_double(key, v);
        else if (key == "psd_fs") cfg.psd_fs = to_double(key, v);
        else if (key == "n_paths") cfg.n_paths = to_u64(key, v);
        else if (key == "segment_len") cfg.segment_len = to_u64(key, v);
        else if (key == "segments_per_path") cfg.segments_per_path = to_u64(key, v);
        else if (key == "window") cfg.window = std::string(v);
        else if (key == "log_points") cfg.log_points = to_u64(key, v);
        else if (key == "linear_points") cfg.linear_points = to_u64(key, v);
        else if (key == "linear_band") cfg.linear_band = to_double(key, v);
        else if (key == "seed") cfg.seed = to_u64(key, v);
        else if (key == "threads") cfg.threads = static_cast<unsigned>(to_u64(key, v));
        else if (key == "output_dir") cfg.output_dir = std::string(v);
        else throw ConfigError("config line " + std::to_string(line_no) + ": unknown key " + key);
    }
    if (!fs_set)
        cfg.fs = 64.0 * cfg.f_c_scaled;
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace pnavg
