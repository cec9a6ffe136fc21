#include <catch_amalgamated.hpp>

#include "pnavg/acceptance.hpp"
#include "pnavg/config.hpp"
#include "pnavg/error.hpp"
#include "pnavg/experiments.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

using namespace pnavg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_figure_config() {
    ExperimentConfig cfg;
    cfg.n_paths = 8;
    cfg.segment_len = 4096;
    cfg.segments_per_path = 2;
    cfg.log_points = 41;
    cfg.linear_points = 1001;
    cfg.threads = 1;
    return cfg;
}

const Table& find(const ExperimentOutput& out, const std::string& name) {
    for (const auto& t : out.tables)
        if (t.name == name)
            return t;
    FAIL("missing table " << name);
    throw std::logic_error("unreachable");
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("pnavg_test_" + name);
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("config text round trip and hash") {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::delayed_self;
    cfg.delta = 2.5e-7;
    cfg.offset = UniformOffset{1500.0};
    cfg.seed = 123456789012345ULL;
    cfg.deltas = {1e-6, 3.3e-8};
    const ExperimentConfig back = parse_config(cfg.to_text());
    CHECK(back.to_text() == cfg.to_text());
    CHECK(back.hash() == cfg.hash());

    ExperimentConfig moved = cfg;
    moved.output_dir = "/somewhere/else";
    moved.threads = 7;
    CHECK(moved.hash() == cfg.hash());
    ExperimentConfig reseeded = cfg;
    reseeded.seed += 1;
    CHECK(reseeded.hash() != cfg.hash());
    CHECK(format_hash(0x1234).size() == 16);
    CHECK(format_hash(0x1234) == "0000000000001234");
}

TEST_CASE("config parsing") {
    const ExperimentConfig c = parse_config("# comment\n"
                                            "beta = 2e4   # Hz\n"
                                            "\n"
                                            "deltas = 1e-6, 2e-6\n"
                                            "offset = normal:25\n"
                                            "f_c_scaled = 2e6\n");
    CHECK(c.beta == 2e4);
    CHECK(c.deltas == std::vector<double>{1e-6, 2e-6});
    CHECK(std::holds_alternative<NormalOffset>(c.offset));
    CHECK(c.fs == 128e6);
    CHECK(parse_config("fs = 1e8\nf_c_scaled = 2e6\n").fs == 1e8);
    CHECK(parse_config("scenario = delayed_self\ndelta = 1e-6\n").delta == 1e-6);

    CHECK_THROWS_AS(parse_config("bogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("beta = 1\nbeta = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("beta\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("beta = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario = nope\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("offset = cauchy:3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario = delayed_self\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("delta = 1e-6\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("beta = -1\n"), ParameterError);
    try {
        (void)parse_config("beta = 1\n\nwat = 3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(load_config("/nonexistent/pnavg.cfg"), IoError);
}

TEST_CASE("delay tags") {
    CHECK(delay_tag(1e-6) == "1em6");
    CHECK(delay_tag(1e-7) == "1em7");
    CHECK(delay_tag(2.5e-7) == "2p5em7");
}

TEST_CASE("figure-log output") {
    ExperimentConfig cfg = small_figure_config();
    const ExperimentOutput out = run_figure_log(cfg);
    const std::vector<std::string> names{"psd_log_base",          "psd_log_base_mc",       "psd_log_ind",
                                         "psd_log_ind_mc",        "psd_log_delta_1em6",    "psd_log_delta_1em6_mc",
                                         "psd_log_delta_1em7",    "psd_log_delta_1em7_mc"};
    REQUIRE(out.tables.size() == names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        const Table& t = out.tables[i];
        CHECK(t.name == names[i]);
        CHECK(t.x_label == "offset_hz");
        CHECK(t.y_label == "dbc_hz");
        REQUIRE(t.x.size() == t.y.size());
        for (std::size_t k = 0; k < t.x.size(); ++k) {
            REQUIRE(std::isfinite(t.y[k]));
            if (k > 0)
                REQUIRE(t.x[k] > t.x[k - 1]);
        }
    }
    const Table& base = find(out, "psd_log_base");
    const Table& ind = find(out, "psd_log_ind");
    CHECK(base.x.size() == 41);
    CHECK_THAT(base.x.front(), WithinRel(1e3, 1e-12));
    CHECK_THAT(base.x.back(), WithinRel(1e7, 1e-12));
    CHECK(base.source == "phase_shift_transform");
    CHECK(find(out, "psd_log_delta_1em6").source == "delayed_psd");
    for (std::size_t k = 1; k < base.y.size(); ++k)
        REQUIRE(base.y[k] < base.y[k - 1]);
    // Independent averaging halves the far-out spectrum.
    CHECK_THAT(base.y.back() - ind.y.back(), WithinAbs(10.0 * std::log10(2.0), 1e-3));

    cfg.deltas.clear();
    const ExperimentOutput two = run_figure_log(cfg);
    CHECK(two.tables.size() == 4);
}

TEST_CASE("figure-log Monte Carlo curves follow the analytic ones") {
    ExperimentConfig cfg = small_figure_config();
    cfg.n_paths = 256;
    cfg.segments_per_path = 4;
    cfg.deltas = {1e-7};
    cfg.log_points = 401;
    const ExperimentOutput out = run_figure_log(cfg);
    for (const std::string name : {"psd_log_base", "psd_log_ind", "psd_log_delta_1em7"}) {
        CAPTURE(name);
        const Table& a = find(out, name);
        const Table& mc = find(out, name + "_mc");
        REQUIRE(mc.x.size() > 10);
        double worst = 0.0;
        for (std::size_t k = 0; k < mc.x.size(); ++k) {
            // Log-linear interpolation of the analytic grid.
            auto it = std::upper_bound(a.x.begin(), a.x.end(), mc.x[k]);
            if (it == a.x.begin() || it == a.x.end())
                continue;
            const std::size_t j = static_cast<std::size_t>(it - a.x.begin());
            const double u = std::log(mc.x[k] / a.x[j - 1]) / std::log(a.x[j] / a.x[j - 1]);
            worst = std::max(worst, std::abs(mc.y[k] - (a.y[j - 1] + u * (a.y[j] - a.y[j - 1]))));
        }
        CHECK(worst < 1.0);
    }
}

TEST_CASE("figure-linear output and notch summary") {
    ExperimentConfig cfg = small_figure_config();
    cfg.linear_deltas = {1e-6, 2e-6};
    const ExperimentOutput out = run_figure_linear(cfg);
    CHECK(out.tables.size() == 8);
    const Table& base = find(out, "psd_lin_base");
    CHECK(base.x.size() == 1001);
    CHECK_THAT(base.x.front(), WithinRel(-2.5e6, 1e-12));
    CHECK_THAT(base.x.back(), WithinRel(2.5e6, 1e-12));
    (void)find(out, "psd_lin_delta_2em6_mc");

    REQUIRE(out.sidecars.size() == 1);
    CHECK(out.sidecars[0].name == "psd_lin_summary.json");
    const auto j = nlohmann::json::parse(out.sidecars[0].content);
    CHECK(j["config_hash"] == format_hash(cfg.hash()));
    const double step = j["grid_step_hz"];
    CHECK_THAT(step, WithinRel(5e3, 1e-12));
    const auto& curves = j["curves"];
    REQUIRE(curves.size() == 4);
    CHECK(curves[0]["name"] == "psd_lin_base");
    CHECK(curves[0]["monotone_positive_offsets"] == true);
    CHECK(curves[0]["notches_hz"].empty());
    CHECK(curves[1]["monotone_positive_offsets"] == true);
    const double s1 = curves[2]["notch_spacing_hz"];
    const double s2 = curves[3]["notch_spacing_hz"];
    CHECK(std::abs(s1 - 1e6) <= step);
    CHECK(std::abs(s2 - 5e5) <= step);
    CHECK(curves[2]["expected_spacing_hz"] == 1e6);
    CHECK(curves[2]["monotone_positive_offsets"] == false);
}

TEST_CASE("render formats") {
    const Table t{"demo", "unit_test", "offset_hz", "dbc_hz", {1.0, 2.0}, {-3.5, 0.125}};
    const std::string text = render(t, 0xabcULL, OutputFormat::table);
    CHECK(text == "# demo\n# source unit_test\n# config_hash 0000000000000abc\n# columns offset_hz dbc_hz\n"
                  "1 -3.5\n2 0.125\n");
    const auto j = nlohmann::json::parse(render(t, 0xabcULL, OutputFormat::json));
    CHECK(j["name"] == "demo");
    CHECK(j["y"][1] == 0.125);

    const Table bad{"bad", "x", "a", "b", {1.0, 1.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(render(bad, 0, OutputFormat::table), DomainError);
    const Table nan{"nan", "x", "a", "b", {1.0}, {std::nan("")}};
    CHECK_THROWS_AS(render(nan, 0, OutputFormat::table), DomainError);
}

TEST_CASE("write_output is byte-identical across runs and thread counts") {
    ExperimentConfig cfg = small_figure_config();
    cfg.deltas = {1e-6};
    cfg.output_dir = scratch_dir("a");
    const auto first = write_output(run_figure_log(cfg), cfg, OutputFormat::table);
    cfg.output_dir = scratch_dir("b");
    cfg.threads = 3;
    const auto second = write_output(run_figure_log(cfg), cfg, OutputFormat::table);
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].filename() == second[i].filename());
        CHECK(slurp(first[i]) == slurp(second[i]));
    }
    CHECK(first[0].filename() == "psd_log_base.data");
    fs::remove_all(scratch_dir("a"));
    fs::remove_all(scratch_dir("b"));
}

TEST_CASE("write_output reports unwritable destinations") {
    const fs::path blocker = scratch_dir("file");
    write_text_file(blocker, "x");
    ExperimentConfig cfg;
    cfg.output_dir = blocker / "sub";
    ExperimentOutput out;
    out.tables.push_back({"t", "s", "a", "b", {1.0}, {2.0}});
    CHECK_THROWS_AS(write_output(out, cfg, OutputFormat::table), IoError);
    CHECK_THROWS_AS(write_text_file(blocker / "sub" / "x.txt", "y"), IoError);
    fs::remove(blocker);
}

TEST_CASE("simulate scenarios") {
    for (Scenario s : {Scenario::base, Scenario::averaged_independent, Scenario::averaged_n, Scenario::delayed_self}) {
        CAPTURE(scenario_name(s));
        ExperimentConfig cfg;
        cfg.scenario = s;
        cfg.beta = 0.01;
        cfg.offset = UniformOffset{2e3};
        cfg.duration = 65536 / cfg.fs;
        if (s == Scenario::delayed_self)
            cfg.delta = 1e-6;
        const ExperimentOutput out = run_simulate(cfg);
        const std::string stem = "simulate_" + std::string(scenario_name(s));
        CHECK(find(out, stem).x.size() == 65536);
        REQUIRE(out.sidecars.size() == 1);
        CHECK(out.sidecars[0].name == stem + "_summary.json");
        const auto j = nlohmann::json::parse(out.sidecars[0].content);
        CHECK(j["scenario"] == scenario_name(s));
        if (s == Scenario::base) {
            (void)find(out, stem + "_phase");
            continue;
        }
        CHECK(find(out, stem + "_phase").x.size() == find(out, stem + "_predicted").x.size());
        CHECK(j["phase_rms_error_rad"].get<double>() < 1e-4);
        CHECK(j["loop_rms"].get<double>() < 1e-4);
    }
}

TEST_CASE("acceptance entry points validate the configuration") {
    ExperimentConfig cfg;
    cfg.beta = -1.0;
    CHECK_THROWS_AS(run_acceptance(cfg), ParameterError);
    CHECK_THROWS_AS(run_figure_log(cfg), ParameterError);
    CHECK(criterion_count() == 11);
    CHECK_THROWS_AS(run_criterion(12, ExperimentConfig{}), RangeError);
    CHECK_THROWS_AS(run_criterion(0, ExperimentConfig{}), RangeError);
}
