#include "pnavg/block_graph.hpp"

#include "pnavg/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace pnavg {

namespace {

struct KindInfo {
    BlockKind kind;
    std::string_view name;
    bool has_parameter;
};

constexpr KindInfo kinds[] = {
    {BlockKind::source, "source", false},       {BlockKind::output, "output", false},
    {BlockKind::mixer, "mixer", false},         {BlockKind::highpass, "highpass", true},
    {BlockKind::lowpass, "lowpass", true},      {BlockKind::amplifier, "amplifier", true},
    {BlockKind::delay, "delay", true},          {BlockKind::multiplier, "multiplier", true},
};

const KindInfo& info(BlockKind k) {
    for (const auto& i : kinds)
        if (i.kind == k)
            return i;
    throw ConfigError("unknown block kind");
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::size_t expected_inputs(BlockKind k) {
    switch (k) {
    case BlockKind::source:
        return 0;
    case BlockKind::mixer:
        return 2;
    default:
        return 1;
    }
}

} // namespace

std::string_view block_kind_name(BlockKind k) { return info(k).name; }

BlockGraph::BlockGraph(std::vector<Block> blocks, std::vector<Edge> edges)
    : blocks_(std::move(blocks)), edges_(std::move(edges)) {
    validate();
}

std::size_t BlockGraph::index_of(std::string_view id) const {
    for (std::size_t i = 0; i < blocks_.size(); ++i)
        if (blocks_[i].id == id)
            return i;
    throw ConfigError("block graph: unknown block '" + std::string(id) + "'");
}

const Block& BlockGraph::block(std::string_view id) const { return blocks_[index_of(id)]; }

std::vector<std::string> BlockGraph::inputs_of(std::string_view id) const {
    std::vector<std::string> in;
    for (const auto& e : edges_)
        if (e.to == id)
            in.push_back(e.from);
    return in;
}

void BlockGraph::validate() {
    const std::size_t n = blocks_.size();
    std::set<std::string> ids;
    for (const auto& b : blocks_) {
        if (b.id.empty())
            throw ConfigError("block graph: empty block id");
        if (!ids.insert(b.id).second)
            throw ConfigError("block graph: duplicate block id '" + b.id + "'");
        if (info(b.kind).has_parameter && (!std::isfinite(b.parameter) || b.parameter <= 0.0) &&
            !(b.kind == BlockKind::delay && b.parameter == 0.0))
            throw ConfigError("block graph: block '" + b.id + "' needs a positive parameter");
    }

    std::vector<std::vector<std::size_t>> succ(n);
    std::vector<std::size_t> in_degree(n, 0);
    for (const auto& e : edges_) {
        const std::size_t from = index_of(e.from);
        const std::size_t to = index_of(e.to);
        succ[from].push_back(to);
        ++in_degree[to];
    }

    std::size_t outputs = 0, sources = 0, output_index = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& b = blocks_[i];
        if (b.kind == BlockKind::output) {
            ++outputs;
            output_index = i;
            if (!succ[i].empty())
                throw ConfigError("block graph: output '" + b.id + "' must not drive other blocks");
        }
        if (b.kind == BlockKind::source)
            ++sources;
        if (in_degree[i] != expected_inputs(b.kind))
            throw ConfigError("block graph: block '" + b.id + "' has " + std::to_string(in_degree[i]) +
                              " inputs, expected " + std::to_string(expected_inputs(b.kind)));
    }
    if (outputs != 1)
        throw ConfigError("block graph: exactly one output block is required");
    if (sources == 0)
        throw ConfigError("block graph: at least one source is required");

    // reach[i][j]: j reachable from i along edges.
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> stack{i};
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v : succ[u])
                if (!reach[i][v]) {
                    reach[i][v] = true;
                    stack.push_back(v);
                }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (i != output_index && !reach[i][output_index])
            throw ConfigError("block graph: block '" + blocks_[i].id + "' does not reach the output");
        bool fed = blocks_[i].kind == BlockKind::source;
        for (std::size_t s = 0; s < n && !fed; ++s)
            fed = blocks_[s].kind == BlockKind::source && reach[s][i];
        if (!fed)
            throw ConfigError("block graph: block '" + blocks_[i].id + "' is not driven by any source");
    }

    // Every cycle has to be a divider loop: mixer -> lowpass -> (amplifier |
    // multiplier)* -> back to the mixer.
    std::vector<bool> seen(n, false);
    loops_ = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (seen[i] || !reach[i][i])
            continue;
        std::vector<std::size_t> members;
        for (std::size_t j = 0; j < n; ++j)
            if (reach[i][j] && reach[j][i]) {
                members.push_back(j);
                seen[j] = true;
            }
        std::size_t mixers = 0, lowpasses = 0;
        for (std::size_t m : members) {
            const BlockKind k = blocks_[m].kind;
            if (k == BlockKind::mixer)
                ++mixers;
            else if (k == BlockKind::lowpass)
                ++lowpasses;
            else if (k != BlockKind::amplifier && k != BlockKind::multiplier)
                throw ConfigError("block graph: feedback through '" + blocks_[m].id + "' is not a divider loop");
            std::size_t inner = 0;
            for (std::size_t v : succ[m])
                if (std::find(members.begin(), members.end(), v) != members.end()) {
                    ++inner;
                    if (k == BlockKind::mixer && blocks_[v].kind != BlockKind::lowpass)
                        throw ConfigError("block graph: divider mixer '" + blocks_[m].id +
                                          "' must feed a lowpass");
                }
            if (inner != 1)
                throw ConfigError("block graph: feedback loop is not a simple cycle");
        }
        if (mixers != 1 || lowpasses != 1)
            throw ConfigError("block graph: a divider loop needs exactly one mixer and one lowpass");
        ++loops_;
    }
}

std::string BlockGraph::to_text() const {
    std::ostringstream out;
    out << "# pnavg block graph v1\n";
    for (const auto& b : blocks_) {
        out << "block " << b.id << ' ' << block_kind_name(b.kind);
        if (info(b.kind).has_parameter)
            out << ' ' << format_number(b.parameter);
        out << '\n';
    }
    for (const auto& e : edges_)
        out << "edge " << e.from << ' ' << e.to << '\n';
    return out.str();
}

BlockGraph parse_block_graph(std::string_view text) {
    std::vector<Block> blocks;
    std::vector<Edge> edges;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream fields(line);
        std::string keyword;
        if (!(fields >> keyword))
            continue;
        auto fail = [&](const std::string& why) {
            throw ConfigError("block graph line " + std::to_string(line_no) + ": " + why);
        };
        if (keyword == "block") {
            Block b;
            std::string kind;
            if (!(fields >> b.id >> kind))
                fail("expected 'block <id> <kind>'");
            const KindInfo* match = nullptr;
            for (const auto& k : kinds)
                if (k.name == kind)
                    match = &k;
            if (match == nullptr)
                fail("unknown block kind '" + kind + "'");
            b.kind = match->kind;
            if (match->has_parameter) {
                std::string value;
                if (!(fields >> value))
                    fail("block kind '" + kind + "' needs a parameter");
                const auto res = std::from_chars(value.data(), value.data() + value.size(), b.parameter);
                if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
                    fail("bad number '" + value + "'");
            }
            blocks.push_back(std::move(b));
        } else if (keyword == "edge") {
            Edge e;
            if (!(fields >> e.from >> e.to))
                fail("expected 'edge <from> <to>'");
            edges.push_back(std::move(e));
        } else {
            fail("unknown statement '" + keyword + "'");
        }
        std::string extra;
        if (fields >> extra)
            fail("trailing text '" + extra + "'");
    }
    return BlockGraph(std::move(blocks), std::move(edges));
}

BlockGraph averaging_circuit_graph(double highpass_cut, double lowpass_cut, double loop_gain) {
    return BlockGraph(
        {
            {"osc1", BlockKind::source, 0.0},
            {"osc2", BlockKind::source, 0.0},
            {"m1", BlockKind::mixer, 0.0},
            {"hpf", BlockKind::highpass, highpass_cut},
            {"m2", BlockKind::mixer, 0.0},
            {"lpf", BlockKind::lowpass, lowpass_cut},
            {"amp", BlockKind::amplifier, loop_gain},
            {"out", BlockKind::output, 0.0},
        },
        {
            {"osc1", "m1"},
            {"osc2", "m1"},
            {"m1", "hpf"},
            {"hpf", "m2"},
            {"m2", "lpf"},
            {"lpf", "amp"},
            {"amp", "m2"},
            {"lpf", "out"},
        });
}

BlockGraph mixing_stage_graph(std::size_t n, double highpass_cut) {
    if (n < 2)
        throw ConfigError("mixing stage needs at least two oscillators");
    std::vector<Block> blocks;
    std::vector<Edge> edges;
    std::vector<std::string> level;
    for (std::size_t i = 1; i <= n; ++i) {
        blocks.push_back({"osc" + std::to_string(i), BlockKind::source, 0.0});
        level.push_back(blocks.back().id);
    }
    // Pairwise tree of mixers; an odd leftover is carried to the next level.
    std::size_t mixer_count = 0;
    while (level.size() > 1) {
        std::vector<std::string> next;
        for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
            const std::string id = "m" + std::to_string(++mixer_count);
            blocks.push_back({id, BlockKind::mixer, 0.0});
            edges.push_back({level[i], id});
            edges.push_back({level[i + 1], id});
            next.push_back(id);
        }
        if (level.size() % 2 == 1)
            next.push_back(level.back());
        level = std::move(next);
    }
    blocks.push_back({"hpf", BlockKind::highpass, highpass_cut});
    blocks.push_back({"out", BlockKind::output, 0.0});
    edges.push_back({level.front(), "hpf"});
    edges.push_back({"hpf", "out"});
    return BlockGraph(std::move(blocks), std::move(edges));
}

BlockGraph divider_graph(std::size_t n, double lowpass_cut, double loop_gain) {
    if (n < 2)
        throw ConfigError("divider ratio must be at least 2");
    std::vector<Block> blocks{
        {"in", BlockKind::source, 0.0},
        {"mix", BlockKind::mixer, 0.0},
        {"lpf", BlockKind::lowpass, lowpass_cut},
        {"amp", BlockKind::amplifier, loop_gain},
    };
    std::vector<Edge> edges{{"in", "mix"}, {"mix", "lpf"}, {"lpf", "amp"}};
    if (n > 2) {
        blocks.push_back({"mul", BlockKind::multiplier, static_cast<double>(n - 1)});
        edges.push_back({"amp", "mul"});
        edges.push_back({"mul", "mix"});
    } else {
        edges.push_back({"amp", "mix"});
    }
    blocks.push_back({"out", BlockKind::output, 0.0});
    edges.push_back({"lpf", "out"});
    return BlockGraph(std::move(blocks), std::move(edges));
}

BlockGraph delayed_self_graph(double delay, double highpass_cut, double lowpass_cut, double loop_gain) {
    return BlockGraph(
        {
            {"osc", BlockKind::source, 0.0},
            {"dly", BlockKind::delay, delay},
            {"m1", BlockKind::mixer, 0.0},
            {"hpf", BlockKind::highpass, highpass_cut},
            {"m2", BlockKind::mixer, 0.0},
            {"lpf", BlockKind::lowpass, lowpass_cut},
            {"amp", BlockKind::amplifier, loop_gain},
            {"out", BlockKind::output, 0.0},
        },
        {
            {"osc", "m1"},
            {"osc", "dly"},
            {"dly", "m1"},
            {"m1", "hpf"},
            {"hpf", "m2"},
            {"m2", "lpf"},
            {"lpf", "amp"},
            {"amp", "m2"},
            {"lpf", "out"},
        });
}

} // namespace pnavg
