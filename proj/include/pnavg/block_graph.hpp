#pragma once

// Declarative description of an averaging circuit: blocks plus directed
// signal edges. Used for documentation, configuration checks and golden
// files; the simulators in circuit.hpp implement the same topologies.
//
// Text form, one statement per line, '#' starts a comment:
//
//   block <id> <kind> [parameter]
//   edge <from-id> <to-id>
//
// kinds: source, output, mixer, highpass <Hz>, lowpass <Hz>,
//        amplifier <gain>, delay <s>, multiplier <factor>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace pnavg {

enum class BlockKind { source, output, mixer, highpass, lowpass, amplifier, delay, multiplier };

std::string_view block_kind_name(BlockKind k);

struct Block {
    std::string id;
    BlockKind kind = BlockKind::mixer;
    double parameter = 0.0;

    friend bool operator==(const Block&, const Block&) = default;
};

struct Edge {
    std::string from;
    std::string to;

    friend bool operator==(const Edge&, const Edge&) = default;
};

class BlockGraph {
public:
    // Throws ConfigError when the topology is not a valid averaging circuit.
    BlockGraph(std::vector<Block> blocks, std::vector<Edge> edges);

    const std::vector<Block>& blocks() const noexcept { return blocks_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Block& block(std::string_view id) const;
    std::vector<std::string> inputs_of(std::string_view id) const;
    std::size_t feedback_loops() const noexcept { return loops_; }

    std::string to_text() const;

    friend bool operator==(const BlockGraph&, const BlockGraph&) = default;

private:
    std::size_t index_of(std::string_view id) const;
    void validate();

    std::vector<Block> blocks_;
    std::vector<Edge> edges_;
    std::size_t loops_ = 0;
};

BlockGraph parse_block_graph(std::string_view text);

// Two oscillators, mixer, highpass, and a 2-divider loop.
BlockGraph averaging_circuit_graph(double highpass_cut, double lowpass_cut, double loop_gain = 4.0);
// n oscillators multiplied together followed by a highpass.
BlockGraph mixing_stage_graph(std::size_t n, double highpass_cut);
// Regenerative n-divider: mixer, lowpass, amplifier and (n-1) multiplier.
BlockGraph divider_graph(std::size_t n, double lowpass_cut, double loop_gain);
// One oscillator averaged with a delayed copy of itself.
BlockGraph delayed_self_graph(double delay, double highpass_cut, double lowpass_cut, double loop_gain = 4.0);

} // namespace pnavg
