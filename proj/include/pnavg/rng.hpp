#pragma once

#include <cstdint>
#include <random>

namespace pnavg {

// Identifies one independent random stream: the experiment's master seed plus
// the index of the path (or trial) inside the ensemble. Two equal SeedIds
// always produce the same numbers, no matter which thread asks or in which
// order the ensemble is generated.
struct SeedId {
    std::uint64_t master = 0;
    std::uint64_t index = 0;

    friend bool operator==(const SeedId&, const SeedId&) = default;
};

// Purposes are mixed into the stream key so the phase path and the frequency
// offset of one oscillator never share random numbers.
enum class StreamPurpose : std::uint64_t {
    phase = 0x7068617365ULL,
    offset = 0x6f6666736574ULL,
};

// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t stream_key(SeedId id, StreamPurpose purpose) noexcept {
    return mix64(mix64(mix64(id.master) ^ id.index) ^ static_cast<std::uint64_t>(purpose));
}

using Engine = std::mt19937_64;

// The stream key is already a full-avalanche hash, so it seeds the engine
// directly.
inline Engine make_engine(SeedId id, StreamPurpose purpose) { return Engine(stream_key(id, purpose)); }

} // namespace pnavg
