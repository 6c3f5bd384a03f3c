#pragma once

#include <cstdint>
#include <vector>

namespace chaosbreak {

/// Per-position key bytes K(1..n) for one diffusion stage. `initial` optionally carries
/// K(0), K(-1), ... for families with deeper memory; the shipped families keep all
/// initial conditions on the stage itself and leave it empty.
struct KeyStream {
    std::vector<std::uint8_t> values;
    std::vector<std::uint8_t> initial;

    std::size_t size() const { return values.size(); }
    /// K(k), 1-based.
    std::uint8_t at(std::size_t k) const { return values[k - 1]; }

    bool operator==(const KeyStream&) const = default;
};

} // namespace chaosbreak
