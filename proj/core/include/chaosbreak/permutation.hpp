#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "chaosbreak/image.hpp"

namespace chaosbreak {

/// Bijection on positions 1..n with gather semantics: applying a permutation p to a
/// sequence produces out[j] = in[p(j)]. A pair (a, b) in the usual listing therefore
/// means p(a) = b: output position a takes its value from input position b.
///
/// Public accessors speak 1-based positions; storage is 0-based.
class Permutation {
public:
    Permutation() = default;

    /// From 1-based targets: map1[j-1] == p(j).
    explicit Permutation(std::vector<std::uint32_t> map_one_based);

    static Permutation identity(std::size_t n);

    /// Builds from 1-based (a, b) pairs meaning p(a) = b; pairs may arrive unordered.
    static Permutation from_pairs(std::size_t n,
                                  std::span<const std::pair<std::uint32_t, std::uint32_t>> pairs);

    std::size_t size() const { return map_.size(); }

    /// p(pos), both 1-based.
    std::uint32_t at(std::size_t pos) const { return map_[pos - 1] + 1; }

    /// 1-based targets, same layout the JSON schema uses.
    std::vector<std::uint32_t> to_one_based() const;

    ByteImage apply(const ByteImage& img) const;
    std::vector<std::uint8_t> apply(std::span<const std::uint8_t> seq) const;

    Permutation inverted() const;
    bool is_identity() const;

    bool operator==(const Permutation&) const = default;

private:
    std::vector<std::uint32_t> map_; // 0-based: out[j] = in[map_[j]]
};

/// apply(compose(outer, inner), x) == apply(outer, apply(inner, x)); as a position
/// function, compose(a, b)(k) = b(a(k)).
Permutation compose(const Permutation& outer, const Permutation& inner);

} // namespace chaosbreak
