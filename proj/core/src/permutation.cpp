#include "chaosbreak/permutation.hpp"

#include <algorithm>
#include <numeric>

namespace chaosbreak {

Permutation::Permutation(std::vector<std::uint32_t> map_one_based) {
    const std::size_t n = map_one_based.size();
    if (n == 0) throw DimensionError("Permutation: size must be positive");
    map_.resize(n);
    std::vector<bool> seen(n, false);
    for (std::size_t j = 0; j < n; ++j) {
        const std::uint32_t target = map_one_based[j];
        if (target < 1 || target > n)
            throw DimensionError("Permutation: target " + std::to_string(target) +
                                 " outside 1.." + std::to_string(n));
        if (seen[target - 1])
            throw DimensionError("Permutation: target " + std::to_string(target) +
                                 " appears twice");
        seen[target - 1] = true;
        map_[j] = target - 1;
    }
}

Permutation Permutation::identity(std::size_t n) {
    std::vector<std::uint32_t> m(n);
    std::iota(m.begin(), m.end(), 1u);
    return Permutation(std::move(m));
}

Permutation Permutation::from_pairs(
    std::size_t n, std::span<const std::pair<std::uint32_t, std::uint32_t>> pairs) {
    if (pairs.size() != n)
        throw DimensionError("Permutation: expected " + std::to_string(n) + " pairs, got " +
                             std::to_string(pairs.size()));
    std::vector<std::uint32_t> m(n, 0);
    for (const auto& [a, b] : pairs) {
        if (a < 1 || a > n)
            throw DimensionError("Permutation: position " + std::to_string(a) +
                                 " outside 1.." + std::to_string(n));
        if (m[a - 1] != 0)
            throw DimensionError("Permutation: position " + std::to_string(a) +
                                 " listed twice");
        m[a - 1] = b;
    }
    return Permutation(std::move(m));
}

std::vector<std::uint32_t> Permutation::to_one_based() const {
    std::vector<std::uint32_t> out(map_.size());
    for (std::size_t j = 0; j < map_.size(); ++j) out[j] = map_[j] + 1;
    return out;
}

ByteImage Permutation::apply(const ByteImage& img) const {
    if (img.size() != map_.size())
        throw DimensionError("Permutation::apply: image size " + std::to_string(img.size()) +
                             " != permutation size " + std::to_string(map_.size()));
    std::vector<std::uint8_t> out(map_.size());
    const auto& in = img.data();
    for (std::size_t j = 0; j < map_.size(); ++j) out[j] = in[map_[j]];
    return ByteImage(img.width(), img.height(), std::move(out));
}

std::vector<std::uint8_t> Permutation::apply(std::span<const std::uint8_t> seq) const {
    if (seq.size() != map_.size())
        throw DimensionError("Permutation::apply: sequence size mismatch");
    std::vector<std::uint8_t> out(map_.size());
    for (std::size_t j = 0; j < map_.size(); ++j) out[j] = seq[map_[j]];
    return out;
}

Permutation Permutation::inverted() const {
    Permutation inv;
    inv.map_.resize(map_.size());
    for (std::size_t j = 0; j < map_.size(); ++j) inv.map_[map_[j]] = static_cast<std::uint32_t>(j);
    return inv;
}

bool Permutation::is_identity() const {
    for (std::size_t j = 0; j < map_.size(); ++j)
        if (map_[j] != j) return false;
    return true;
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
    if (outer.size() != inner.size())
        throw DimensionError("compose: size mismatch");
    const std::size_t n = outer.size();
    std::vector<std::uint32_t> m(n);
    for (std::size_t j = 1; j <= n; ++j) m[j - 1] = inner.at(outer.at(j));
    return Permutation(std::move(m));
}

} // namespace chaosbreak
