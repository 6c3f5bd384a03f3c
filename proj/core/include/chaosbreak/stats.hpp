#pragma once

#include <array>
#include <cstdint>

#include <json.hpp>

#include "chaosbreak/image.hpp"

namespace chaosbreak {

enum class Direction : std::uint8_t { horizontal, vertical, diagonal };

struct CorrelationResult {
    double value = 0.0;
    bool degenerate = false; // zero-variance sample; value reported as 0
};

struct StatsReport {
    std::array<std::uint64_t, 256> histogram{};
    double corr_horizontal = 0.0;
    double corr_vertical = 0.0;
    double corr_diagonal = 0.0;
    double npcr_percent = 0.0;
    double uaci_percent = 0.0;
    double entropy_bits = 0.0;
    bool has_diff_stats = false; // npcr/uaci populated
};

std::array<std::uint64_t, 256> histogram(const ByteImage& img);

/// Pearson correlation over adjacent pixel pairs. sample_count == 0 uses the full
/// population (deterministic); otherwise a deterministic evenly-strided subsample of
/// at most sample_count pairs.
CorrelationResult adjacent_correlation(const ByteImage& img, Direction dir,
                                       std::size_t sample_count = 0);

/// 100 * #(c1 != c2) / (M*N).
double npcr(const ByteImage& c1, const ByteImage& c2);

/// 100 * mean(|c1 - c2|) / 255.
double uaci(const ByteImage& c1, const ByteImage& c2);

/// Shannon entropy of the 256-bin histogram, in bits.
double entropy_bits(const ByteImage& img);

/// Chi-square statistic of the histogram against the uniform distribution.
double chi_square_uniform(const std::array<std::uint64_t, 256>& hist);

/// 5% critical value at 255 degrees of freedom, the near-uniformity pass bar.
inline constexpr double kChiSquare255Critical = 293.25;

nlohmann::json stats_report_to_json(const StatsReport& report);

} // namespace chaosbreak
