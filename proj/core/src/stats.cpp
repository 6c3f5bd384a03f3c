#include "chaosbreak/stats.hpp"

#include <cmath>
#include <cstdlib>

#include "chaosbreak/errors.hpp"

namespace chaosbreak {

std::array<std::uint64_t, 256> histogram(const ByteImage& img) {
    std::array<std::uint64_t, 256> counts{};
    for (std::uint8_t v : img.data()) ++counts[v];
    return counts;
}

namespace {

struct PairAccumulator {
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    std::size_t n = 0;

    void add(double x, double y) {
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
        ++n;
    }

    CorrelationResult pearson() const {
        if (n == 0) return {0.0, true};
        const double nn = static_cast<double>(n);
        const double vx = sxx - sx * sx / nn;
        const double vy = syy - sy * sy / nn;
        if (vx <= 0.0 || vy <= 0.0) return {0.0, true};
        return {(sxy - sx * sy / nn) / std::sqrt(vx * vy), false};
    }
};

} // namespace

CorrelationResult adjacent_correlation(const ByteImage& img, Direction dir,
                                       std::size_t sample_count) {
    if (img.width() < 2 || img.height() < 2)
        throw DimensionError("adjacent_correlation: image must be at least 2x2");

    const std::size_t w = img.width();
    const std::size_t h = img.height();
    std::size_t total = 0;
    switch (dir) {
    case Direction::horizontal: total = h * (w - 1); break;
    case Direction::vertical: total = (h - 1) * w; break;
    case Direction::diagonal: total = (h - 1) * (w - 1); break;
    }
    const std::size_t stride =
        (sample_count == 0 || sample_count >= total) ? 1 : total / sample_count;

    PairAccumulator acc;
    for (std::size_t idx = 0; idx < total; idx += stride) {
        std::size_t r = 0, c = 0;
        switch (dir) {
        case Direction::horizontal:
            r = idx / (w - 1);
            c = idx % (w - 1);
            acc.add(img.at(r, c), img.at(r, c + 1));
            break;
        case Direction::vertical:
            r = idx / w;
            c = idx % w;
            acc.add(img.at(r, c), img.at(r + 1, c));
            break;
        case Direction::diagonal:
            r = idx / (w - 1);
            c = idx % (w - 1);
            acc.add(img.at(r, c), img.at(r + 1, c + 1));
            break;
        }
    }
    return acc.pearson();
}

double npcr(const ByteImage& c1, const ByteImage& c2) {
    if (c1.width() != c2.width() || c1.height() != c2.height())
        throw DimensionError("npcr: dimension mismatch");
    std::size_t diff = 0;
    for (std::size_t i = 0; i < c1.size(); ++i) diff += (c1.data()[i] != c2.data()[i]);
    return 100.0 * static_cast<double>(diff) / static_cast<double>(c1.size());
}

double uaci(const ByteImage& c1, const ByteImage& c2) {
    if (c1.width() != c2.width() || c1.height() != c2.height())
        throw DimensionError("uaci: dimension mismatch");
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < c1.size(); ++i)
        sum += static_cast<std::uint64_t>(std::abs(int(c1.data()[i]) - int(c2.data()[i])));
    return 100.0 * static_cast<double>(sum) / (255.0 * static_cast<double>(c1.size()));
}

double entropy_bits(const ByteImage& img) {
    const auto counts = histogram(img);
    const double n = static_cast<double>(img.size());
    double h = 0.0;
    for (std::uint64_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

double chi_square_uniform(const std::array<std::uint64_t, 256>& hist) {
    std::uint64_t n = 0;
    for (std::uint64_t c : hist) n += c;
    const double expected = static_cast<double>(n) / 256.0;
    double chi = 0.0;
    for (std::uint64_t c : hist) {
        const double d = static_cast<double>(c) - expected;
        chi += d * d / expected;
    }
    return chi;
}

nlohmann::json stats_report_to_json(const StatsReport& report) {
    nlohmann::json doc;
    doc["histogram"] = report.histogram;
    doc["correlation"] = {{"horizontal", report.corr_horizontal},
                          {"vertical", report.corr_vertical},
                          {"diagonal", report.corr_diagonal}};
    doc["entropy_bits"] = report.entropy_bits;
    if (report.has_diff_stats) {
        doc["npcr_percent"] = report.npcr_percent;
        doc["uaci_percent"] = report.uaci_percent;
    } else {
        doc["npcr_percent"] = nullptr;
        doc["uaci_percent"] = nullptr;
    }
    return doc;
}

} // namespace chaosbreak
