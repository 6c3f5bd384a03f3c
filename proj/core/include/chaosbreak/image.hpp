#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "chaosbreak/errors.hpp"

namespace chaosbreak {

/// 8-bit grayscale image, stored row-major. Position k in 1-based math maps to
/// data()[k-1]; all byte values are taken mod 256 by construction.
class ByteImage {
public:
    ByteImage() = default;

    ByteImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (width_ == 0 || height_ == 0)
            throw DimensionError("ByteImage: dimensions must be positive");
        if (data_.size() != width_ * height_)
            throw DimensionError("ByteImage: data size " + std::to_string(data_.size()) +
                                 " != " + std::to_string(width_ * height_));
    }

    static ByteImage filled(std::size_t width, std::size_t height, std::uint8_t value) {
        return ByteImage(width, height,
                         std::vector<std::uint8_t>(width * height, value));
    }

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t size() const { return data_.size(); }

    const std::vector<std::uint8_t>& data() const { return data_; }
    std::vector<std::uint8_t>& data() { return data_; }

    std::uint8_t at(std::size_t row, std::size_t col) const { return data_[row * width_ + col]; }
    std::uint8_t& at(std::size_t row, std::size_t col) { return data_[row * width_ + col]; }

    /// 1-based linear access, mirroring the positions k = 1..M*N used by the math APIs.
    std::uint8_t pixel(std::size_t k) const { return data_[k - 1]; }
    std::uint8_t& pixel(std::size_t k) { return data_[k - 1]; }

    bool operator==(const ByteImage&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<std::uint8_t> data_;
};

} // namespace chaosbreak
