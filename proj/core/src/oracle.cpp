#include "chaosbreak/oracle.hpp"

#include <string>

#include "chaosbreak/errors.hpp"

namespace chaosbreak {

AttackOracle::AttackOracle(CipherPipeline hidden, std::size_t width, std::size_t height)
    : hidden_(std::move(hidden)), width_(width), height_(height) {
    if (hidden_.length() != width_ * height_)
        throw DimensionError("AttackOracle: pipeline length != width*height");
}

void AttackOracle::check_dims(const ByteImage& img) const {
    if (img.width() != width_ || img.height() != height_)
        throw DimensionError("oracle query: expected " + std::to_string(width_) + "x" +
                             std::to_string(height_) + ", got " +
                             std::to_string(img.width()) + "x" + std::to_string(img.height()));
}

ByteImage AttackOracle::query_encrypt(const ByteImage& plain) {
    check_dims(plain);
    {
        std::lock_guard lock(mutex_);
        ++encrypt_queries_;
    }
    return hidden_.encrypt(plain);
}

ByteImage AttackOracle::query_decrypt(const ByteImage& cipher) {
    check_dims(cipher);
    {
        std::lock_guard lock(mutex_);
        ++decrypt_queries_;
    }
    return hidden_.decrypt(cipher);
}

std::uint64_t AttackOracle::encrypt_queries() const {
    std::lock_guard lock(mutex_);
    return encrypt_queries_;
}

std::uint64_t AttackOracle::decrypt_queries() const {
    std::lock_guard lock(mutex_);
    return decrypt_queries_;
}

} // namespace chaosbreak
