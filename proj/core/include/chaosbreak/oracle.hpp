#pragma once

#include <cstdint>
#include <mutex>

#include "chaosbreak/image.hpp"
#include "chaosbreak/pipeline.hpp"

namespace chaosbreak {

/// Black-box interface between a hidden pipeline and the attack code. Attacks may
/// only call query_encrypt/query_decrypt; the pipeline, its keys and permutations are
/// not reachable through this type. Queries are deterministic (fixed keys and initial
/// conditions), thread-safe, and each bumps its counter exactly once.
class AttackOracle {
public:
    AttackOracle(CipherPipeline hidden, std::size_t width, std::size_t height);

    ByteImage query_encrypt(const ByteImage& plain);
    ByteImage query_decrypt(const ByteImage& cipher);

    std::uint64_t encrypt_queries() const;
    std::uint64_t decrypt_queries() const;

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t length() const { return width_ * height_; }

private:
    void check_dims(const ByteImage& img) const;

    CipherPipeline hidden_;
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    mutable std::mutex mutex_;
    std::uint64_t encrypt_queries_ = 0;
    std::uint64_t decrypt_queries_ = 0;
};

} // namespace chaosbreak
