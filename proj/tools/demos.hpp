#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace chaosbreak::demos {

/// Runs the 9-pixel five-stage chain-attack walkthrough, printing every
/// intermediate and checking each against the expected conformance values.
/// Returns 0 on full agreement.
int worked_example(std::uint64_t seed, nlohmann::json& report);

/// Builds a seeded three-stage cipher at the given size, encrypts a test image,
/// runs the impulse-step attack and decrypts with the recovered pipeline. Writes
/// plain/cipher/deciphered images and the generated config under outdir.
int break3(std::size_t width, std::size_t height, std::uint64_t seed,
           const std::string& image_path, const std::string& outdir,
           nlohmann::json& report);

} // namespace chaosbreak::demos
