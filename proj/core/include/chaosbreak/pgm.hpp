#pragma once

#include <string>

#include "chaosbreak/image.hpp"

namespace chaosbreak {

/// Binary PGM ("P5", maxval 255) reader. Rejects other magics (including ASCII "P2"),
/// maxval != 255, and truncated payloads.
ByteImage load_pgm(const std::string& path);

/// Canonical header "P5\n<w> <h>\n255\n" followed by raw bytes; save-then-load is
/// byte-identical.
void save_pgm(const ByteImage& img, const std::string& path);

} // namespace chaosbreak
