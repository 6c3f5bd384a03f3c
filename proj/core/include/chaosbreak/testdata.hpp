#pragma once

#include <cstdint>

#include "chaosbreak/image.hpp"
#include "chaosbreak/pipeline.hpp"
#include "chaosbreak/rng.hpp"

namespace chaosbreak {

/// Deterministic stand-in for a natural photograph: smooth shaded blobs and a
/// gradient background, so adjacent-pixel correlations land in the 0.9 range typical
/// of camera images.
ByteImage natural_test_image(std::size_t width, std::size_t height);

/// Seeded random pipelines for demos and fixtures (encryption-side stage maps).
CipherPipeline random_pndcc(Rng& rng, const StagePattern& pattern, std::size_t length,
                            int rounds = 1);
CipherPipeline random_pdcc(Rng& rng, const StagePattern& pattern, std::size_t length,
                           int rounds = 1);

} // namespace chaosbreak
