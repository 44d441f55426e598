#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vdcs/image.hpp"

namespace vdcs {

// Baseline sequential JPEG encode (Annex-K tables scaled by quality,
// 4:2:0 chroma subsampling, standard Huffman tables) followed by decode.
// quality must lie in [1, 100]. Throws IoError on codec failure.
Image8 jpeg_roundtrip(const Image8& img, int quality);

// Encoded bytes only, same settings; used by tests to pin codec behavior.
std::vector<std::uint8_t> jpeg_encode(const Image8& img, int quality);

// Version string of the linked JPEG library, recorded in manifests.
std::string jpeg_library_version();

}  // namespace vdcs
