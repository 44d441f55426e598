#pragma once

#include <filesystem>
#include <string>

#include "vdcs/image.hpp"

namespace vdcs {

// Reads an 8-bit RGB PNG. Any other bit depth or color type is rejected.
Image8 read_png(const std::filesystem::path& path);

// Writes an 8-bit RGB PNG, no alpha, no interlacing. An optional tEXt
// comment is embedded under the "vdcs" keyword.
void write_png(const std::filesystem::path& path, const Image8& img,
               const std::string& comment = {});

}  // namespace vdcs
