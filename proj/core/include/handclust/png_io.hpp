#pragma once

#include <string>

#include "handclust/image.hpp"

namespace handclust {

/// Reads an 8-bit gray or RGB PNG. Palette, 16-bit and alpha variants are
/// normalized to 8-bit gray/RGB on load. Throws on I/O or decode failure.
Raster read_png(const std::string& path);

void write_png(const std::string& path, const Raster& image);
void write_png(const std::string& path, const GrayImage& image);

} // namespace handclust
