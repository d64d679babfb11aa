#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace handclust {

/// Which pixel value family carries the ink. Every invert records the
/// resulting polarity so downstream stages can assert their expectations.
enum class Polarity { InkDarkOnLight, InkBrightOnDark };

/// Generic 8-bit raster, 1 (gray) or 3 (RGB) channels, row-major.
struct Raster {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> pixels;

    Raster() = default;
    Raster(int w, int h, int ch, std::uint8_t fill = 0)
        : width(w), height(h), channels(ch),
          pixels(static_cast<std::size_t>(w) * h * ch, fill) {}

    bool empty() const { return width <= 0 || height <= 0; }

    std::uint8_t& at(int x, int y, int ch = 0) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + ch];
    }
    std::uint8_t at(int x, int y, int ch = 0) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + ch];
    }
};

struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // row-major intensities
    Polarity polarity = Polarity::InkDarkOnLight;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0,
              Polarity pol = Polarity::InkDarkOnLight)
        : width(w), height(h),
          pixels(static_cast<std::size_t>(w) * h, fill), polarity(pol) {}

    bool empty() const { return width <= 0 || height <= 0; }

    std::uint8_t& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
};

/// Foreground/background mask; foreground (1) is always ink.
struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits; // 0 background, 1 foreground

    BinaryImage() = default;
    BinaryImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill) {}

    bool empty() const { return width <= 0 || height <= 0; }

    std::uint8_t& at(int x, int y) {
        return bits[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t at(int x, int y) const {
        return bits[static_cast<std::size_t>(y) * width + x];
    }

    std::size_t foreground_count() const {
        std::size_t n = 0;
        for (auto b : bits) n += b != 0;
        return n;
    }
};

/// Per-pixel Euclidean distance (in pixels) to the nearest background pixel.
struct DistanceMap {
    int width = 0;
    int height = 0;
    std::vector<float> values;

    float at(int x, int y) const {
        return values[static_cast<std::size_t>(y) * width + x];
    }
};

/// Region labels: 0 = background, regions numbered 1..label_count in
/// raster-scan first-encounter order.
struct LabelImage {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> labels;
    int label_count = 0;

    std::int32_t at(int x, int y) const {
        return labels[static_cast<std::size_t>(y) * width + x];
    }
};

} // namespace handclust
