#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "handclust/image.hpp"

namespace handclust {

/// Axis-aligned pixel box, inclusive-exclusive, origin top-left.
struct BBox {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    bool valid() const { return x0 < x1 && y0 < y1; }

    BBox clipped_to(const BBox& bounds) const {
        return BBox{std::max(x0, bounds.x0), std::max(y0, bounds.y0),
                    std::min(x1, bounds.x1), std::min(y1, bounds.y1)};
    }
    bool operator==(const BBox&) const = default;
};

struct LineBox {
    BBox bbox;
    std::vector<BBox> words;
    int page_index = 1;
};

struct HocrParseResult {
    std::vector<LineBox> lines;
    std::vector<std::string> errors; // per-element problems, non-fatal
};

/// Parses hOCR text, consuming only ocr_line / ocrx_word elements, in
/// document order. Words bind to the most recent line and are clipped to
/// its bounds. Malformed elements are skipped and reported in `errors`;
/// zero parseable lines is a hard error.
HocrParseResult parse_hocr(std::string_view hocr_text);

/// Emits a minimal normalized hOCR document for the given lines.
/// parse_hocr(write_hocr(lines)) reproduces all coordinates exactly.
std::string write_hocr(const std::vector<LineBox>& lines);

/// Center crop removing floor(fraction * dim) pixels from every side.
/// Offsets of the crop origin are reported through off_x / off_y.
Raster crop_margins(const Raster& image, double fraction, int* off_x = nullptr,
                    int* off_y = nullptr);

struct PageRecord {
    int page_index = 1;
    Raster image;
    std::vector<LineBox> lines;
    std::string hand_tag;
};

/// Pixel-exact sub-raster. Out-of-bounds boxes are clipped with a warning;
/// an empty intersection is an error.
Raster extract_bbox_image(const PageRecord& page, const BBox& bbox,
                          std::vector<std::string>* warnings = nullptr);

/// Crops the page image by `fraction` per side and rewrites the line/word
/// boxes into the cropped frame: boxes fully inside the removed margin are
/// dropped, straddling boxes are clipped.
void apply_margin_crop(PageRecord& page, double fraction);

} // namespace handclust
