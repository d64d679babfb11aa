#pragma once

#include <cstdint>
#include <string>

#include "handclust/hocr.hpp"

namespace handclust {

/// Stylistic knobs of a synthetic hand. Doubling the geometric parameters
/// doubles the rendered geometry for the same seed, which is what the
/// scale-equivariance tests rely on.
struct HandStyle {
    double stroke_thickness = 3.0;
    double char_height = 20.0;
    double char_width_factor = 0.6; // char width = factor * char height
    double slant = 0.0;             // horizontal shear, px per px of height
    double gap = 4.0;               // inter-character gap, px
    double loop_probability = 0.3;  // chance a glyph closes into a loop
    int ink_value = 40;             // mean ink intensity on white paper
};

struct SynthPageLayout {
    int lines_per_page = 6;
    int words_per_line = 5;
    int chars_per_word = 5;
    int margin = 24;       // page border, px
    int line_spacing = 18; // vertical gap between lines, px
    int word_gap = 14;     // horizontal gap between words, px
};

/// Renders a page of random-polyline "handwriting" with line and word
/// boxes, deterministic in (style, layout, seed). The page stands in for a
/// scanned manuscript page in tests and experiments.
PageRecord synth_page(const HandStyle& style, const SynthPageLayout& layout,
                      int page_index, std::uint64_t seed, std::string hand_tag);

/// Renders one isolated text line (single line box with word boxes) on its
/// own small page; convenient for per-bbox feature tests.
PageRecord synth_line(const HandStyle& style, int chars, std::uint64_t seed);

} // namespace handclust
