#include "handclust/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "handclust/rng.hpp"

namespace handclust {

namespace {

struct P2 {
    double x, y;
};

double dist_point_segment(double px, double py, const P2& a, const P2& b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double wx = px - a.x, wy = py - a.y;
    const double vv = vx * vx + vy * vy;
    double t = vv > 0.0 ? (wx * vx + wy * vy) / vv : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = px - (a.x + t * vx);
    const double dy = py - (a.y + t * vy);
    return std::hypot(dx, dy);
}

void stamp_segment(Raster& img, const P2& a, const P2& b, double radius, int ink) {
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - radius - 1)));
    const int x1 = std::min(img.width - 1,
                            static_cast<int>(std::ceil(std::max(a.x, b.x) + radius + 1)));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - radius - 1)));
    const int y1 = std::min(img.height - 1,
                            static_cast<int>(std::ceil(std::max(a.y, b.y) + radius + 1)));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            if (dist_point_segment(x, y, a, b) <= radius) {
                auto& p = img.at(x, y);
                p = static_cast<std::uint8_t>(std::min<int>(p, ink));
            }
        }
    }
}

// One glyph: a random polyline in the char cell, optionally closed into a
// loop. Control points live in the unit square, so scaling the cell scales
// the geometry exactly.
void draw_glyph(Raster& img, double cx, double cy, double cw, double ch,
                const HandStyle& style, RngStream& rng) {
    const int segments = static_cast<int>(rng.uniform_int(3, 5));
    std::vector<P2> pts;
    pts.reserve(segments + 2);
    for (int i = 0; i <= segments; ++i) {
        const double u = rng.uniform();
        const double v = rng.uniform();
        pts.push_back(P2{cx + u * cw + style.slant * (1.0 - v) * ch, cy + v * ch});
    }
    const bool loop = rng.uniform() < style.loop_probability;
    if (loop) pts.push_back(pts.front());
    const int ink =
        std::clamp(style.ink_value + static_cast<int>(rng.uniform_int(-10, 10)), 0, 200);
    const double radius = style.stroke_thickness / 2.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        stamp_segment(img, pts[i], pts[i + 1], radius, ink);
    }
}

BBox pad_box(const BBox& b, int pad, int w, int h) {
    return BBox{std::max(0, b.x0 - pad), std::max(0, b.y0 - pad),
                std::min(w, b.x1 + pad), std::min(h, b.y1 + pad)};
}

} // namespace

PageRecord synth_page(const HandStyle& style, const SynthPageLayout& layout,
                      int page_index, std::uint64_t seed, std::string hand_tag) {
    const double char_w = style.char_width_factor * style.char_height;
    const double word_w =
        layout.chars_per_word * (char_w + style.gap) + std::abs(style.slant) * style.char_height;
    const int width = static_cast<int>(
        2 * layout.margin + layout.words_per_line * (word_w + layout.word_gap));
    const int height = static_cast<int>(
        2 * layout.margin + layout.lines_per_page * (style.char_height + layout.line_spacing));

    PageRecord page;
    page.page_index = page_index;
    page.hand_tag = std::move(hand_tag);
    page.image = Raster(width, height, 1, 255);

    const int pad = static_cast<int>(std::ceil(style.stroke_thickness)) + 2;
    for (int li = 0; li < layout.lines_per_page; ++li) {
        const double ly = layout.margin + li * (style.char_height + layout.line_spacing);
        LineBox line;
        line.page_index = page_index;
        bool line_any = false;
        BBox line_box{};
        for (int wi = 0; wi < layout.words_per_line; ++wi) {
            const double wx = layout.margin + wi * (word_w + layout.word_gap);
            RngStream rng(derive_seed(seed, static_cast<std::uint64_t>(li) + 1,
                                      static_cast<std::uint64_t>(wi) + 1));
            for (int ci = 0; ci < layout.chars_per_word; ++ci) {
                draw_glyph(page.image, wx + ci * (char_w + style.gap), ly, char_w,
                           style.char_height, style, rng);
            }
            BBox word{static_cast<int>(wx),
                      static_cast<int>(ly),
                      static_cast<int>(wx + layout.chars_per_word * (char_w + style.gap) +
                                       std::abs(style.slant) * style.char_height),
                      static_cast<int>(ly + style.char_height)};
            word = pad_box(word, pad, width, height);
            line.words.push_back(word);
            if (!line_any) {
                line_box = word;
                line_any = true;
            } else {
                line_box.x0 = std::min(line_box.x0, word.x0);
                line_box.y0 = std::min(line_box.y0, word.y0);
                line_box.x1 = std::max(line_box.x1, word.x1);
                line_box.y1 = std::max(line_box.y1, word.y1);
            }
        }
        line.bbox = line_box;
        page.lines.push_back(std::move(line));
    }
    return page;
}

PageRecord synth_line(const HandStyle& style, int chars, std::uint64_t seed) {
    SynthPageLayout layout;
    layout.lines_per_page = 1;
    layout.words_per_line = 1;
    layout.chars_per_word = chars;
    layout.margin = static_cast<int>(std::ceil(style.stroke_thickness)) + 6;
    return synth_page(style, layout, 1, seed, "");
}

} // namespace handclust
