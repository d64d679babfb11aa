#include "handclust/hocr.hpp"

#include <cctype>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace handclust {

namespace {

struct TagAttrs {
    std::string cls;
    std::string title;
};

// Reads the class/title attributes of the tag starting at `pos` (which
// points just past '<'). Returns the position after the closing '>'.
std::size_t read_tag(std::string_view text, std::size_t pos, TagAttrs& attrs) {
    attrs = {};
    const std::size_t n = text.size();
    // skip tag name
    while (pos < n && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '>') {
        ++pos;
    }
    while (pos < n && text[pos] != '>') {
        while (pos < n && (std::isspace(static_cast<unsigned char>(text[pos])) ||
                           text[pos] == '/')) {
            ++pos;
        }
        if (pos >= n || text[pos] == '>') break;
        std::size_t name_start = pos;
        while (pos < n && text[pos] != '=' && text[pos] != '>' &&
               !std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
        std::string_view name = text.substr(name_start, pos - name_start);
        std::string value;
        if (pos < n && text[pos] == '=') {
            ++pos;
            if (pos < n && (text[pos] == '"' || text[pos] == '\'')) {
                const char quote = text[pos++];
                const std::size_t vstart = pos;
                while (pos < n && text[pos] != quote) ++pos;
                value.assign(text.substr(vstart, pos - vstart));
                if (pos < n) ++pos; // closing quote
            } else {
                const std::size_t vstart = pos;
                while (pos < n && text[pos] != '>' &&
                       !std::isspace(static_cast<unsigned char>(text[pos]))) {
                    ++pos;
                }
                value.assign(text.substr(vstart, pos - vstart));
            }
        }
        if (name == "class") attrs.cls = value;
        else if (name == "title") attrs.title = value;
    }
    return pos < n ? pos + 1 : n;
}

bool has_class_token(const std::string& cls, std::string_view token) {
    std::size_t pos = 0;
    while (pos < cls.size()) {
        while (pos < cls.size() && std::isspace(static_cast<unsigned char>(cls[pos]))) ++pos;
        std::size_t end = pos;
        while (end < cls.size() && !std::isspace(static_cast<unsigned char>(cls[end]))) ++end;
        if (std::string_view(cls).substr(pos, end - pos) == token) return true;
        pos = end;
    }
    return false;
}

// Extracts "bbox x0 y0 x1 y1" from a semicolon-separated hOCR title.
std::optional<BBox> parse_title_bbox(const std::string& title, std::string& err) {
    std::size_t pos = 0;
    while (pos < title.size()) {
        std::size_t end = title.find(';', pos);
        if (end == std::string::npos) end = title.size();
        std::size_t s = pos;
        while (s < end && std::isspace(static_cast<unsigned char>(title[s]))) ++s;
        std::string_view prop(title.data() + s, end - s);
        if (prop.substr(0, 5) == "bbox " || prop == "bbox") {
            int vals[4];
            const char* p = prop.data() + 4;
            const char* limit = prop.data() + prop.size();
            for (int i = 0; i < 4; ++i) {
                while (p < limit && std::isspace(static_cast<unsigned char>(*p))) ++p;
                auto [next, ec] = std::from_chars(p, limit, vals[i]);
                if (ec != std::errc()) {
                    err = "malformed bbox property: '" + std::string(prop) + "'";
                    return std::nullopt;
                }
                p = next;
            }
            BBox box{vals[0], vals[1], vals[2], vals[3]};
            if (!box.valid()) {
                err = "degenerate bbox: '" + std::string(prop) + "'";
                return std::nullopt;
            }
            return box;
        }
        pos = end + 1;
    }
    err = "title has no bbox property: '" + title + "'";
    return std::nullopt;
}

} // namespace

HocrParseResult parse_hocr(std::string_view text) {
    HocrParseResult result;
    std::size_t pos = 0;
    int element_no = 0;
    while (pos < text.size()) {
        const std::size_t open = text.find('<', pos);
        if (open == std::string_view::npos) break;
        if (open + 1 < text.size() &&
            (text[open + 1] == '/' || text[open + 1] == '!' || text[open + 1] == '?')) {
            const std::size_t close = text.find('>', open);
            pos = close == std::string_view::npos ? text.size() : close + 1;
            continue;
        }
        TagAttrs attrs;
        pos = read_tag(text, open + 1, attrs);
        const bool is_line = has_class_token(attrs.cls, "ocr_line");
        const bool is_word = has_class_token(attrs.cls, "ocrx_word");
        if (!is_line && !is_word) continue;
        ++element_no;
        std::string err;
        const auto box = parse_title_bbox(attrs.title, err);
        if (!box) {
            result.errors.push_back("element " + std::to_string(element_no) + ": " + err);
            continue;
        }
        if (is_line) {
            LineBox line;
            line.bbox = *box;
            result.lines.push_back(std::move(line));
        } else {
            if (result.lines.empty()) {
                result.errors.push_back("element " + std::to_string(element_no) +
                                        ": word bbox before any line, skipped");
                continue;
            }
            LineBox& line = result.lines.back();
            const BBox clipped = box->clipped_to(line.bbox);
            if (!clipped.valid()) {
                result.errors.push_back("element " + std::to_string(element_no) +
                                        ": word bbox outside its line, skipped");
                continue;
            }
            line.words.push_back(clipped);
        }
    }
    if (result.lines.empty()) {
        throw std::runtime_error("parse_hocr: no ocr_line elements parsed");
    }
    return result;
}

std::string write_hocr(const std::vector<LineBox>& lines) {
    std::ostringstream out;
    out << "<!DOCTYPE html>\n<html>\n<body>\n<div class='ocr_page' id='page_1'>\n";
    int line_no = 0, word_no = 0;
    for (const auto& line : lines) {
        ++line_no;
        out << " <span class='ocr_line' id='line_" << line_no << "' title='bbox "
            << line.bbox.x0 << ' ' << line.bbox.y0 << ' ' << line.bbox.x1 << ' '
            << line.bbox.y1 << "'>\n";
        for (const auto& word : line.words) {
            ++word_no;
            out << "  <span class='ocrx_word' id='word_" << word_no
                << "' title='bbox " << word.x0 << ' ' << word.y0 << ' ' << word.x1
                << ' ' << word.y1 << "'> </span>\n";
        }
        out << " </span>\n";
    }
    out << "</div>\n</body>\n</html>\n";
    return out.str();
}

Raster crop_margins(const Raster& image, double fraction, int* off_x, int* off_y) {
    if (fraction < 0.0 || fraction >= 0.5) {
        throw std::invalid_argument("crop_margins: fraction must be in [0, 0.5)");
    }
    const int dx = static_cast<int>(image.width * fraction);
    const int dy = static_cast<int>(image.height * fraction);
    const int w = image.width - 2 * dx;
    const int h = image.height - 2 * dy;
    if (w < 1 || h < 1) throw std::runtime_error("crop_margins: crop leaves no pixels");
    if (off_x) *off_x = dx;
    if (off_y) *off_y = dy;
    Raster out(w, h, image.channels);
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* src =
            image.pixels.data() +
            (static_cast<std::size_t>(y + dy) * image.width + dx) * image.channels;
        std::uint8_t* dst =
            out.pixels.data() + static_cast<std::size_t>(y) * w * image.channels;
        std::copy(src, src + static_cast<std::size_t>(w) * image.channels, dst);
    }
    return out;
}

Raster extract_bbox_image(const PageRecord& page, const BBox& bbox,
                          std::vector<std::string>* warnings) {
    const BBox page_bounds{0, 0, page.image.width, page.image.height};
    BBox use = bbox;
    if (bbox.x0 < 0 || bbox.y0 < 0 || bbox.x1 > page.image.width ||
        bbox.y1 > page.image.height) {
        use = bbox.clipped_to(page_bounds);
        if (!use.valid()) {
            throw std::runtime_error("extract_bbox_image: bbox does not intersect page");
        }
        if (warnings) {
            warnings->push_back("bbox clipped to page bounds on page " +
                                std::to_string(page.page_index));
        }
    }
    Raster out(use.width(), use.height(), page.image.channels);
    for (int y = 0; y < use.height(); ++y) {
        const std::uint8_t* src =
            page.image.pixels.data() +
            (static_cast<std::size_t>(y + use.y0) * page.image.width + use.x0) *
                page.image.channels;
        std::uint8_t* dst = out.pixels.data() +
                            static_cast<std::size_t>(y) * use.width() * out.channels;
        std::copy(src, src + static_cast<std::size_t>(use.width()) * out.channels, dst);
    }
    return out;
}

void apply_margin_crop(PageRecord& page, double fraction) {
    int dx = 0, dy = 0;
    page.image = crop_margins(page.image, fraction, &dx, &dy);
    const BBox frame{0, 0, page.image.width, page.image.height};
    std::vector<LineBox> kept;
    for (auto& line : page.lines) {
        BBox shifted{line.bbox.x0 - dx, line.bbox.y0 - dy, line.bbox.x1 - dx,
                     line.bbox.y1 - dy};
        const BBox clipped = shifted.clipped_to(frame);
        if (!clipped.valid()) continue; // fully inside the removed margin
        LineBox out;
        out.page_index = line.page_index;
        out.bbox = clipped;
        for (const auto& word : line.words) {
            BBox ws{word.x0 - dx, word.y0 - dy, word.x1 - dx, word.y1 - dy};
            const BBox wc = ws.clipped_to(out.bbox);
            if (wc.valid()) out.words.push_back(wc);
        }
        kept.push_back(std::move(out));
    }
    page.lines = std::move(kept);
}

} // namespace handclust
