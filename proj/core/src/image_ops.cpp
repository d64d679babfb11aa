#include "handclust/image_ops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace handclust {

namespace {

// scipy-style 'reflect' indexing: (d c b a | a b c d | d c b a)
inline int reflect_index(int i, int n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = std::max(1, static_cast<int>(std::lround(4.0 * sigma)));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
        k[i + radius] = v;
        sum += v;
    }
    for (auto& v : k) v /= sum;
    return k;
}

void convolve_rows(const std::vector<double>& src, std::vector<double>& dst,
                   int width, int height, const std::vector<double>& kernel) {
    const int radius = static_cast<int>(kernel.size() / 2);
    for (int y = 0; y < height; ++y) {
        const double* row = src.data() + static_cast<std::size_t>(y) * width;
        double* out = dst.data() + static_cast<std::size_t>(y) * width;
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t) {
                acc += kernel[t + radius] * row[reflect_index(x + t, width)];
            }
            out[x] = acc;
        }
    }
}

void convolve_cols(const std::vector<double>& src, std::vector<double>& dst,
                   int width, int height, const std::vector<double>& kernel) {
    const int radius = static_cast<int>(kernel.size() / 2);
    for (int x = 0; x < width; ++x) {
        for (int y = 0; y < height; ++y) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t) {
                const int yy = reflect_index(y + t, height);
                acc += kernel[t + radius] *
                       src[static_cast<std::size_t>(yy) * width + x];
            }
            dst[static_cast<std::size_t>(y) * width + x] = acc;
        }
    }
}

inline std::uint8_t clamp_u8(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

} // namespace

GrayImage to_grayscale(const Raster& image) {
    if (image.empty()) throw std::invalid_argument("to_grayscale: empty raster");
    GrayImage out(image.width, image.height);
    const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
    if (image.channels == 1) {
        out.pixels.assign(image.pixels.begin(), image.pixels.end());
    } else if (image.channels >= 3) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t p = i * image.channels;
            const double lum = 0.2126 * image.pixels[p] +
                               0.7152 * image.pixels[p + 1] +
                               0.0722 * image.pixels[p + 2];
            out.pixels[i] = clamp_u8(lum);
        }
    } else {
        throw std::invalid_argument("to_grayscale: unsupported channel count");
    }
    out.polarity = Polarity::InkDarkOnLight;
    return out;
}

std::vector<double> gaussian_blur(const std::vector<double>& src, int width,
                                  int height, double sigma) {
    const auto kernel = gaussian_kernel(sigma);
    std::vector<double> tmp(src.size()), dst(src.size());
    convolve_rows(src, tmp, width, height, kernel);
    convolve_cols(tmp, dst, width, height, kernel);
    return dst;
}

Raster unsharp_mask(const Raster& image, double radius, double amount) {
    if (image.empty()) throw std::invalid_argument("unsharp_mask: empty raster");
    Raster out = image;
    const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
    std::vector<double> chan(n);
    for (int c = 0; c < image.channels; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            chan[i] = image.pixels[i * image.channels + c];
        }
        const auto blurred = gaussian_blur(chan, image.width, image.height, radius);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = chan[i] + amount * (chan[i] - blurred[i]);
            out.pixels[i * image.channels + c] = clamp_u8(v);
        }
    }
    return out;
}

GrayImage invert(GrayImage img) {
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(255 - p);
    img.polarity = img.polarity == Polarity::InkDarkOnLight
                       ? Polarity::InkBrightOnDark
                       : Polarity::InkDarkOnLight;
    return img;
}

GrayImage preprocess(const Raster& image, PrepRecipe recipe,
                     const PrepParams& params) {
    if (image.empty()) throw std::invalid_argument("preprocess: empty raster");
    switch (recipe) {
    case PrepRecipe::CornerStroke:
        return invert(to_grayscale(
            unsharp_mask(image, params.unsharp_radius, params.unsharp_amount)));
    case PrepRecipe::GeometryBoxes:
        return to_grayscale(image);
    case PrepRecipe::ConvexOrient:
        return to_grayscale(
            unsharp_mask(image, params.unsharp_radius, params.unsharp_amount));
    case PrepRecipe::BlobsAndCC:
        return invert(to_grayscale(image));
    }
    throw std::logic_error("preprocess: unknown recipe");
}

BinaryImage otsu_binarize(const GrayImage& img,
                          std::vector<std::string>* warnings) {
    if (img.polarity != Polarity::InkBrightOnDark) {
        throw std::invalid_argument("otsu_binarize: expects ink-bright input");
    }
    BinaryImage out(img.width, img.height);

    std::array<std::int64_t, 256> hist{};
    for (auto p : img.pixels) ++hist[p];
    const std::int64_t total = static_cast<std::int64_t>(img.pixels.size());

    const auto minmax = std::minmax_element(img.pixels.begin(), img.pixels.end());
    if (img.pixels.empty() || *minmax.first == *minmax.second) {
        if (warnings) warnings->push_back("otsu_binarize: constant image, no foreground");
        return out;
    }

    // threshold maximizing between-class variance; first maximum wins
    double sum_all = 0.0;
    for (int v = 0; v < 256; ++v) sum_all += static_cast<double>(v) * hist[v];
    double best = -1.0;
    int best_t = 0;
    std::int64_t w0 = 0;
    double sum0 = 0.0;
    for (int t = 0; t < 256; ++t) {
        w0 += hist[t];
        sum0 += static_cast<double>(t) * hist[t];
        const std::int64_t w1 = total - w0;
        if (w0 == 0 || w1 == 0) continue;
        const double mu0 = sum0 / w0;
        const double mu1 = (sum_all - sum0) / w1;
        const double between =
            static_cast<double>(w0) * static_cast<double>(w1) * (mu0 - mu1) * (mu0 - mu1);
        if (between > best) {
            best = between;
            best_t = t;
        }
    }

    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        out.bits[i] = img.pixels[i] > best_t ? 1 : 0;
    }
    return out;
}

namespace {

// Zhang-Suen step conditions for pixel (x, y) on the current image.
// Neighbors P2..P9 clockwise from north; out-of-image neighbors are 0.
inline bool zs_removable(const BinaryImage& img, int x, int y, int step) {
    auto px = [&](int xx, int yy) -> int {
        if (xx < 0 || yy < 0 || xx >= img.width || yy >= img.height) return 0;
        return img.at(xx, yy) ? 1 : 0;
    };
    const int p2 = px(x, y - 1), p3 = px(x + 1, y - 1), p4 = px(x + 1, y);
    const int p5 = px(x + 1, y + 1), p6 = px(x, y + 1), p7 = px(x - 1, y + 1);
    const int p8 = px(x - 1, y), p9 = px(x - 1, y - 1);
    const int b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9;
    if (b < 2 || b > 6) return false;
    const int seq[9] = {p2, p3, p4, p5, p6, p7, p8, p9, p2};
    int a = 0;
    for (int i = 0; i < 8; ++i) {
        if (seq[i] == 0 && seq[i + 1] == 1) ++a;
    }
    if (a != 1) return false;
    if (step == 1) {
        return (p2 * p4 * p6) == 0 && (p4 * p6 * p8) == 0;
    }
    return (p2 * p4 * p8) == 0 && (p2 * p6 * p8) == 0;
}

} // namespace

BinaryImage skeletonize(const BinaryImage& bin) {
    BinaryImage img = bin;
    std::vector<std::pair<int, int>> marked;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int step = 1; step <= 2; ++step) {
            marked.clear();
            for (int y = 0; y < img.height; ++y) {
                for (int x = 0; x < img.width; ++x) {
                    if (img.at(x, y) && zs_removable(img, x, y, step)) {
                        marked.emplace_back(x, y);
                    }
                }
            }
            // confirm against the evolving image so a component can never
            // be deleted down to nothing
            for (const auto& [x, y] : marked) {
                if (zs_removable(img, x, y, step)) {
                    img.at(x, y) = 0;
                    changed = true;
                }
            }
        }
    }
    return img;
}

namespace {

// 1D squared-distance lower envelope (Felzenszwalb & Huttenlocher).
void edt_1d(const std::vector<double>& f, std::vector<double>& d, int n,
            std::vector<int>& v, std::vector<double>& z) {
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < n; ++q) {
        double s;
        while (true) {
            s = ((f[q] + q * double(q)) - (f[v[k]] + v[k] * double(v[k]))) /
                (2.0 * q - 2.0 * v[k]);
            if (s <= z[k]) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - double(v[k]);
        d[q] = dq * dq + f[v[k]];
    }
}

} // namespace

DistanceMap distance_transform(const BinaryImage& bin) {
    const int w = bin.width, h = bin.height;
    if (bin.foreground_count() == bin.bits.size()) {
        throw std::runtime_error("distance_transform: no background pixel");
    }
    const double inf = 1e20;
    std::vector<double> g(static_cast<std::size_t>(w) * h);

    // pass 1: columns
    {
        std::vector<double> f(h), d(h), z(h + 1);
        std::vector<int> v(h);
        for (int x = 0; x < w; ++x) {
            for (int y = 0; y < h; ++y) f[y] = bin.at(x, y) ? inf : 0.0;
            edt_1d(f, d, h, v, z);
            for (int y = 0; y < h; ++y) g[static_cast<std::size_t>(y) * w + x] = d[y];
        }
    }
    // pass 2: rows
    DistanceMap out;
    out.width = w;
    out.height = h;
    out.values.resize(g.size());
    {
        std::vector<double> f(w), d(w), z(w + 1);
        std::vector<int> v(w);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) f[x] = g[static_cast<std::size_t>(y) * w + x];
            edt_1d(f, d, w, v, z);
            for (int x = 0; x < w; ++x) {
                out.values[static_cast<std::size_t>(y) * w + x] =
                    static_cast<float>(std::sqrt(d[x]));
            }
        }
    }
    return out;
}

namespace {

struct UnionFind {
    std::vector<std::int32_t> parent;

    std::int32_t make() {
        parent.push_back(static_cast<std::int32_t>(parent.size()));
        return static_cast<std::int32_t>(parent.size() - 1);
    }
    std::int32_t find(std::int32_t a) {
        std::int32_t root = a;
        while (parent[root] != root) root = parent[root];
        while (parent[a] != root) {
            const std::int32_t next = parent[a];
            parent[a] = root;
            a = next;
        }
        return root;
    }
    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent[b] = a;
    }
};

} // namespace

LabelImage label_regions(const BinaryImage& bin, int connectivity) {
    if (connectivity != 1 && connectivity != 2) {
        throw std::invalid_argument("label_regions: connectivity must be 1 or 2");
    }
    const int w = bin.width, h = bin.height;
    LabelImage out;
    out.width = w;
    out.height = h;
    out.labels.assign(static_cast<std::size_t>(w) * h, 0);

    UnionFind uf;
    uf.make(); // slot 0 = background
    std::vector<std::int32_t> provisional(out.labels.size(), 0);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!bin.at(x, y)) continue;
            const std::size_t idx = static_cast<std::size_t>(y) * w + x;
            std::int32_t neighbor = 0;
            auto consider = [&](int xx, int yy) {
                if (xx < 0 || yy < 0 || xx >= w || yy >= h) return;
                const std::int32_t lab = provisional[static_cast<std::size_t>(yy) * w + xx];
                if (!lab) return;
                if (!neighbor) {
                    neighbor = lab;
                } else {
                    uf.unite(neighbor, lab);
                }
            };
            consider(x - 1, y);
            consider(x, y - 1);
            if (connectivity == 2) {
                consider(x - 1, y - 1);
                consider(x + 1, y - 1);
            }
            provisional[idx] = neighbor ? neighbor : uf.make();
        }
    }

    // second pass: flatten and renumber by first raster encounter
    std::vector<std::int32_t> remap(uf.parent.size(), 0);
    std::int32_t next = 0;
    for (std::size_t i = 0; i < provisional.size(); ++i) {
        if (!provisional[i]) continue;
        const std::int32_t root = uf.find(provisional[i]);
        if (!remap[root]) remap[root] = ++next;
        out.labels[i] = remap[root];
    }
    out.label_count = next;
    return out;
}

LabelImage label_regions(const GrayImage& img, int connectivity,
                         int ink_threshold) {
    BinaryImage mask(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        mask.bits[i] = img.pixels[i] <= ink_threshold ? 1 : 0;
    }
    return label_regions(mask, connectivity);
}

} // namespace handclust
