#include "handclust/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace handclust {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "connected_component", "orientation", "height",       "blob_log",
    "width",               "convex_area", "corner_angle", "stroke_width",
    "aspect_ratio",        "blob_dog",
};

} // namespace

std::string_view feature_name(FeatureId id) {
    return kFeatureNames[static_cast<int>(id)];
}

std::optional<FeatureId> feature_from_name(std::string_view name) {
    for (int i = 0; i < kFeatureCount; ++i) {
        if (kFeatureNames[i] == name) return static_cast<FeatureId>(i);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Corner angles

namespace {

// Bresenham circle of radius 3, clockwise from north.
constexpr int kCircle16[16][2] = {
    {0, -3}, {1, -3}, {2, -2}, {3, -1}, {3, 0},  {3, 1},  {2, 2},  {1, 3},
    {0, 3},  {-1, 3}, {-2, 2}, {-3, 1}, {-3, 0}, {-3, -1}, {-2, -2}, {-1, -3},
};

// Longest circular run of set flags.
int longest_run(const std::array<bool, 16>& flags) {
    bool all = true;
    for (bool f : flags) all = all && f;
    if (all) return 16;
    int best = 0, run = 0;
    for (int i = 0; i < 32; ++i) {
        if (flags[i % 16]) {
            ++run;
            best = std::max(best, run);
        } else {
            run = 0;
        }
    }
    return best;
}

std::vector<double> fast9_response(const GrayImage& img, double threshold) {
    const int w = img.width, h = img.height;
    std::vector<double> resp(static_cast<std::size_t>(w) * h, 0.0);
    for (int y = 3; y < h - 3; ++y) {
        for (int x = 3; x < w - 3; ++x) {
            const double c = img.at(x, y) / 255.0;
            std::array<double, 16> v;
            std::array<bool, 16> bright, dark;
            for (int i = 0; i < 16; ++i) {
                v[i] = img.at(x + kCircle16[i][0], y + kCircle16[i][1]) / 255.0;
                bright[i] = v[i] > c + threshold;
                dark[i] = v[i] < c - threshold;
            }
            double score = 0.0;
            if (longest_run(bright) >= 9) {
                double s = 0.0;
                for (int i = 0; i < 16; ++i) {
                    if (bright[i]) s += v[i] - c - threshold;
                }
                score = std::max(score, s);
            }
            if (longest_run(dark) >= 9) {
                double s = 0.0;
                for (int i = 0; i < 16; ++i) {
                    if (dark[i]) s += c - threshold - v[i];
                }
                score = std::max(score, s);
            }
            resp[static_cast<std::size_t>(y) * w + x] = score;
        }
    }
    return resp;
}

// Octagonal mask: square of half-width `radius` with corners cut at
// |dx| + |dy| <= cut.
inline bool in_octagon(int dx, int dy, int radius, int cut) {
    return std::abs(dx) <= radius && std::abs(dy) <= radius &&
           std::abs(dx) + std::abs(dy) <= cut;
}

} // namespace

std::vector<double> corner_angles(const GrayImage& img, const CornerParams& params) {
    std::vector<double> angles;
    if (img.empty()) return angles;
    const int w = img.width, h = img.height;
    const auto resp = fast9_response(img, params.fast_threshold);

    const int radius = params.moment_radius;
    const int cut = radius + radius / 2; // 10 for radius 7
    for (int y = 3; y < h - 3; ++y) {
        for (int x = 3; x < w - 3; ++x) {
            const double r = resp[static_cast<std::size_t>(y) * w + x];
            if (r <= 0.0) continue;
            bool is_peak = true;
            for (int dy = -1; dy <= 1 && is_peak; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int xx = x + dx, yy = y + dy;
                    if (xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
                    if (resp[static_cast<std::size_t>(yy) * w + xx] > r) {
                        is_peak = false;
                        break;
                    }
                }
            }
            if (!is_peak) continue;
            // first-order central moments of the octagonal neighborhood;
            // pixels outside the image contribute zero intensity
            double m10 = 0.0, m01 = 0.0;
            for (int dy = -radius; dy <= radius; ++dy) {
                for (int dx = -radius; dx <= radius; ++dx) {
                    if (!in_octagon(dx, dy, radius, cut)) continue;
                    const int xx = x + dx, yy = y + dy;
                    if (xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
                    const double val = img.at(xx, yy);
                    m10 += val * dx;
                    m01 += val * dy;
                }
            }
            double angle = 0.0;
            if (m10 != 0.0 || m01 != 0.0) {
                angle = std::atan2(m01, m10) * 180.0 / kPi;
            }
            if (angle <= -180.0) angle += 360.0;
            angles.push_back(angle);
        }
    }
    return angles;
}

// ---------------------------------------------------------------------------
// Stroke widths

std::vector<double> stroke_widths(const BinaryImage& bin, const BinaryImage& skel,
                                  const DistanceMap& dmap) {
    if (skel.width != dmap.width || skel.height != dmap.height ||
        bin.width != skel.width || bin.height != skel.height) {
        throw std::invalid_argument("stroke_widths: image dimensions disagree");
    }
    std::vector<double> widths;
    for (std::size_t i = 0; i < skel.bits.size(); ++i) {
        if (skel.bits[i]) widths.push_back(2.0 * dmap.values[i]);
    }
    return widths;
}

// ---------------------------------------------------------------------------
// Convex areas and orientations

namespace {

struct Pt {
    std::int64_t x, y;
};

inline std::int64_t cross(const Pt& o, const Pt& a, const Pt& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew monotone chain; returns hull without collinear interior vertices.
std::vector<Pt> convex_hull(std::vector<Pt> pts) {
    std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Pt& a, const Pt& b) {
                              return a.x == b.x && a.y == b.y;
                          }),
              pts.end());
    const std::size_t n = pts.size();
    if (n <= 2) return pts;
    std::vector<Pt> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

inline bool inside_hull(const std::vector<Pt>& hull, const Pt& p) {
    const std::size_t n = hull.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (cross(hull[i], hull[(i + 1) % n], p) < 0) return false;
    }
    return true;
}

// Number of integer points in the closed convex hull of the region pixels.
std::int64_t hull_pixel_count(const std::vector<Pt>& pixels) {
    if (pixels.size() == 1) return 1;
    const auto hull = convex_hull(pixels);
    if (hull.size() == 1) return 1;
    if (hull.size() == 2) {
        // collinear region: lattice points on the segment
        const std::int64_t dx = std::abs(hull[1].x - hull[0].x);
        const std::int64_t dy = std::abs(hull[1].y - hull[0].y);
        return std::gcd(dx, dy) + 1;
    }
    std::int64_t minx = hull[0].x, maxx = hull[0].x;
    std::int64_t miny = hull[0].y, maxy = hull[0].y;
    for (const auto& p : hull) {
        minx = std::min(minx, p.x);
        maxx = std::max(maxx, p.x);
        miny = std::min(miny, p.y);
        maxy = std::max(maxy, p.y);
    }
    std::int64_t count = 0;
    for (std::int64_t y = miny; y <= maxy; ++y) {
        for (std::int64_t x = minx; x <= maxx; ++x) {
            if (inside_hull(hull, Pt{x, y})) ++count;
        }
    }
    return count;
}

// Major-axis angle from second central moments, degrees in (-90, 90],
// measured from the column (x) axis with y increasing downward.
double region_orientation(const std::vector<Pt>& pixels) {
    const double n = static_cast<double>(pixels.size());
    double mx = 0.0, my = 0.0;
    for (const auto& p : pixels) {
        mx += static_cast<double>(p.x);
        my += static_cast<double>(p.y);
    }
    mx /= n;
    my /= n;
    double mu20 = 0.0, mu02 = 0.0, mu11 = 0.0;
    for (const auto& p : pixels) {
        const double dx = p.x - mx, dy = p.y - my;
        mu20 += dx * dx;
        mu02 += dy * dy;
        mu11 += dx * dy;
    }
    if (mu20 == 0.0 && mu02 == 0.0 && mu11 == 0.0) return 0.0;
    double theta = 0.5 * std::atan2(2.0 * mu11, mu20 - mu02) * 180.0 / kPi;
    if (theta <= -90.0) theta += 180.0;
    return theta;
}

std::vector<std::vector<Pt>> region_pixels(const LabelImage& labels) {
    std::vector<std::vector<Pt>> regions(labels.label_count);
    for (int y = 0; y < labels.height; ++y) {
        for (int x = 0; x < labels.width; ++x) {
            const std::int32_t lab = labels.at(x, y);
            if (lab > 0) regions[lab - 1].push_back(Pt{x, y});
        }
    }
    return regions;
}

} // namespace

std::pair<std::vector<double>, std::vector<double>>
convex_areas_orientations(const GrayImage& img, const FeatureParams& params) {
    const auto labels = label_regions(img, 2, params.prep.gray_ink_threshold);
    const auto regions = region_pixels(labels);
    std::vector<double> areas, orientations;
    areas.reserve(regions.size());
    orientations.reserve(regions.size());
    for (const auto& region : regions) {
        areas.push_back(static_cast<double>(hull_pixel_count(region)));
        orientations.push_back(region_orientation(region));
    }
    return {std::move(areas), std::move(orientations)};
}

// ---------------------------------------------------------------------------
// Box geometry

BoxGeometry box_geometry(const GrayImage& img, const FeatureParams& params) {
    BoxGeometry out;
    const auto labels = label_regions(img, 2, params.prep.gray_ink_threshold);
    std::vector<int> minx(labels.label_count, labels.width);
    std::vector<int> maxx(labels.label_count, -1);
    std::vector<int> miny(labels.label_count, labels.height);
    std::vector<int> maxy(labels.label_count, -1);
    for (int y = 0; y < labels.height; ++y) {
        for (int x = 0; x < labels.width; ++x) {
            const std::int32_t lab = labels.at(x, y);
            if (lab <= 0) continue;
            const int i = lab - 1;
            minx[i] = std::min(minx[i], x);
            maxx[i] = std::max(maxx[i], x);
            miny[i] = std::min(miny[i], y);
            maxy[i] = std::max(maxy[i], y);
        }
    }
    for (int i = 0; i < labels.label_count; ++i) {
        const double w = maxx[i] - minx[i] + 1;
        const double h = maxy[i] - miny[i] + 1;
        out.widths.push_back(w);
        if (w <= params.height_width_cap) out.heights.push_back(h);
        out.aspects.push_back(w / h);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Connected components

std::vector<double> connected_components(const BinaryImage& skel) {
    const auto labels = label_regions(skel, 2);
    std::vector<double> areas(labels.label_count, 0.0);
    for (const auto lab : labels.labels) {
        if (lab > 0) areas[lab - 1] += 1.0;
    }
    return areas;
}

// ---------------------------------------------------------------------------
// Blob detection

namespace {

std::vector<double> to_unit(const GrayImage& img) {
    std::vector<double> v(img.pixels.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = img.pixels[i] / 255.0;
    return v;
}

std::vector<double> sampled_gaussian(double sigma, int radius) {
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
        sum += k[i + radius];
    }
    for (auto& v : k) v /= sum;
    return k;
}

// Second derivative of the normalized Gaussian; DC is removed so constant
// regions give exactly zero response.
std::vector<double> sampled_gaussian_dd(double sigma, int radius) {
    const auto g = sampled_gaussian(sigma, radius);
    std::vector<double> k(g.size());
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] =
            g[i + radius] * ((double(i) * i - sigma * sigma) / (sigma * sigma * sigma * sigma));
        sum += k[i + radius];
    }
    const double mean = sum / static_cast<double>(k.size());
    for (auto& v : k) v -= mean;
    return k;
}

void conv_rows_kernel(const std::vector<double>& src, std::vector<double>& dst,
                      int w, int h, const std::vector<double>& kernel) {
    const int radius = static_cast<int>(kernel.size() / 2);
    auto reflect = [](int i, int n) {
        if (n == 1) return 0;
        while (i < 0 || i >= n) {
            if (i < 0) i = -i - 1;
            if (i >= n) i = 2 * n - 1 - i;
        }
        return i;
    };
    for (int y = 0; y < h; ++y) {
        const double* row = src.data() + static_cast<std::size_t>(y) * w;
        double* out = dst.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t) {
                acc += kernel[t + radius] * row[reflect(x + t, w)];
            }
            out[x] = acc;
        }
    }
}

void conv_cols_kernel(const std::vector<double>& src, std::vector<double>& dst,
                      int w, int h, const std::vector<double>& kernel) {
    const int radius = static_cast<int>(kernel.size() / 2);
    auto reflect = [](int i, int n) {
        if (n == 1) return 0;
        while (i < 0 || i >= n) {
            if (i < 0) i = -i - 1;
            if (i >= n) i = 2 * n - 1 - i;
        }
        return i;
    };
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t) {
                acc += kernel[t + radius] *
                       src[static_cast<std::size_t>(reflect(y + t, h)) * w + x];
            }
            dst[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
}

// Scale-normalized negative LoG: positive at the centers of bright blobs.
std::vector<double> log_layer(const std::vector<double>& img, int w, int h,
                              double sigma) {
    const int radius = std::max(1, static_cast<int>(std::lround(4.0 * sigma)));
    const auto g = sampled_gaussian(sigma, radius);
    const auto gdd = sampled_gaussian_dd(sigma, radius);
    std::vector<double> tmp(img.size()), dxx(img.size()), dyy(img.size());
    conv_rows_kernel(img, tmp, w, h, gdd);
    conv_cols_kernel(tmp, dxx, w, h, g);
    conv_rows_kernel(img, tmp, w, h, g);
    conv_cols_kernel(tmp, dyy, w, h, gdd);
    std::vector<double> out(img.size());
    const double s2 = sigma * sigma;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = -s2 * (dxx[i] + dyy[i]);
    }
    return out;
}

std::vector<double> blur_layer(const std::vector<double>& img, int w, int h,
                               double sigma) {
    const int radius = std::max(1, static_cast<int>(std::lround(4.0 * sigma)));
    const auto g = sampled_gaussian(sigma, radius);
    std::vector<double> tmp(img.size()), out(img.size());
    conv_rows_kernel(img, tmp, w, h, g);
    conv_cols_kernel(tmp, out, w, h, g);
    return out;
}

struct BlobDetection {
    int x, y;
    double sigma;
    double response;
};

// Local maxima of the (x, y, sigma) stack above the threshold, with
// parabolic refinement of the scale in log-sigma.
std::vector<BlobDetection> cube_maxima(const std::vector<std::vector<double>>& cube,
                                       const std::vector<double>& sigmas, int w,
                                       int h, double threshold,
                                       double log_step) {
    std::vector<BlobDetection> found;
    const int layers = static_cast<int>(cube.size());
    for (int s = 0; s < layers; ++s) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double v = cube[s][static_cast<std::size_t>(y) * w + x];
                if (v <= threshold) continue;
                bool peak = true;
                for (int ds = -1; ds <= 1 && peak; ++ds) {
                    const int ss = s + ds;
                    if (ss < 0 || ss >= layers) continue;
                    for (int dy = -1; dy <= 1 && peak; ++dy) {
                        for (int dx = -1; dx <= 1; ++dx) {
                            if (ds == 0 && dy == 0 && dx == 0) continue;
                            const int xx = x + dx, yy = y + dy;
                            if (xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
                            if (cube[ss][static_cast<std::size_t>(yy) * w + xx] > v) {
                                peak = false;
                                break;
                            }
                        }
                    }
                }
                if (!peak) continue;
                double sigma = sigmas[s];
                if (s > 0 && s + 1 < layers) {
                    const double fm = cube[s - 1][static_cast<std::size_t>(y) * w + x];
                    const double fp = cube[s + 1][static_cast<std::size_t>(y) * w + x];
                    const double denom = fm - 2.0 * v + fp;
                    if (std::abs(denom) > 1e-12) {
                        double delta = 0.5 * (fm - fp) / denom;
                        delta = std::clamp(delta, -0.5, 0.5);
                        sigma = sigmas[s] * std::exp(delta * log_step);
                    }
                }
                found.push_back(BlobDetection{x, y, sigma, v});
            }
        }
    }
    return found;
}

double circle_overlap_fraction(double x1, double y1, double r1, double x2,
                               double y2, double r2) {
    const double d = std::hypot(x1 - x2, y1 - y2);
    if (d >= r1 + r2) return 0.0;
    if (d <= std::abs(r1 - r2)) return 1.0;
    const double r1s = r1 * r1, r2s = r2 * r2;
    const double a1 = std::acos(std::clamp((d * d + r1s - r2s) / (2.0 * d * r1), -1.0, 1.0));
    const double a2 = std::acos(std::clamp((d * d + r2s - r1s) / (2.0 * d * r2), -1.0, 1.0));
    const double lens =
        r1s * (a1 - std::sin(2.0 * a1) / 2.0) + r2s * (a2 - std::sin(2.0 * a2) / 2.0);
    const double smaller = kPi * std::min(r1s, r2s);
    return lens / smaller;
}

// Greedy pruning by response; overlapping circles (radius sqrt(2) * sigma)
// beyond the overlap limit keep only the stronger detection.
std::vector<double> prune_to_diameters(std::vector<BlobDetection> blobs,
                                       double overlap_limit) {
    std::sort(blobs.begin(), blobs.end(), [](const BlobDetection& a, const BlobDetection& b) {
        if (a.response != b.response) return a.response > b.response;
        if (a.sigma != b.sigma) return a.sigma > b.sigma;
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    });
    std::vector<BlobDetection> kept;
    const double rfac = std::sqrt(2.0);
    for (const auto& cand : blobs) {
        bool keep = true;
        for (const auto& k : kept) {
            const double f = circle_overlap_fraction(cand.x, cand.y, rfac * cand.sigma,
                                                     k.x, k.y, rfac * k.sigma);
            if (f > overlap_limit) {
                keep = false;
                break;
            }
        }
        if (keep) kept.push_back(cand);
    }
    std::vector<double> diameters;
    diameters.reserve(kept.size());
    for (const auto& k : kept) diameters.push_back(2.0 * std::sqrt(2.0) * k.sigma);
    return diameters;
}

void require_bright(const GrayImage& img, const char* who) {
    if (img.polarity != Polarity::InkBrightOnDark) {
        throw std::invalid_argument(std::string(who) + ": expects ink-bright input");
    }
}

} // namespace

std::vector<double> blob_log(const GrayImage& img, const BlobParams& params) {
    require_bright(img, "blob_log");
    if (img.empty()) return {};
    if (params.num_sigma < 1) throw std::invalid_argument("blob_log: num_sigma < 1");
    const auto unit = to_unit(img);

    std::vector<double> sigmas(params.num_sigma);
    const double log_step =
        params.num_sigma > 1
            ? std::log(params.max_sigma / params.min_sigma) / (params.num_sigma - 1)
            : 0.0;
    for (int i = 0; i < params.num_sigma; ++i) {
        sigmas[i] = params.min_sigma * std::exp(log_step * i);
    }
    std::vector<std::vector<double>> cube;
    cube.reserve(sigmas.size());
    for (const double s : sigmas) {
        cube.push_back(log_layer(unit, img.width, img.height, s));
    }
    auto blobs = cube_maxima(cube, sigmas, img.width, img.height, params.threshold,
                             log_step);
    return prune_to_diameters(std::move(blobs), params.overlap);
}

std::vector<double> blob_dog(const GrayImage& img, const BlobParams& params) {
    require_bright(img, "blob_dog");
    if (img.empty()) return {};
    const double ratio = params.dog_sigma_ratio;
    if (ratio <= 1.0) throw std::invalid_argument("blob_dog: sigma ratio must exceed 1");
    const auto unit = to_unit(img);

    // successive scales min * ratio^i covering [min, max]
    std::vector<double> scales{params.min_sigma};
    while (scales.back() < params.max_sigma) {
        scales.push_back(scales.back() * ratio);
    }
    if (scales.size() < 2) scales.push_back(params.min_sigma * ratio);

    std::vector<std::vector<double>> blurred;
    blurred.reserve(scales.size());
    for (const double s : scales) {
        blurred.push_back(blur_layer(unit, img.width, img.height, s));
    }
    const double log_step = std::log(ratio);
    std::vector<double> layer_sigmas(scales.size() - 1);
    std::vector<std::vector<double>> cube(scales.size() - 1);
    for (std::size_t i = 0; i + 1 < scales.size(); ++i) {
        // normalized so the layer approximates the scale-normalized LoG at
        // the geometric mean of the two scales
        layer_sigmas[i] = scales[i] * std::sqrt(ratio);
        cube[i].resize(unit.size());
        for (std::size_t p = 0; p < unit.size(); ++p) {
            cube[i][p] = (blurred[i][p] - blurred[i + 1][p]) / (ratio - 1.0);
        }
    }
    auto blobs = cube_maxima(cube, layer_sigmas, img.width, img.height,
                             params.threshold, log_step);
    return prune_to_diameters(std::move(blobs), params.overlap);
}

// ---------------------------------------------------------------------------
// Orchestration

FeatureSamples extract_features(const Raster& crop, const FeatureParams& params) {
    FeatureSamples out;
    auto guard = [&out](FeatureId id, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            out.of(id).clear();
            out.warnings.push_back(std::string(feature_name(id)) + ": " + e.what());
        }
    };

    GrayImage corner_stroke, geometry, convex, blobs_cc;
    try {
        corner_stroke = preprocess(crop, PrepRecipe::CornerStroke, params.prep);
        geometry = preprocess(crop, PrepRecipe::GeometryBoxes, params.prep);
        convex = preprocess(crop, PrepRecipe::ConvexOrient, params.prep);
        blobs_cc = preprocess(crop, PrepRecipe::BlobsAndCC, params.prep);
    } catch (const std::exception& e) {
        out.warnings.push_back(std::string("preprocess: ") + e.what());
        return out;
    }

    guard(FeatureId::CornerAngle, [&] {
        out.of(FeatureId::CornerAngle) = corner_angles(corner_stroke, params.corner);
    });
    guard(FeatureId::StrokeWidth, [&] {
        const auto bin = otsu_binarize(corner_stroke, &out.warnings);
        if (bin.foreground_count() == 0) return; // blank crop, nothing to measure
        const auto skel = skeletonize(bin);
        const auto dmap = distance_transform(bin);
        out.of(FeatureId::StrokeWidth) = stroke_widths(bin, skel, dmap);
    });
    guard(FeatureId::ConvexArea, [&] {
        auto [areas, orients] = convex_areas_orientations(convex, params);
        out.of(FeatureId::ConvexArea) = std::move(areas);
        out.of(FeatureId::Orientation) = std::move(orients);
    });
    guard(FeatureId::Height, [&] {
        auto geom = box_geometry(geometry, params);
        out.of(FeatureId::Height) = std::move(geom.heights);
        out.of(FeatureId::Width) = std::move(geom.widths);
        out.of(FeatureId::AspectRatio) = std::move(geom.aspects);
    });
    guard(FeatureId::ConnectedComponent, [&] {
        const auto bin = otsu_binarize(blobs_cc, &out.warnings);
        if (bin.foreground_count() == 0) return;
        const auto skel = skeletonize(bin);
        out.of(FeatureId::ConnectedComponent) = connected_components(skel);
    });
    guard(FeatureId::BlobLog, [&] {
        out.of(FeatureId::BlobLog) = blob_log(blobs_cc, params.blob);
    });
    guard(FeatureId::BlobDog, [&] {
        out.of(FeatureId::BlobDog) = blob_dog(blobs_cc, params.blob);
    });
    return out;
}

FeatureSamples extract_all(const PageRecord& page, const BBox& bbox,
                           const FeatureParams& params, SourceKind kind,
                           std::string bbox_id) {
    std::vector<std::string> crop_warnings;
    const Raster crop = extract_bbox_image(page, bbox, &crop_warnings);
    FeatureSamples out = extract_features(crop, params);
    out.bbox_id = std::move(bbox_id);
    out.kind = kind;
    out.warnings.insert(out.warnings.begin(), crop_warnings.begin(), crop_warnings.end());
    return out;
}

} // namespace handclust
