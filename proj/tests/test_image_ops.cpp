#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "handclust/image_ops.hpp"
#include "handclust/rng.hpp"
#include "oracles.hpp"

using namespace handclust;

namespace {

GrayImage gray_from(const std::vector<std::uint8_t>& px, int w, int h,
                    Polarity pol = Polarity::InkBrightOnDark) {
    GrayImage img(w, h);
    img.pixels = px;
    img.polarity = pol;
    return img;
}

BinaryImage bar_image(int thickness, int length, int margin) {
    BinaryImage img(length + 2 * margin, thickness + 2 * margin);
    for (int y = 0; y < thickness; ++y) {
        for (int x = 0; x < length; ++x) img.at(x + margin, y + margin) = 1;
    }
    return img;
}

double max_gradient(const GrayImage& img) {
    double best = 0.0;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x + 1 < img.width; ++x) {
            best = std::max(best, std::abs(double(img.at(x + 1, y)) - img.at(x, y)));
        }
    }
    return best;
}

} // namespace

TEST_CASE("preprocess: unsharp mask is the identity on constant images") {
    Raster flat(40, 30, 1, 128);
    for (const auto recipe : {PrepRecipe::CornerStroke, PrepRecipe::GeometryBoxes,
                              PrepRecipe::ConvexOrient, PrepRecipe::BlobsAndCC}) {
        const auto out = preprocess(flat, recipe, {});
        const bool inverted =
            recipe == PrepRecipe::CornerStroke || recipe == PrepRecipe::BlobsAndCC;
        const std::uint8_t expect = inverted ? 127 : 128;
        for (const auto p : out.pixels) CHECK(p == expect);
    }
}

TEST_CASE("preprocess: pure white page under BlobsAndCC becomes all black, ink-bright") {
    Raster white(20, 20, 1, 255);
    const auto out = preprocess(white, PrepRecipe::BlobsAndCC, {});
    CHECK(out.polarity == Polarity::InkBrightOnDark);
    for (const auto p : out.pixels) CHECK(p == 0);
}

TEST_CASE("preprocess: CornerStroke strictly increases step-edge contrast") {
    Raster step(60, 20, 1, 220);
    for (int y = 0; y < 20; ++y) {
        for (int x = 30; x < 60; ++x) step.at(x, y) = 60;
    }
    const auto plain = invert(to_grayscale(step));
    const auto sharpened = preprocess(step, PrepRecipe::CornerStroke, {});
    CHECK(max_gradient(sharpened) > max_gradient(plain));
}

TEST_CASE("invert is an involution and flips polarity") {
    RngStream rng(7);
    GrayImage img(13, 9);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    img.polarity = Polarity::InkDarkOnLight;
    const auto twice = invert(invert(img));
    CHECK(twice.pixels == img.pixels);
    CHECK(twice.polarity == img.polarity);
    CHECK(invert(img).polarity == Polarity::InkBrightOnDark);
}

TEST_CASE("otsu matches the exhaustive threshold sweep on a bimodal image") {
    // 90% at 50, 10% at 200
    std::vector<std::uint8_t> px(100, 50);
    for (int i = 0; i < 10; ++i) px[i] = 200;
    const auto img = gray_from(px, 10, 10);
    const auto mask = otsu_binarize(img);
    const int t = oracles::otsu_threshold_sweep(px);
    REQUIRE(t >= 50);
    REQUIRE(t < 200);
    for (std::size_t i = 0; i < px.size(); ++i) {
        CHECK(mask.bits[i] == (px[i] > t ? 1 : 0));
        CHECK(mask.bits[i] == (px[i] == 200 ? 1 : 0));
    }
}

TEST_CASE("otsu on a constant image yields no foreground and warns") {
    std::vector<std::string> warnings;
    const auto img = gray_from(std::vector<std::uint8_t>(64, 77), 8, 8);
    const auto mask = otsu_binarize(img, &warnings);
    CHECK(mask.foreground_count() == 0);
    CHECK(warnings.size() == 1);
}

TEST_CASE("otsu on a half 0 / half 255 image selects exactly the bright half") {
    std::vector<std::uint8_t> px(64, 0);
    for (int i = 32; i < 64; ++i) px[i] = 255;
    const auto img = gray_from(px, 8, 8);
    const auto mask = otsu_binarize(img);
    const int t = oracles::otsu_threshold_sweep(px);
    for (std::size_t i = 0; i < px.size(); ++i) {
        CHECK(mask.bits[i] == (px[i] > t ? 1 : 0));
        CHECK(mask.bits[i] == (px[i] == 255 ? 1 : 0));
    }
}

TEST_CASE("otsu partition is invariant under shifting all intensities") {
    RngStream rng(11);
    std::vector<std::uint8_t> px(256);
    for (auto& p : px) p = static_cast<std::uint8_t>(rng.uniform_int(0, 150));
    const auto base = otsu_binarize(gray_from(px, 16, 16));
    std::vector<std::uint8_t> shifted(px.size());
    for (std::size_t i = 0; i < px.size(); ++i) shifted[i] = static_cast<std::uint8_t>(px[i] + 40);
    const auto moved = otsu_binarize(gray_from(shifted, 16, 16));
    CHECK(base.bits == moved.bits);
}

TEST_CASE("skeletonize: empty stays empty") {
    const auto out = skeletonize(BinaryImage(16, 16));
    CHECK(out.foreground_count() == 0);
}

TEST_CASE("skeletonize: thick bar thins to a single 1-px component spanning its length") {
    const auto bar = bar_image(5, 40, 6);
    const auto skel = skeletonize(bar);
    // subset of the original foreground
    for (std::size_t i = 0; i < skel.bits.size(); ++i) {
        if (skel.bits[i]) CHECK(bar.bits[i] == 1);
    }
    CHECK(oracles::flood_fill_areas(skel, 2).size() == 1);
    // spans nearly the whole bar horizontally
    int minx = skel.width, maxx = -1;
    for (int y = 0; y < skel.height; ++y) {
        for (int x = 0; x < skel.width; ++x) {
            if (skel.at(x, y)) {
                minx = std::min(minx, x);
                maxx = std::max(maxx, x);
            }
        }
    }
    CHECK(maxx - minx + 1 >= 40 - 4);
    // thin: no 2x2 all-foreground block
    for (int y = 0; y + 1 < skel.height; ++y) {
        for (int x = 0; x + 1 < skel.width; ++x) {
            CHECK((skel.at(x, y) & skel.at(x + 1, y) & skel.at(x, y + 1) &
                   skel.at(x + 1, y + 1)) == 0);
        }
    }
}

TEST_CASE("skeletonize: plus sign keeps one component") {
    BinaryImage plus(31, 31);
    for (int x = 3; x < 28; ++x) {
        for (int y = 13; y < 18; ++y) plus.at(x, y) = 1;
    }
    for (int y = 3; y < 28; ++y) {
        for (int x = 13; x < 18; ++x) plus.at(x, y) = 1;
    }
    const auto skel = skeletonize(plus);
    CHECK(oracles::flood_fill_areas(skel, 2).size() == 1);
    CHECK(skel.foreground_count() > 0);
}

TEST_CASE("skeletonize is idempotent and preserves component count on random masks") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto mask = oracles::random_mask(24, 24, 0.45, 1000 + seed);
        const auto skel = skeletonize(mask);
        const auto again = skeletonize(skel);
        CHECK(again.bits == skel.bits);
        CHECK(oracles::flood_fill_areas(skel, 2).size() ==
              oracles::flood_fill_areas(mask, 2).size());
    }
}

TEST_CASE("distance transform: single foreground pixel with 4-adjacent background") {
    BinaryImage img(5, 5);
    img.at(2, 2) = 1;
    const auto dm = distance_transform(img);
    CHECK(dm.at(2, 2) == doctest::Approx(1.0));
}

TEST_CASE("distance transform: diagonal-only background gives sqrt(2)") {
    // 3x3 with foreground cross, background only at the four corners
    BinaryImage img(3, 3, 1);
    img.at(0, 0) = img.at(2, 0) = img.at(0, 2) = img.at(2, 2) = 0;
    const auto dm = distance_transform(img);
    CHECK(dm.at(1, 1) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("distance transform matches the brute-force oracle exactly") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto mask = oracles::random_mask(32, 32, 0.5 + 0.008 * seed, 2000 + seed);
        mask.bits[0] = 0; // guarantee a background pixel
        const auto dm = distance_transform(mask);
        const auto expect = oracles::brute_force_edt_squared(mask);
        for (std::size_t i = 0; i < expect.size(); ++i) {
            CHECK(dm.values[i] ==
                  static_cast<float>(std::sqrt(static_cast<double>(expect[i]))));
        }
    }
}

TEST_CASE("distance transform squared values are sums of two integer squares") {
    const auto mask = oracles::random_mask(20, 20, 0.6, 99);
    const auto dm = distance_transform(mask);
    for (const float v : dm.values) {
        const double sq = double(v) * double(v);
        CHECK(std::abs(sq - std::round(sq)) < 1e-3);
    }
}

TEST_CASE("distance transform requires a background pixel") {
    CHECK_THROWS(distance_transform(BinaryImage(4, 4, 1)));
}

TEST_CASE("label_regions: diagonal pixels join under connectivity 2 only") {
    BinaryImage img(4, 4);
    img.at(1, 1) = 1;
    img.at(2, 2) = 1;
    CHECK(label_regions(img, 2).label_count == 1);
    CHECK(label_regions(img, 1).label_count == 2);
}

TEST_CASE("label_regions matches flood-fill areas as multisets on random masks") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto mask = oracles::random_mask(24, 24, 0.4 + 0.01 * seed, 3000 + seed);
        for (const int conn : {1, 2}) {
            const auto labels = label_regions(mask, conn);
            auto expect = oracles::flood_fill_areas(mask, conn);
            std::vector<int> got(labels.label_count, 0);
            for (const auto lab : labels.labels) {
                if (lab > 0) ++got[lab - 1];
            }
            std::sort(expect.begin(), expect.end());
            auto got_sorted = got;
            std::sort(got_sorted.begin(), got_sorted.end());
            REQUIRE(got_sorted == expect);
        }
    }
}

TEST_CASE("label_regions assigns labels in raster-scan first-encounter order") {
    BinaryImage img(7, 3);
    img.at(5, 0) = 1; // first encountered
    img.at(1, 1) = 1;
    img.at(0, 2) = 1; // 8-connected to (1,1)
    const auto labels = label_regions(img, 2);
    CHECK(labels.label_count == 2);
    CHECK(labels.at(5, 0) == 1);
    CHECK(labels.at(1, 1) == 2);
    CHECK(labels.at(0, 2) == 2);
}

TEST_CASE("label_regions: distinct labels partition the foreground") {
    const auto mask = oracles::random_mask(30, 18, 0.5, 77);
    const auto labels = label_regions(mask, 2);
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
        CHECK((labels.labels[i] > 0) == (mask.bits[i] == 1));
        CHECK(labels.labels[i] <= labels.label_count);
    }
}
