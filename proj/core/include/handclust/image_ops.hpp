#pragma once

#include <string>
#include <vector>

#include "handclust/image.hpp"

namespace handclust {

/// Per-feature preprocessing recipes. Stroke width and connected components
/// continue from CornerStroke / BlobsAndCC output with Otsu thresholding and
/// skeletonization.
enum class PrepRecipe {
    CornerStroke,  // unsharp -> grayscale -> invert (ink bright)
    GeometryBoxes, // grayscale, white background
    ConvexOrient,  // unsharp -> grayscale, white background
    BlobsAndCC,    // grayscale -> invert (ink bright)
};

struct PrepParams {
    double unsharp_radius = 2.0; // Gaussian sigma, pixels
    double unsharp_amount = 1.0;
    // Ink threshold when labeling non-binarized white-background images:
    // foreground = intensity <= threshold.
    int gray_ink_threshold = 128;
};

GrayImage to_grayscale(const Raster& image);
Raster unsharp_mask(const Raster& image, double radius, double amount);
GrayImage invert(GrayImage img);

/// Separable Gaussian blur, reflect boundary, kernel truncated at 4 sigma.
std::vector<double> gaussian_blur(const std::vector<double>& src, int width,
                                  int height, double sigma);

GrayImage preprocess(const Raster& image, PrepRecipe recipe,
                     const PrepParams& params = {});

/// Otsu threshold on the 256-bin histogram; foreground = pixels > t.
/// Requires ink-bright polarity. Constant images produce an all-background
/// mask and a warning.
BinaryImage otsu_binarize(const GrayImage& img,
                          std::vector<std::string>* warnings = nullptr);

/// Zhang-Suen thinning to convergence. Deletion candidates are re-verified
/// against the partially updated image before removal, which keeps the
/// number of 8-connected foreground components unchanged (a simultaneous
/// update can erase 2x2 blocks entirely).
BinaryImage skeletonize(const BinaryImage& bin);

/// Exact Euclidean distance transform (two-pass squared-distance lower
/// envelope, then sqrt). Throws if the image has no background pixel.
DistanceMap distance_transform(const BinaryImage& bin);

/// Connected component labeling; connectivity 1 = 4-neighborhood,
/// 2 = 8-neighborhood. Labels are assigned in raster-scan first-encounter
/// order.
LabelImage label_regions(const BinaryImage& bin, int connectivity);

/// Gray overload: thresholds ink first (foreground = intensity <=
/// ink_threshold, white-background polarity assumed).
LabelImage label_regions(const GrayImage& img, int connectivity,
                         int ink_threshold = 128);

} // namespace handclust
