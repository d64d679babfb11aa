#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "handclust/hocr.hpp"
#include "handclust/image.hpp"
#include "handclust/image_ops.hpp"

namespace handclust {

/// The ten handwriting features, in the canonical dataset column order.
/// This order is fixed and identical everywhere: rows, CSV headers,
/// selection masks.
enum class FeatureId {
    ConnectedComponent = 0,
    Orientation,
    Height,
    BlobLog,
    Width,
    ConvexArea,
    CornerAngle,
    StrokeWidth,
    AspectRatio,
    BlobDog,
};

inline constexpr int kFeatureCount = 10;

std::string_view feature_name(FeatureId id);
std::optional<FeatureId> feature_from_name(std::string_view name);

struct CornerParams {
    double fast_threshold = 0.05; // on intensities normalized to [0, 1]
    int moment_radius = 7;        // octagonal mask outer radius
};

struct BlobParams {
    double min_sigma = 1.0;
    double max_sigma = 30.0;
    int num_sigma = 10; // geometric sigma steps for the LoG sweep
    double threshold = 0.1;
    double overlap = 0.5;
    double dog_sigma_ratio = 1.6;
};

struct FeatureParams {
    PrepParams prep;
    CornerParams corner;
    BlobParams blob;
    int height_width_cap = 100; // heights kept only when bbox width <= cap
};

enum class SourceKind { Line, Word };

/// Raw per-bbox sample lists for each of the ten features.
struct FeatureSamples {
    std::array<std::vector<double>, kFeatureCount> values;
    std::string bbox_id;
    SourceKind kind = SourceKind::Line;
    std::vector<std::string> warnings;

    std::vector<double>& of(FeatureId id) { return values[static_cast<int>(id)]; }
    const std::vector<double>& of(FeatureId id) const {
        return values[static_cast<int>(id)];
    }
};

/// FAST-9 corner peaks; per corner, the angle (degrees, (-180, 180]) of the
/// vector from the corner to the intensity centroid of an octagonal
/// neighborhood, with y increasing downward. Expects CornerStroke output.
std::vector<double> corner_angles(const GrayImage& img, const CornerParams& params);

/// Twice the distance-map value at every skeleton pixel. On an odd bar of
/// thickness t this definition yields a median of t + 1.
std::vector<double> stroke_widths(const BinaryImage& bin, const BinaryImage& skel,
                                  const DistanceMap& dmap);

/// Per 8-connected gray region (ink <= threshold on white background):
/// pixel count of the filled convex hull, and the major-axis angle from the
/// second central moments, degrees in (-90, 90]. Single-pixel regions are
/// (1, 0).
std::pair<std::vector<double>, std::vector<double>>
convex_areas_orientations(const GrayImage& img, const FeatureParams& params);

struct BoxGeometry {
    std::vector<double> heights;
    std::vector<double> widths;
    std::vector<double> aspects; // width / height
};

/// Tight bounding boxes of 8-connected ink regions. Heights are kept only
/// for boxes at most `height_width_cap` pixels wide; widths and aspect
/// ratios cover every box.
BoxGeometry box_geometry(const GrayImage& img, const FeatureParams& params);

/// Areas (pixel counts) of the 8-connected regions of a skeleton image.
std::vector<double> connected_components(const BinaryImage& skel);

/// Scale-normalized Laplacian-of-Gaussian blob diameters (2 * sqrt(2) *
/// sigma, with parabolic sub-scale refinement). Expects ink-bright input;
/// intensities are normalized to [0, 1] internally.
std::vector<double> blob_log(const GrayImage& img, const BlobParams& params);

/// Difference-of-Gaussian blob diameters; successive scales at the
/// configured ratio, otherwise the same conventions as blob_log.
std::vector<double> blob_dog(const GrayImage& img, const BlobParams& params);

/// Runs every feature's preprocessing recipe and extractor on a cropped
/// bbox image. A failing extractor leaves its list empty and records a
/// warning; extraction never aborts the page.
FeatureSamples extract_features(const Raster& crop, const FeatureParams& params);

FeatureSamples extract_all(const PageRecord& page, const BBox& bbox,
                           const FeatureParams& params, SourceKind kind,
                           std::string bbox_id);

} // namespace handclust
