#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "handclust/features.hpp"
#include "handclust/rng.hpp"

namespace handclust {

/// Padding plan for one feature's accepted samples: quotient/remainder of
/// the accepted count N by 10, and the number m of synthetic samples that
/// brings the total to a multiple of 10.
struct RowBuildPlan {
    int accepted = 0;        // N
    int quotient = 0;        // p = N / 10
    int remainder = 0;       // n = N - p * 10
    int padding = 0;         // m, with n + m = 10 when n > 0
    int rows_producible = 0; // (N + m) / 10
};

RowBuildPlan plan_rows(int accepted_count);

struct OutlierFilter {
    std::vector<double> kept;
    double mean = 0.0;   // of the raw list
    double stddev = 0.0; // population std of the raw list
};

/// Keeps values within [mean - 2 std, mean + 2 std], boundary inclusive.
/// Statistics are computed over the raw list and also drive the padding
/// generator.
OutlierFilter filter_outliers(const std::vector<double>& values);

/// Appends Normal(mean, stddev) draws, resampled until they fall within
/// mean +- 2 stddev (at most 100 attempts, then clamped to the boundary),
/// so the output length is the next multiple of 10. Requires >= 5 kept
/// values.
std::vector<double> pad_samples(const std::vector<double>& kept, double mean,
                                double stddev, RngStream& rng);

struct RowProvenance {
    int page = 0;
    std::string bbox_id;
    SourceKind kind = SourceKind::Line;
    std::string hand;
    int row_index = 1;
};

struct FeatureRow {
    std::vector<double> values; // 10 consecutive columns per feature
    RowProvenance prov;
};

struct Dataset {
    std::vector<FeatureId> features; // block order
    std::vector<FeatureRow> rows;
    std::string fingerprint;
    std::uint64_t seed = 0;

    int width() const { return kRowBlock * static_cast<int>(features.size()); }
    static constexpr int kRowBlock = 10;
};

struct RowBuildOutcome {
    std::vector<FeatureRow> rows;
    std::string rejection; // non-empty when the bbox was rejected

    bool rejected() const { return !rejection.empty(); }
};

/// Emits as many 100-column rows as every feature can fill: each feature is
/// independently filtered and padded, then row r takes that feature's
/// values (r-1)*10 .. r*10-1. A feature with fewer than 5 accepted values
/// rejects the whole bbox.
RowBuildOutcome build_line_rows(const FeatureSamples& samples, RngStream& rng);

/// Word bboxes contribute exactly one row, from the first 10 padded values
/// of each feature; the remainder is discarded.
RowBuildOutcome build_word_row(const FeatureSamples& samples, RngStream& rng);

struct AssembleResult {
    Dataset dataset;
    std::vector<std::pair<int, int>> rows_per_page; // (page_index, row count)
    std::vector<std::string> warnings;              // rejections, extractor issues
};

/// Per-page extraction output: the line samples and, per line, its word
/// samples, all in document order. Extraction is deterministic and RNG-free.
struct ExtractedPage {
    int page_index = 1;
    std::string hand_tag;
    std::vector<FeatureSamples> line_samples;
    std::vector<std::vector<FeatureSamples>> word_samples;
};

/// Feature extraction over every line bbox and its words; pages may be
/// distributed across `workers` threads without affecting results.
std::vector<ExtractedPage> extract_pages(const std::vector<PageRecord>& pages,
                                         const FeatureParams& params,
                                         int workers = 1);

/// Row building over previously extracted samples. Each bbox owns an RNG
/// substream derived from (seed, page, line, word), so the dataset is
/// byte-identical for a given seed regardless of extraction scheduling.
AssembleResult assemble_rows(const std::vector<ExtractedPage>& pages,
                             std::uint64_t seed);

/// extract_pages + assemble_rows in one call.
AssembleResult assemble_dataset(const std::vector<PageRecord>& pages,
                                const FeatureParams& params, std::uint64_t seed,
                                int workers = 1);

/// Keeps only the 10-column blocks of the named features, in the given
/// order.
Dataset select_features(const Dataset& ds, const std::vector<FeatureId>& ids);

std::string dataset_to_csv(const Dataset& ds);
void write_dataset_csv(const Dataset& ds, const std::string& path);

/// Parses the CSV text; the dataset fingerprint is set to the fnv1a-64 hex
/// of the bytes so loaded data can be identified in downstream reports.
Dataset parse_dataset_csv(const std::string& text);
Dataset read_dataset_csv(const std::string& path);

} // namespace handclust
