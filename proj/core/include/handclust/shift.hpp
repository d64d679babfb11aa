#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "handclust/fuzzy.hpp"
#include "handclust/reduce.hpp"
#include "handclust/rng.hpp"
#include "handclust/rows.hpp"

namespace handclust {

struct ShiftProtocolConfig {
    int page_size_rows = 50;
    int pages_per_side = 2;
    double tolerance_pct = 5.0;
    int batch_size = 5;
    int batches = 5; // batches * batch_size dummy shifts per experiment
    int centers_min = 2;
    int centers_max = 5;
    int components = 2; // reducer output dimensionality
    std::uint64_t seed = 0;
    CmeansParams cmeans;
};

/// Feature columns of a dataset as a dense matrix, row per dataset row.
Matrix dataset_matrix(const Dataset& ds);
std::vector<std::string> dataset_tags(const Dataset& ds);

struct PagePick {
    char side;  // 'L' or 'R'
    int offset; // first row of the 50-row page in its source dataset
};

struct ShiftDataset {
    Dataset data;    // left rows tagged "L", right rows tagged "R"
    int shift_index; // rows on the left side; the junction sits here
    std::vector<PagePick> source_pages;
};

/// Concatenates pages_per_side random non-overlapping 50-row pages of the
/// left source with the same from the right source. Sides may share rows
/// when both sources are the same dataset.
ShiftDataset make_dummy_shift(const Dataset& src_left, const Dataset& src_right,
                              const ShiftProtocolConfig& cfg, RngStream& rng);

struct ShiftVerdict {
    double fpc = 0.0;
    double left_pct0 = 0.0;  // left-side membership % in canonical cluster 0
    double right_pct0 = 0.0;
    double delta = 0.0;      // |left - right|
    bool different = false;  // delta > tolerance
    ReducerId reducer = ReducerId::Pca;
    std::uint64_t seed = 0;
};

/// scale -> reduce to k components -> 2-center c-means -> canonical order
/// -> side membership comparison under the tolerance.
ShiftVerdict evaluate_shift(const ShiftDataset& sd, ReducerId reducer,
                            const ShiftProtocolConfig& cfg, std::uint64_t seed);

struct CenterFpcStats {
    int centers = 0;
    double mean_fpc = 0.0;
    double std_fpc = 0.0;
};

struct ShiftExperimentReport {
    double mean_pct_different = 0.0; // over the batch percentages
    double std_pct_different = 0.0;
    std::vector<double> batch_pct;
    std::vector<ShiftVerdict> verdicts;
    std::vector<CenterFpcStats> fpc_stats; // centers swept centers_min..max
    ReducerId reducer = ReducerId::Pca;
    std::uint64_t seed = 0;
};

/// The dummy-hand-shift protocol: batches x batch_size dummy shifts, a
/// percent-different figure per batch, mean/std over batches, plus an FPC
/// sweep over the configured center counts. All randomness derives from
/// cfg.seed, so results are independent of execution order.
ShiftExperimentReport shift_experiment(const Dataset& src_left,
                                       const Dataset& src_right, ReducerId reducer,
                                       const ShiftProtocolConfig& cfg);

struct ScanPoint {
    int boundary_row = 0;
    bool flagged = false;
    double delta = 0.0; // mean over the seed repeats
    double fpc = 0.0;   // mean over the seed repeats
};

/// Slides a 4-page window (2 left + 2 right) one page at a time and
/// evaluates the boundary with 5 derived seeds; a boundary is flagged when
/// at least 4 of 5 verdicts say "different".
std::vector<ScanPoint> scan_document(const Dataset& ds, ReducerId reducer,
                                     const ShiftProtocolConfig& cfg);

} // namespace handclust
