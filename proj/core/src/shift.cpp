#include "handclust/shift.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace handclust {

Matrix dataset_matrix(const Dataset& ds) {
    if (ds.rows.empty()) throw std::invalid_argument("dataset_matrix: no rows");
    const auto width = ds.rows.front().values.size();
    Matrix X(static_cast<Eigen::Index>(ds.rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < ds.rows.size(); ++r) {
        if (ds.rows[r].values.size() != width) {
            throw std::invalid_argument("dataset_matrix: ragged rows");
        }
        for (std::size_t c = 0; c < width; ++c) {
            X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                ds.rows[r].values[c];
        }
    }
    return X;
}

std::vector<std::string> dataset_tags(const Dataset& ds) {
    std::vector<std::string> tags;
    tags.reserve(ds.rows.size());
    for (const auto& row : ds.rows) tags.push_back(row.prov.hand);
    return tags;
}

namespace {

// Uniform pick from the offsets in [0, max_offset] that keep a full page
// from overlapping any already-picked page of the same side.
int pick_page_offset(int max_offset, int page_size, const std::vector<int>& taken,
                     RngStream& rng, const char* side) {
    std::vector<std::pair<int, int>> free_ranges{{0, max_offset}};
    for (const int t : taken) {
        std::vector<std::pair<int, int>> next;
        for (const auto& [lo, hi] : free_ranges) {
            // offsets colliding with the page at t: (t - page_size, t + page_size)
            const int block_lo = t - page_size + 1;
            const int block_hi = t + page_size - 1;
            if (block_hi < lo || block_lo > hi) {
                next.emplace_back(lo, hi);
                continue;
            }
            if (lo < block_lo) next.emplace_back(lo, block_lo - 1);
            if (hi > block_hi) next.emplace_back(block_hi + 1, hi);
        }
        free_ranges = std::move(next);
    }
    std::int64_t total = 0;
    for (const auto& [lo, hi] : free_ranges) total += hi - lo + 1;
    if (total <= 0) {
        throw std::runtime_error(std::string("make_dummy_shift: ") + side +
                                 " source cannot fit another non-overlapping page");
    }
    std::int64_t idx = rng.uniform_int(0, total - 1);
    for (const auto& [lo, hi] : free_ranges) {
        const std::int64_t len = hi - lo + 1;
        if (idx < len) return lo + static_cast<int>(idx);
        idx -= len;
    }
    return free_ranges.back().second; // unreachable
}

void append_page(Dataset& out, const Dataset& src, int offset, int page_size,
                 const char* tag) {
    for (int i = 0; i < page_size; ++i) {
        FeatureRow row = src.rows[static_cast<std::size_t>(offset) + i];
        row.prov.hand = tag;
        out.rows.push_back(std::move(row));
    }
}

} // namespace

ShiftDataset make_dummy_shift(const Dataset& src_left, const Dataset& src_right,
                              const ShiftProtocolConfig& cfg, RngStream& rng) {
    const int page = cfg.page_size_rows;
    const int per_side = cfg.pages_per_side;
    const auto check = [&](const Dataset& src, const char* side) {
        const int need = page * per_side;
        if (static_cast<int>(src.rows.size()) < need) {
            throw std::runtime_error(std::string("make_dummy_shift: ") + side +
                                     " source has " + std::to_string(src.rows.size()) +
                                     " rows, needs " + std::to_string(need));
        }
    };
    check(src_left, "left");
    check(src_right, "right");

    ShiftDataset sd;
    sd.data.features = src_left.features;
    sd.data.seed = cfg.seed;
    sd.shift_index = page * per_side;

    std::vector<int> taken;
    for (int p = 0; p < per_side; ++p) {
        const int off = pick_page_offset(static_cast<int>(src_left.rows.size()) - page,
                                         page, taken, rng, "left");
        taken.push_back(off);
        sd.source_pages.push_back({'L', off});
        append_page(sd.data, src_left, off, page, "L");
    }
    taken.clear();
    for (int p = 0; p < per_side; ++p) {
        const int off = pick_page_offset(static_cast<int>(src_right.rows.size()) - page,
                                         page, taken, rng, "right");
        taken.push_back(off);
        sd.source_pages.push_back({'R', off});
        append_page(sd.data, src_right, off, page, "R");
    }
    return sd;
}

ShiftVerdict evaluate_shift(const ShiftDataset& sd, ReducerId reducer,
                            const ShiftProtocolConfig& cfg, std::uint64_t seed) {
    const Matrix X = dataset_matrix(sd.data);
    const auto [scaler, Z] = scaler_fit_transform(X);
    const auto reduced = reduce(Z, reducer, cfg.components, derive_seed(seed, 0xA1));
    auto model = cmeans(reduced.scores, 2, cfg.cmeans, derive_seed(seed, 0xB2));
    canonicalize(model);
    const auto labels = hard_assign(model.memberships);
    const auto report = hand_memberships(labels, dataset_tags(sd.data), 2, model.fpc);

    ShiftVerdict verdict;
    verdict.reducer = reducer;
    verdict.seed = seed;
    verdict.fpc = model.fpc;
    for (const auto& hand : report.hands) {
        if (hand.hand == "L") verdict.left_pct0 = hand.cluster_pct[0];
        if (hand.hand == "R") verdict.right_pct0 = hand.cluster_pct[0];
    }
    verdict.delta = std::abs(verdict.left_pct0 - verdict.right_pct0);
    verdict.different = verdict.delta > cfg.tolerance_pct;
    return verdict;
}

namespace {

std::pair<double, double> mean_std(const std::vector<double>& v) {
    if (v.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (const double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (const double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(v.size()))};
}

} // namespace

ShiftExperimentReport shift_experiment(const Dataset& src_left,
                                       const Dataset& src_right, ReducerId reducer,
                                       const ShiftProtocolConfig& cfg) {
    ShiftExperimentReport report;
    report.reducer = reducer;
    report.seed = cfg.seed;

    const int total = cfg.batches * cfg.batch_size;
    std::vector<ShiftDataset> shifts;
    shifts.reserve(total);
    for (int t = 0; t < total; ++t) {
        RngStream pick_rng(derive_seed(cfg.seed, 0x50, static_cast<std::uint64_t>(t)));
        shifts.push_back(make_dummy_shift(src_left, src_right, cfg, pick_rng));
        report.verdicts.push_back(evaluate_shift(
            shifts.back(), reducer, cfg,
            derive_seed(cfg.seed, 0x51, static_cast<std::uint64_t>(t))));
    }

    for (int b = 0; b < cfg.batches; ++b) {
        int different = 0;
        for (int i = 0; i < cfg.batch_size; ++i) {
            if (report.verdicts[static_cast<std::size_t>(b) * cfg.batch_size + i].different) {
                ++different;
            }
        }
        report.batch_pct.push_back(100.0 * different / cfg.batch_size);
    }
    std::tie(report.mean_pct_different, report.std_pct_different) =
        mean_std(report.batch_pct);

    // FPC sweep over center counts, same dummy shifts
    for (int c = cfg.centers_min; c <= cfg.centers_max; ++c) {
        std::vector<double> fpcs;
        fpcs.reserve(total);
        for (int t = 0; t < total; ++t) {
            const Matrix X = dataset_matrix(shifts[t].data);
            const auto [scaler, Z] = scaler_fit_transform(X);
            const auto reduced =
                reduce(Z, reducer, cfg.components,
                       derive_seed(cfg.seed, 0x52, static_cast<std::uint64_t>(t)));
            const auto model =
                cmeans(reduced.scores, c, cfg.cmeans,
                       derive_seed(cfg.seed, 0x53, static_cast<std::uint64_t>(t),
                                   static_cast<std::uint64_t>(c)));
            fpcs.push_back(model.fpc);
        }
        CenterFpcStats stats;
        stats.centers = c;
        std::tie(stats.mean_fpc, stats.std_fpc) = mean_std(fpcs);
        report.fpc_stats.push_back(stats);
    }
    return report;
}

std::vector<ScanPoint> scan_document(const Dataset& ds, ReducerId reducer,
                                     const ShiftProtocolConfig& cfg) {
    const int page = cfg.page_size_rows;
    const int pages = static_cast<int>(ds.rows.size()) / page;
    const int window_pages = 2 * cfg.pages_per_side;
    if (pages < window_pages) {
        throw std::runtime_error("scan_document: need at least " +
                                 std::to_string(window_pages * page) + " rows, have " +
                                 std::to_string(ds.rows.size()));
    }
    constexpr int kSeedRepeats = 5;
    constexpr int kFlagThreshold = 4;

    std::vector<ScanPoint> trace;
    for (int p = 0; p + window_pages <= pages; ++p) {
        ShiftDataset window;
        window.data.features = ds.features;
        window.data.seed = cfg.seed;
        window.shift_index = cfg.pages_per_side * page;
        const int base = p * page;
        for (int i = 0; i < cfg.pages_per_side; ++i) {
            window.source_pages.push_back({'L', base + i * page});
            append_page(window.data, ds, base + i * page, page, "L");
        }
        for (int i = 0; i < cfg.pages_per_side; ++i) {
            const int off = base + (cfg.pages_per_side + i) * page;
            window.source_pages.push_back({'R', off});
            append_page(window.data, ds, off, page, "R");
        }

        int different = 0;
        double delta_sum = 0.0, fpc_sum = 0.0;
        for (int s = 0; s < kSeedRepeats; ++s) {
            const auto verdict = evaluate_shift(
                window, reducer, cfg,
                derive_seed(cfg.seed, 0x5C, static_cast<std::uint64_t>(p),
                            static_cast<std::uint64_t>(s)));
            different += verdict.different ? 1 : 0;
            delta_sum += verdict.delta;
            fpc_sum += verdict.fpc;
        }
        ScanPoint point;
        point.boundary_row = base + cfg.pages_per_side * page;
        point.flagged = different >= kFlagThreshold;
        point.delta = delta_sum / kSeedRepeats;
        point.fpc = fpc_sum / kSeedRepeats;
        trace.push_back(point);
    }
    return trace;
}

} // namespace handclust
