#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "handclust/rows.hpp"
#include "handclust/synthetic.hpp"
#include "handclust/util.hpp"

using namespace handclust;

namespace {

// accepted-count N to a sample list that survives the outlier filter whole:
// consecutive integers keep everything within mean +- 2 std for N >= 2
std::vector<double> ramp(int n, double offset = 0.0) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = offset + i;
    return v;
}

FeatureSamples samples_with(int n_per_feature, SourceKind kind) {
    FeatureSamples s;
    s.kind = kind;
    s.bbox_id = "t1";
    for (int f = 0; f < kFeatureCount; ++f) {
        s.values[f] = ramp(n_per_feature, f * 100.0);
    }
    return s;
}

} // namespace

TEST_CASE("filter_outliers keeps everything on a constant list") {
    const auto out = filter_outliers({1, 1, 1, 1, 1});
    CHECK(out.kept.size() == 5);
    CHECK(out.mean == 1.0);
    CHECK(out.stddev == 0.0);
}

TEST_CASE("filter_outliers boundary is inclusive") {
    // mean 20, population std 40; 100 sits exactly on mean + 2 std
    const auto out = filter_outliers({0, 0, 0, 0, 100});
    CHECK(out.mean == doctest::Approx(20.0));
    CHECK(out.stddev == doctest::Approx(40.0));
    CHECK(out.kept.size() == 5);
}

TEST_CASE("filter_outliers drops genuine outliers") {
    std::vector<double> v(20, 10.0);
    v.push_back(10000.0);
    const auto out = filter_outliers(v);
    CHECK(out.kept.size() == 20);
}

TEST_CASE("filter_outliers keeps about 95% of normal draws") {
    RngStream rng(1234);
    std::vector<double> v(1000);
    for (auto& x : v) x = rng.normal();
    const auto out = filter_outliers(v);
    const double frac = static_cast<double>(out.kept.size()) / v.size();
    CHECK(frac == doctest::Approx(0.95).epsilon(0.032));
}

TEST_CASE("plan_rows Eq. 2-3 arithmetic") {
    SUBCASE("N = 23") {
        const auto plan = plan_rows(23);
        CHECK(plan.quotient == 2);
        CHECK(plan.remainder == 3);
        CHECK(plan.padding == 7);
        CHECK(plan.rows_producible == 3);
    }
    SUBCASE("N = 7") {
        const auto plan = plan_rows(7);
        CHECK(plan.quotient == 0);
        CHECK(plan.remainder == 7);
        CHECK(plan.padding == 3);
        CHECK(plan.rows_producible == 1);
    }
    SUBCASE("N = 20 needs no padding") {
        const auto plan = plan_rows(20);
        CHECK(plan.remainder == 0);
        CHECK(plan.padding == 0);
        CHECK(plan.rows_producible == 2);
    }
}

TEST_CASE("pad_samples tops the list up to a multiple of 10") {
    RngStream rng(5);
    SUBCASE("N = 23 gains 7 synthetic values") {
        const auto f = filter_outliers(ramp(23));
        const auto padded = pad_samples(f.kept, f.mean, f.stddev, rng);
        CHECK(padded.size() == 30);
    }
    SUBCASE("N = 7 gains 3") {
        const auto f = filter_outliers(ramp(7));
        const auto padded = pad_samples(f.kept, f.mean, f.stddev, rng);
        CHECK(padded.size() == 10);
    }
    SUBCASE("N = 20 is unchanged") {
        const auto f = filter_outliers(ramp(20));
        const auto padded = pad_samples(f.kept, f.mean, f.stddev, rng);
        CHECK(padded == f.kept);
    }
    SUBCASE("fewer than 5 values is an error") {
        CHECK_THROWS(pad_samples({1, 2, 3, 4}, 2.5, 1.0, rng));
    }
}

TEST_CASE("pad_samples draws stay within mean +- 2 std") {
    RngStream rng(17);
    for (int n : {5, 6, 7, 8, 9, 11, 23, 37}) {
        const auto f = filter_outliers(ramp(n));
        const auto padded = pad_samples(f.kept, f.mean, f.stddev, rng);
        CHECK(padded.size() % 10 == 0);
        for (std::size_t i = f.kept.size(); i < padded.size(); ++i) {
            CHECK(padded[i] >= f.mean - 2.0 * f.stddev);
            CHECK(padded[i] <= f.mean + 2.0 * f.stddev);
        }
        // real values first, in extraction order
        for (std::size_t i = 0; i < f.kept.size(); ++i) {
            CHECK(padded[i] == f.kept[i]);
        }
    }
}

TEST_CASE("pad_samples with zero std pads with the mean") {
    RngStream rng(3);
    const std::vector<double> kept(6, 4.0);
    const auto padded = pad_samples(kept, 4.0, 0.0, rng);
    REQUIRE(padded.size() == 10);
    for (const double v : padded) CHECK(v == 4.0);
}

TEST_CASE("build_line_rows emits min-across-features rows in Eq. 4 layout") {
    FeatureSamples s = samples_with(23, SourceKind::Line); // 30 padded -> 3 rows
    s.values[4] = ramp(15, 400.0);                          // 20 padded -> 2 rows
    RngStream rng(9);
    const auto outcome = build_line_rows(s, rng);
    REQUIRE(!outcome.rejected());
    REQUIRE(outcome.rows.size() == 2);
    for (const auto& row : outcome.rows) CHECK(row.values.size() == 100);
    // block f holds feature f's values serially: row r, block f, slot j
    // equals padded[f][(r-1)*10 + j]; real values are the ramp itself
    CHECK(outcome.rows[0].values[0 * 10 + 0] == 0.0);   // feature 0, first value
    CHECK(outcome.rows[0].values[1 * 10 + 3] == 103.0); // feature 1 offset 100
    CHECK(outcome.rows[1].values[0 * 10 + 0] == 10.0);  // second row continues serially
    CHECK(outcome.rows[1].prov.row_index == 2);
}

TEST_CASE("build_line_rows: all features exactly 10 padded values give one row") {
    FeatureSamples s = samples_with(10, SourceKind::Line);
    RngStream rng(2);
    const auto outcome = build_line_rows(s, rng);
    REQUIRE(outcome.rows.size() == 1);
    CHECK(outcome.rows[0].values.size() == 100);
}

TEST_CASE("build_line_rows rejects when any feature has N < 5") {
    FeatureSamples s = samples_with(12, SourceKind::Line);
    s.values[7] = {1, 2, 3, 4};
    RngStream rng(2);
    const auto outcome = build_line_rows(s, rng);
    CHECK(outcome.rejected());
    CHECK(outcome.rows.empty());
    CHECK(outcome.rejection.find("stroke_width") != std::string::npos);
}

TEST_CASE("build_word_row takes the first 10 values and ignores the rest") {
    FeatureSamples s = samples_with(25, SourceKind::Word);
    RngStream rng(4);
    const auto outcome = build_word_row(s, rng);
    REQUIRE(outcome.rows.size() == 1);
    const auto& row = outcome.rows[0];
    CHECK(row.values.size() == 100);
    for (int f = 0; f < kFeatureCount; ++f) {
        for (int j = 0; j < 10; ++j) {
            CHECK(row.values[f * 10 + j] == f * 100.0 + j); // values 11..25 unused
        }
    }
}

TEST_CASE("build_word_row mixes real and synthetic values when 5 <= N <= 9") {
    FeatureSamples s = samples_with(7, SourceKind::Word);
    RngStream rng(6);
    const auto outcome = build_word_row(s, rng);
    REQUIRE(outcome.rows.size() == 1);
    for (int f = 0; f < kFeatureCount; ++f) {
        const auto filt = filter_outliers(s.values[f]);
        // first 7 slots are the real values
        for (int j = 0; j < 7; ++j) {
            CHECK(outcome.rows[0].values[f * 10 + j] == s.values[f][j]);
        }
        // remaining 3 lie within mean +- 2 std
        for (int j = 7; j < 10; ++j) {
            const double v = outcome.rows[0].values[f * 10 + j];
            CHECK(v >= filt.mean - 2.0 * filt.stddev);
            CHECK(v <= filt.mean + 2.0 * filt.stddev);
        }
    }
}

TEST_CASE("build_word_row rejects on a short feature") {
    FeatureSamples s = samples_with(9, SourceKind::Word);
    s.values[2] = {1, 2, 3};
    RngStream rng(8);
    CHECK(build_word_row(s, rng).rejected());
}

TEST_CASE("assemble_dataset is deterministic and parallel-stable") {
    std::vector<PageRecord> pages;
    HandStyle style;
    SynthPageLayout layout;
    layout.lines_per_page = 2;
    layout.words_per_line = 2;
    layout.chars_per_word = 6;
    pages.push_back(synth_page(style, layout, 1, 100, "A"));
    pages.push_back(synth_page(style, layout, 2, 200, "A"));

    const auto a = assemble_dataset(pages, {}, 42, 1);
    const auto b = assemble_dataset(pages, {}, 42, 4);
    CHECK(dataset_to_csv(a.dataset) == dataset_to_csv(b.dataset));

    const auto c = assemble_dataset(pages, {}, 43, 1);
    CHECK(dataset_to_csv(a.dataset) != dataset_to_csv(c.dataset));
}

TEST_CASE("assemble_dataset orders line rows before their word rows") {
    std::vector<PageRecord> pages;
    HandStyle style;
    SynthPageLayout layout;
    layout.lines_per_page = 1;
    layout.words_per_line = 2;
    layout.chars_per_word = 6;
    pages.push_back(synth_page(style, layout, 1, 300, "A"));
    const auto res = assemble_dataset(pages, {}, 7, 1);
    REQUIRE(!res.dataset.rows.empty());
    // line rows come first, then word rows in document order
    std::size_t i = 0;
    while (i < res.dataset.rows.size() &&
           res.dataset.rows[i].prov.kind == SourceKind::Line) {
        ++i;
    }
    for (; i < res.dataset.rows.size(); ++i) {
        CHECK(res.dataset.rows[i].prov.kind == SourceKind::Word);
    }
}

TEST_CASE("select_features keeps blocks in the requested order") {
    FeatureSamples s = samples_with(10, SourceKind::Line);
    RngStream rng(2);
    auto outcome = build_line_rows(s, rng);
    Dataset ds;
    for (int i = 0; i < kFeatureCount; ++i) ds.features.push_back(static_cast<FeatureId>(i));
    ds.rows = outcome.rows;

    SUBCASE("the six-feature selection gives 60 columns") {
        const std::vector<FeatureId> six = {
            FeatureId::Orientation, FeatureId::Height,      FeatureId::Width,
            FeatureId::CornerAngle, FeatureId::AspectRatio, FeatureId::BlobDog,
        };
        const auto sel = select_features(ds, six);
        CHECK(sel.width() == 60);
        REQUIRE(sel.rows.size() == ds.rows.size());
        CHECK(sel.rows[0].values.size() == 60);
        // first block is orientation (canonical block 1)
        for (int j = 0; j < 10; ++j) {
            CHECK(sel.rows[0].values[j] == ds.rows[0].values[10 + j]);
        }
    }
    SUBCASE("selecting all ten in canonical order is the identity") {
        const auto sel = select_features(ds, ds.features);
        CHECK(sel.rows[0].values == ds.rows[0].values);
    }
    SUBCASE("a single feature keeps only its block") {
        const auto sel = select_features(ds, {FeatureId::StrokeWidth});
        CHECK(sel.width() == 10);
        for (int j = 0; j < 10; ++j) {
            CHECK(sel.rows[0].values[j] == ds.rows[0].values[70 + j]);
        }
    }
}

TEST_CASE("dataset CSV round trip") {
    FeatureSamples s = samples_with(10, SourceKind::Line);
    RngStream rng(2);
    auto outcome = build_line_rows(s, rng);
    Dataset ds;
    for (int i = 0; i < kFeatureCount; ++i) ds.features.push_back(static_cast<FeatureId>(i));
    ds.rows = outcome.rows;
    ds.rows[0].prov.page = 3;
    ds.rows[0].prov.hand = "Hand1";

    const auto csv = dataset_to_csv(ds);
    const auto back = parse_dataset_csv(csv);
    REQUIRE(back.rows.size() == ds.rows.size());
    CHECK(back.features == ds.features);
    CHECK(back.rows[0].values == ds.rows[0].values);
    CHECK(back.rows[0].prov.page == 3);
    CHECK(back.rows[0].prov.hand == "Hand1");
    CHECK(back.rows[0].prov.kind == SourceKind::Line);
    // header names the blocks f<feature>_<j>
    CHECK(csv.rfind("fconnected_component_0,", 0) == 0);
}
