#include "handclust/rows.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "handclust/util.hpp"

namespace handclust {

RowBuildPlan plan_rows(int accepted_count) {
    RowBuildPlan plan;
    plan.accepted = accepted_count;
    plan.quotient = accepted_count / 10;
    plan.remainder = accepted_count - plan.quotient * 10;
    plan.padding = plan.remainder == 0 ? 0 : 10 - plan.remainder;
    plan.rows_producible = (accepted_count + plan.padding) / 10;
    return plan;
}

OutlierFilter filter_outliers(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("filter_outliers: empty list");
    OutlierFilter out;
    double sum = 0.0;
    for (const double v : values) sum += v;
    out.mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (const double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(values.size()));
    const double lo = out.mean - 2.0 * out.stddev;
    const double hi = out.mean + 2.0 * out.stddev;
    for (const double v : values) {
        if (v >= lo && v <= hi) out.kept.push_back(v);
    }
    return out;
}

std::vector<double> pad_samples(const std::vector<double>& kept, double mean,
                                double stddev, RngStream& rng) {
    const int n = static_cast<int>(kept.size());
    if (n < 5) {
        throw std::invalid_argument("pad_samples: fewer than 5 accepted values");
    }
    const auto plan = plan_rows(n);
    std::vector<double> out = kept;
    const double lo = mean - 2.0 * stddev;
    const double hi = mean + 2.0 * stddev;
    for (int i = 0; i < plan.padding; ++i) {
        double draw = rng.normal(mean, stddev);
        for (int attempt = 1; attempt < 100 && (draw < lo || draw > hi); ++attempt) {
            draw = rng.normal(mean, stddev);
        }
        out.push_back(std::clamp(draw, lo, hi));
    }
    return out;
}

namespace {

RowBuildOutcome build_rows_impl(const FeatureSamples& samples, RngStream& rng,
                                bool word_single_row) {
    RowBuildOutcome out;
    std::array<std::vector<double>, kFeatureCount> padded;
    for (int f = 0; f < kFeatureCount; ++f) {
        const auto filtered = samples.values[f].empty()
                                  ? OutlierFilter{}
                                  : filter_outliers(samples.values[f]);
        if (static_cast<int>(filtered.kept.size()) < 5) {
            out.rejection = std::string(feature_name(static_cast<FeatureId>(f))) +
                            " produced " + std::to_string(filtered.kept.size()) +
                            " values after filtering (need >= 5)";
            return out;
        }
        padded[f] = pad_samples(filtered.kept, filtered.mean, filtered.stddev, rng);
    }

    int rows = word_single_row ? 1 : static_cast<int>(padded[0].size()) / 10;
    if (!word_single_row) {
        for (const auto& p : padded) {
            rows = std::min(rows, static_cast<int>(p.size()) / 10);
        }
    }
    for (int r = 0; r < rows; ++r) {
        FeatureRow row;
        row.values.reserve(kFeatureCount * 10);
        for (int f = 0; f < kFeatureCount; ++f) {
            for (int j = 0; j < 10; ++j) {
                row.values.push_back(padded[f][static_cast<std::size_t>(r) * 10 + j]);
            }
        }
        row.prov.bbox_id = samples.bbox_id;
        row.prov.kind = samples.kind;
        row.prov.row_index = r + 1;
        out.rows.push_back(std::move(row));
    }
    return out;
}

} // namespace

RowBuildOutcome build_line_rows(const FeatureSamples& samples, RngStream& rng) {
    return build_rows_impl(samples, rng, false);
}

RowBuildOutcome build_word_row(const FeatureSamples& samples, RngStream& rng) {
    return build_rows_impl(samples, rng, true);
}

namespace {

std::vector<FeatureId> canonical_features() {
    std::vector<FeatureId> ids(kFeatureCount);
    for (int i = 0; i < kFeatureCount; ++i) ids[i] = static_cast<FeatureId>(i);
    return ids;
}

ExtractedPage extract_page(const PageRecord& page, const FeatureParams& params) {
    ExtractedPage out;
    out.page_index = page.page_index;
    out.hand_tag = page.hand_tag;
    int line_no = 0;
    for (const auto& line : page.lines) {
        ++line_no;
        out.line_samples.push_back(extract_all(page, line.bbox, params,
                                               SourceKind::Line,
                                               "l" + std::to_string(line_no)));
        std::vector<FeatureSamples> words;
        int word_no = 0;
        for (const auto& word : line.words) {
            ++word_no;
            words.push_back(extract_all(page, word, params, SourceKind::Word,
                                        "l" + std::to_string(line_no) + "w" +
                                            std::to_string(word_no)));
        }
        out.word_samples.push_back(std::move(words));
    }
    return out;
}

} // namespace

std::vector<ExtractedPage> extract_pages(const std::vector<PageRecord>& pages,
                                         const FeatureParams& params,
                                         int workers) {
    std::vector<ExtractedPage> extracted(pages.size());
    if (workers <= 1 || pages.size() <= 1) {
        for (std::size_t i = 0; i < pages.size(); ++i) {
            extracted[i] = extract_page(pages[i], params);
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= pages.size()) break;
                extracted[i] = extract_page(pages[i], params);
            }
        };
        std::vector<std::thread> threads;
        const int count = std::min<int>(workers, static_cast<int>(pages.size()));
        threads.reserve(count);
        for (int t = 0; t < count; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    return extracted;
}

AssembleResult assemble_rows(const std::vector<ExtractedPage>& pages,
                             std::uint64_t seed) {
    AssembleResult result;
    result.dataset.features = canonical_features();
    result.dataset.seed = seed;

    // row building consumes per-bbox RNG substreams keyed by
    // (page index, line ordinal, word ordinal)
    for (const ExtractedPage& ps : pages) {
        int page_rows = 0;
        auto append = [&](RowBuildOutcome&& outcome) {
            for (auto& row : outcome.rows) {
                row.prov.page = ps.page_index;
                row.prov.hand = ps.hand_tag;
                result.dataset.rows.push_back(std::move(row));
                ++page_rows;
            }
        };
        for (std::size_t li = 0; li < ps.line_samples.size(); ++li) {
            for (const auto& w : ps.line_samples[li].warnings) {
                result.warnings.push_back("page " + std::to_string(ps.page_index) +
                                          " " + ps.line_samples[li].bbox_id + ": " + w);
            }
            RngStream line_rng(derive_seed(seed, static_cast<std::uint64_t>(ps.page_index),
                                           li + 1, 0));
            auto line_outcome = build_line_rows(ps.line_samples[li], line_rng);
            if (line_outcome.rejected()) {
                result.warnings.push_back("page " + std::to_string(ps.page_index) +
                                          " " + ps.line_samples[li].bbox_id +
                                          " rejected: " + line_outcome.rejection);
            }
            append(std::move(line_outcome));
            for (std::size_t wi = 0; wi < ps.word_samples[li].size(); ++wi) {
                const auto& wsamples = ps.word_samples[li][wi];
                for (const auto& w : wsamples.warnings) {
                    result.warnings.push_back("page " + std::to_string(ps.page_index) +
                                              " " + wsamples.bbox_id + ": " + w);
                }
                RngStream word_rng(derive_seed(seed,
                                               static_cast<std::uint64_t>(ps.page_index),
                                               li + 1, wi + 1));
                auto word_outcome = build_word_row(wsamples, word_rng);
                if (word_outcome.rejected()) {
                    result.warnings.push_back("page " + std::to_string(ps.page_index) +
                                              " " + wsamples.bbox_id +
                                              " rejected: " + word_outcome.rejection);
                }
                append(std::move(word_outcome));
            }
        }
        result.rows_per_page.emplace_back(ps.page_index, page_rows);
    }

    if (result.dataset.rows.empty()) {
        throw std::runtime_error("assemble_rows: no rows produced");
    }
    return result;
}

AssembleResult assemble_dataset(const std::vector<PageRecord>& pages,
                                const FeatureParams& params, std::uint64_t seed,
                                int workers) {
    return assemble_rows(extract_pages(pages, params, workers), seed);
}

Dataset select_features(const Dataset& ds, const std::vector<FeatureId>& ids) {
    if (ids.empty()) throw std::invalid_argument("select_features: empty selection");
    Dataset out;
    out.features = ids;
    out.fingerprint = ds.fingerprint;
    out.seed = ds.seed;
    std::vector<int> block_of;
    for (const FeatureId id : ids) {
        const auto it = std::find(ds.features.begin(), ds.features.end(), id);
        if (it == ds.features.end()) {
            throw std::invalid_argument("select_features: dataset lacks feature " +
                                        std::string(feature_name(id)));
        }
        block_of.push_back(static_cast<int>(it - ds.features.begin()));
    }
    out.rows.reserve(ds.rows.size());
    for (const auto& row : ds.rows) {
        FeatureRow r;
        r.prov = row.prov;
        r.values.reserve(ids.size() * Dataset::kRowBlock);
        for (const int b : block_of) {
            const auto begin = row.values.begin() + b * Dataset::kRowBlock;
            r.values.insert(r.values.end(), begin, begin + Dataset::kRowBlock);
        }
        out.rows.push_back(std::move(r));
    }
    return out;
}

std::string dataset_to_csv(const Dataset& ds) {
    std::ostringstream out;
    bool first = true;
    for (const FeatureId id : ds.features) {
        for (int j = 0; j < Dataset::kRowBlock; ++j) {
            if (!first) out << ',';
            out << 'f' << feature_name(id) << '_' << j;
            first = false;
        }
    }
    out << ",page,bbox,kind,hand,row_index\n";
    for (const auto& row : ds.rows) {
        for (const double v : row.values) {
            out << format_double(v) << ',';
        }
        out << row.prov.page << ',' << row.prov.bbox_id << ','
            << (row.prov.kind == SourceKind::Line ? "line" : "word") << ','
            << row.prov.hand << ',' << row.prov.row_index << '\n';
    }
    return out.str();
}

void write_dataset_csv(const Dataset& ds, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_dataset_csv: cannot open " + path);
    f << dataset_to_csv(ds);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(pos));
            break;
        }
        cells.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return cells;
}

} // namespace

Dataset parse_dataset_csv(const std::string& text) {
    std::istringstream f(text);
    std::string header;
    if (!std::getline(f, header)) {
        throw std::runtime_error("parse_dataset_csv: empty input");
    }
    if (!header.empty() && header.back() == '\r') header.pop_back();
    const auto cols = split_csv_line(header);
    if (cols.size() < 6 || cols.size() < Dataset::kRowBlock + 5) {
        throw std::runtime_error("parse_dataset_csv: malformed header");
    }
    const std::size_t feature_cols = cols.size() - 5;
    if (feature_cols % Dataset::kRowBlock != 0) {
        throw std::runtime_error("read_dataset_csv: feature columns not in blocks of 10");
    }

    Dataset ds;
    ds.fingerprint = fnv1a64_hex(text);
    for (std::size_t b = 0; b < feature_cols; b += Dataset::kRowBlock) {
        const std::string& name = cols[b];
        if (name.size() < 3 || name.front() != 'f' ||
            name.substr(name.size() - 2) != "_0") {
            throw std::runtime_error("parse_dataset_csv: unexpected column " + name);
        }
        const auto id = feature_from_name(name.substr(1, name.size() - 3));
        if (!id) throw std::runtime_error("parse_dataset_csv: unknown feature column " + name);
        ds.features.push_back(*id);
    }

    std::string line;
    int line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != cols.size()) {
            throw std::runtime_error("parse_dataset_csv: row " + std::to_string(line_no) +
                                     " has " + std::to_string(cells.size()) + " cells");
        }
        FeatureRow row;
        row.values.resize(feature_cols);
        for (std::size_t i = 0; i < feature_cols; ++i) {
            const auto& cell = cells[i];
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(),
                                             row.values[i]);
            if (res.ec != std::errc()) {
                throw std::runtime_error("parse_dataset_csv: bad number '" + cell +
                                         "' at row " + std::to_string(line_no));
            }
        }
        row.prov.page = std::stoi(cells[feature_cols]);
        row.prov.bbox_id = cells[feature_cols + 1];
        row.prov.kind = cells[feature_cols + 2] == "word" ? SourceKind::Word
                                                          : SourceKind::Line;
        row.prov.hand = cells[feature_cols + 3];
        row.prov.row_index = std::stoi(cells[feature_cols + 4]);
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

Dataset read_dataset_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("read_dataset_csv: cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_dataset_csv(buf.str());
}

} // namespace handclust
