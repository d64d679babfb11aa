// handclust command line: extract feature datasets from page images plus
// hOCR layouts, cluster them with fuzzy c-means, and run the dummy/real
// hand-shift protocols.

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "handclust/features.hpp"
#include "handclust/fuzzy.hpp"
#include "handclust/hocr.hpp"
#include "handclust/png_io.hpp"
#include "handclust/report.hpp"
#include "handclust/rows.hpp"
#include "handclust/shift.hpp"
#include "handclust/svg.hpp"
#include "handclust/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace handclust;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitWarnings = 2;

struct PageRange {
    int from = 0;
    int to = 0;
    std::string hand;
};

struct RunConfig {
    std::string images_dir;
    std::string hocr_dir;
    std::vector<PageRange> pages;
    double margin_crop_fraction = 0.05;
    FeatureParams params;
    ReducerId reducer = ReducerId::Pca;
    int components = 2;
    int centers = 2;
    ShiftProtocolConfig shift;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";
    std::vector<FeatureId> features; // empty = all ten
    std::vector<std::string> datasets;
    std::string left_dataset, right_dataset;
    int workers = 1;
};

void parse_config_json(const json& j, RunConfig& cfg) {
    cfg.images_dir = j.value("images_dir", cfg.images_dir);
    cfg.hocr_dir = j.value("hocr_dir", cfg.hocr_dir);
    cfg.margin_crop_fraction = j.value("margin_crop_fraction", cfg.margin_crop_fraction);
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.workers = j.value("workers", cfg.workers);
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("pages")) {
        for (const auto& p : j.at("pages")) {
            PageRange r;
            r.from = p.at("from").get<int>();
            r.to = p.at("to").get<int>();
            r.hand = p.value("hand", std::string());
            cfg.pages.push_back(r);
        }
    }
    if (j.contains("extraction")) {
        const auto& e = j.at("extraction");
        auto& p = cfg.params;
        p.prep.unsharp_radius = e.value("unsharp_radius", p.prep.unsharp_radius);
        p.prep.unsharp_amount = e.value("unsharp_amount", p.prep.unsharp_amount);
        p.prep.gray_ink_threshold = e.value("gray_ink_threshold", p.prep.gray_ink_threshold);
        p.corner.fast_threshold = e.value("fast_threshold", p.corner.fast_threshold);
        p.corner.moment_radius = e.value("corner_moment_radius", p.corner.moment_radius);
        p.blob.min_sigma = e.value("blob_min_sigma", p.blob.min_sigma);
        p.blob.max_sigma = e.value("blob_max_sigma", p.blob.max_sigma);
        p.blob.num_sigma = e.value("blob_num_sigma", p.blob.num_sigma);
        p.blob.threshold = e.value("blob_threshold", p.blob.threshold);
        p.blob.overlap = e.value("blob_overlap", p.blob.overlap);
        p.blob.dog_sigma_ratio = e.value("dog_sigma_ratio", p.blob.dog_sigma_ratio);
        p.height_width_cap = e.value("height_width_cap", p.height_width_cap);
    }
    if (j.contains("reducer")) {
        const auto name = j.at("reducer").get<std::string>();
        const auto id = reducer_from_name(name);
        if (!id) throw std::runtime_error("config: unknown reducer '" + name + "'");
        cfg.reducer = *id;
    }
    cfg.components = j.value("components", cfg.components);
    cfg.centers = j.value("centers", cfg.centers);
    if (j.contains("cluster")) {
        const auto& c = j.at("cluster");
        cfg.shift.cmeans.fuzzifier = c.value("fuzzifier", cfg.shift.cmeans.fuzzifier);
        cfg.shift.cmeans.tol = c.value("tol", cfg.shift.cmeans.tol);
        cfg.shift.cmeans.max_iter = c.value("max_iter", cfg.shift.cmeans.max_iter);
    }
    if (j.contains("shift")) {
        const auto& s = j.at("shift");
        cfg.shift.page_size_rows = s.value("page_size_rows", cfg.shift.page_size_rows);
        cfg.shift.pages_per_side = s.value("pages_per_side", cfg.shift.pages_per_side);
        cfg.shift.tolerance_pct = s.value("tolerance_pct", cfg.shift.tolerance_pct);
        cfg.shift.batch_size = s.value("batch_size", cfg.shift.batch_size);
        cfg.shift.batches = s.value("batches", cfg.shift.batches);
        cfg.shift.centers_min = s.value("centers_min", cfg.shift.centers_min);
        cfg.shift.centers_max = s.value("centers_max", cfg.shift.centers_max);
    }
    if (j.contains("features")) {
        for (const auto& f : j.at("features")) {
            const auto id = feature_from_name(f.get<std::string>());
            if (!id) {
                throw std::runtime_error("config: unknown feature '" +
                                         f.get<std::string>() + "'");
            }
            cfg.features.push_back(*id);
        }
    }
    if (j.contains("datasets")) {
        for (const auto& d : j.at("datasets")) cfg.datasets.push_back(d.get<std::string>());
    }
    cfg.left_dataset = j.value("left", cfg.left_dataset);
    cfg.right_dataset = j.value("right", cfg.right_dataset);
}

RunConfig load_config(const std::string& path) {
    RunConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file " + path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("config " + path + " is not valid JSON: " + e.what());
    }
    parse_config_json(j, cfg);
    return cfg;
}

std::vector<FeatureId> parse_feature_list(const std::string& csv) {
    std::vector<FeatureId> ids;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto id = feature_from_name(item);
        if (!id) throw std::runtime_error("unknown feature '" + item + "'");
        ids.push_back(*id);
    }
    if (ids.empty()) throw std::runtime_error("--features list is empty");
    return ids;
}

// numeric-aware comparison so page-2 sorts before page-10
bool natural_less(const std::string& a, const std::string& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const bool da = std::isdigit(static_cast<unsigned char>(a[i]));
        const bool db = std::isdigit(static_cast<unsigned char>(b[j]));
        if (da && db) {
            std::size_t ei = i, ej = j;
            while (ei < a.size() && std::isdigit(static_cast<unsigned char>(a[ei]))) ++ei;
            while (ej < b.size() && std::isdigit(static_cast<unsigned char>(b[ej]))) ++ej;
            const long long na = std::stoll(a.substr(i, ei - i));
            const long long nb = std::stoll(b.substr(j, ej - j));
            if (na != nb) return na < nb;
            i = ei;
            j = ej;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    return a.size() < b.size();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << content;
}

std::string hand_for_page(const RunConfig& cfg, int page_index) {
    for (const auto& r : cfg.pages) {
        if (page_index >= r.from && page_index <= r.to) return r.hand;
    }
    return {};
}

bool page_selected(const RunConfig& cfg, int page_index) {
    if (cfg.pages.empty()) return true;
    for (const auto& r : cfg.pages) {
        if (page_index >= r.from && page_index <= r.to) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------

int cmd_extract(const RunConfig& cfg) {
    if (!cfg.seed) throw std::runtime_error("seed is mandatory (config or --seed)");
    if (cfg.images_dir.empty() || cfg.hocr_dir.empty()) {
        throw std::runtime_error("extract needs images_dir and hocr_dir in the config");
    }

    std::map<std::string, fs::path, decltype(&natural_less)> images(natural_less);
    std::map<std::string, fs::path, decltype(&natural_less)> hocrs(natural_less);
    for (const auto& entry : fs::directory_iterator(cfg.images_dir)) {
        if (entry.path().extension() == ".png") {
            images[entry.path().stem().string()] = entry.path();
        }
    }
    for (const auto& entry : fs::directory_iterator(cfg.hocr_dir)) {
        const auto ext = entry.path().extension();
        if (ext == ".hocr" || ext == ".html" || ext == ".xml") {
            hocrs[entry.path().stem().string()] = entry.path();
        }
    }

    std::vector<std::string> warnings;
    std::vector<PageRecord> pages;
    int page_index = 0;
    for (const auto& [stem, image_path] : images) {
        ++page_index;
        if (!page_selected(cfg, page_index)) continue;
        const auto hit = hocrs.find(stem);
        if (hit == hocrs.end()) {
            warnings.push_back("page " + std::to_string(page_index) + " (" + stem +
                               "): no matching hOCR file, skipped");
            continue;
        }
        PageRecord page;
        page.page_index = page_index;
        page.hand_tag = hand_for_page(cfg, page_index);
        try {
            page.image = read_png(image_path.string());
            std::ifstream hf(hit->second);
            std::ostringstream buf;
            buf << hf.rdbuf();
            auto parsed = parse_hocr(buf.str());
            for (const auto& e : parsed.errors) {
                warnings.push_back("page " + std::to_string(page_index) + ": " + e);
            }
            page.lines = std::move(parsed.lines);
            for (auto& line : page.lines) line.page_index = page_index;
            apply_margin_crop(page, cfg.margin_crop_fraction);
        } catch (const std::exception& e) {
            warnings.push_back("page " + std::to_string(page_index) + " (" + stem +
                               "): " + e.what() + ", skipped");
            continue;
        }
        pages.push_back(std::move(page));
    }
    if (pages.empty()) throw std::runtime_error("no usable page/hOCR pairs found");

    auto result = assemble_dataset(pages, cfg.params, *cfg.seed, cfg.workers);
    warnings.insert(warnings.end(), result.warnings.begin(), result.warnings.end());
    result.dataset.fingerprint =
        config_fingerprint(cfg.params, cfg.margin_crop_fraction, *cfg.seed);

    Dataset out_ds = cfg.features.empty()
                         ? std::move(result.dataset)
                         : select_features(result.dataset, cfg.features);

    fs::create_directories(cfg.out_dir);
    write_dataset_csv(out_ds, (fs::path(cfg.out_dir) / "dataset.csv").string());
    write_file(fs::path(cfg.out_dir) / "dataset.meta.json",
               dataset_meta_json(out_ds, cfg.params, cfg.margin_crop_fraction,
                                 result.rows_per_page, warnings));

    std::cout << "rows: " << out_ds.rows.size() << "\n";
    for (const auto& [page, count] : result.rows_per_page) {
        std::cout << "  page " << page << ": " << count << " rows\n";
    }
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "wrote " << (fs::path(cfg.out_dir) / "dataset.csv").string() << "\n";
    return warnings.empty() ? kExitOk : kExitWarnings;
}

// ---------------------------------------------------------------------------

Dataset load_datasets(const std::vector<std::string>& paths,
                      const std::vector<FeatureId>& selection) {
    if (paths.empty()) throw std::runtime_error("no dataset files given");
    Dataset combined;
    std::string joined_fp;
    for (const auto& path : paths) {
        Dataset ds = read_dataset_csv(path);
        if (!selection.empty()) ds = select_features(ds, selection);
        if (combined.rows.empty()) {
            combined = std::move(ds);
            joined_fp = combined.fingerprint;
        } else {
            if (ds.features != combined.features) {
                throw std::runtime_error("dataset " + path +
                                         " has a different feature layout");
            }
            joined_fp += "+" + ds.fingerprint;
            for (auto& row : ds.rows) combined.rows.push_back(std::move(row));
        }
    }
    combined.fingerprint = fnv1a64_hex(joined_fp);
    return combined;
}

std::vector<ScatterGroup> scatter_by_hand(const Matrix& scores,
                                          const std::vector<std::string>& tags) {
    std::vector<ScatterGroup> groups;
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        const std::string name = tags[i].empty() ? "untagged" : tags[i];
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const ScatterGroup& g) { return g.name == name; });
        if (it == groups.end()) {
            groups.push_back(ScatterGroup{name, {}});
            it = groups.end() - 1;
        }
        it->points.emplace_back(scores(i, 0), scores.cols() > 1 ? scores(i, 1) : 0.0);
    }
    return groups;
}

std::vector<ScatterGroup> index_by_hand(const Matrix& scores,
                                        const std::vector<std::string>& tags) {
    std::vector<ScatterGroup> groups;
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        const std::string name = tags[i].empty() ? "untagged" : tags[i];
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const ScatterGroup& g) { return g.name == name; });
        if (it == groups.end()) {
            groups.push_back(ScatterGroup{name, {}});
            it = groups.end() - 1;
        }
        it->points.emplace_back(static_cast<double>(i), scores(i, 0));
    }
    return groups;
}

int cmd_cluster(const RunConfig& cfg) {
    if (!cfg.seed) throw std::runtime_error("seed is mandatory (config or --seed)");
    Dataset ds = load_datasets(cfg.datasets, cfg.features);
    const Matrix X = dataset_matrix(ds);
    if (X.rows() < cfg.centers + 1) {
        throw std::runtime_error("dataset has " + std::to_string(X.rows()) +
                                 " rows, need at least " + std::to_string(cfg.centers + 1));
    }
    const auto [scaler, Z] = scaler_fit_transform(X);
    const auto reduced =
        reduce(Z, cfg.reducer, cfg.components, derive_seed(*cfg.seed, 0xE1));
    auto model = cmeans(reduced.scores, cfg.centers, cfg.shift.cmeans,
                        derive_seed(*cfg.seed, 0xE2));
    canonicalize(model);
    const auto labels = hard_assign(model.memberships);
    const auto tags = dataset_tags(ds);
    const auto report = hand_memberships(labels, tags, cfg.centers, model.fpc);

    const std::string run_fp =
        fnv1a64_hex(ds.fingerprint + "|" + std::string(reducer_name(cfg.reducer)) +
                    "|c" + std::to_string(cfg.centers) + "|s" + std::to_string(*cfg.seed));

    fs::create_directories(cfg.out_dir);
    write_file(fs::path(cfg.out_dir) / "model.json",
               fuzzy_model_json(model, report, cfg.reducer, cfg.centers, run_fp));
    write_file(fs::path(cfg.out_dir) / "memberships.csv", memberships_csv(model));

    std::vector<std::pair<double, double>> centers;
    for (Eigen::Index i = 0; i < model.centers.rows(); ++i) {
        centers.emplace_back(model.centers(i, 0),
                             model.centers.cols() > 1 ? model.centers(i, 1) : 0.0);
    }
    write_file(fs::path(cfg.out_dir) / "component_scatter.svg",
               scatter_plot_svg("fuzzy c-means on " +
                                    std::string(reducer_name(cfg.reducer)) + " components",
                                scatter_by_hand(reduced.scores, tags), centers));
    write_file(fs::path(cfg.out_dir) / "component_index.svg",
               scatter_plot_svg("component 1 by row index",
                                index_by_hand(reduced.scores, tags), {},
                                "row index", "component 1"));

    std::cout << "fpc: " << model.fpc << " ("
              << (fpc_acceptable(model.fpc, cfg.centers) ? "PASS" : "FAIL")
              << " vs threshold for " << cfg.centers << " centers)\n";
    for (const auto& h : report.hands) {
        std::cout << "  " << h.hand << " (" << h.rows << " rows):";
        for (std::size_t c = 0; c < h.cluster_pct.size(); ++c) {
            std::cout << " cluster" << c << "=" << h.cluster_pct[c] << "%";
        }
        std::cout << "\n";
    }
    std::cout << "wrote " << (fs::path(cfg.out_dir) / "model.json").string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_shift(const RunConfig& cfg) {
    if (!cfg.seed) throw std::runtime_error("seed is mandatory (config or --seed)");
    if (cfg.left_dataset.empty() || cfg.right_dataset.empty()) {
        throw std::runtime_error("shift needs --left and --right dataset files");
    }
    Dataset left = load_datasets({cfg.left_dataset}, cfg.features);
    Dataset right = load_datasets({cfg.right_dataset}, cfg.features);
    ShiftProtocolConfig shift_cfg = cfg.shift;
    shift_cfg.seed = *cfg.seed;
    shift_cfg.components = cfg.components;

    const auto report = shift_experiment(left, right, cfg.reducer, shift_cfg);
    const std::string run_fp = fnv1a64_hex(left.fingerprint + "|" + right.fingerprint +
                                           "|" + std::string(reducer_name(cfg.reducer)) +
                                           "|s" + std::to_string(*cfg.seed));

    fs::create_directories(cfg.out_dir);
    write_file(fs::path(cfg.out_dir) / "shift_report.json",
               shift_report_json(report, run_fp));
    write_file(fs::path(cfg.out_dir) / "verdicts.csv", verdicts_csv(report));

    // FPC vs centers bars
    std::vector<std::string> cats;
    BarSeries fpc_series{std::string(reducer_name(cfg.reducer)), {}, {}};
    for (const auto& s : report.fpc_stats) {
        cats.push_back(std::to_string(s.centers) + " centers");
        fpc_series.values.push_back(s.mean_fpc);
        fpc_series.errors.push_back(s.std_fpc);
    }
    write_file(fs::path(cfg.out_dir) / "fpc_vs_centers.svg",
               bar_chart_svg("FPC by center count (25 dummy shifts)", cats,
                             {fpc_series}, "FPC"));

    // percent-different per batch
    std::vector<std::string> bcats;
    BarSeries batch_series{"percent different", {}, {}};
    for (std::size_t b = 0; b < report.batch_pct.size(); ++b) {
        bcats.push_back("batch " + std::to_string(b + 1));
        batch_series.values.push_back(report.batch_pct[b]);
    }
    write_file(fs::path(cfg.out_dir) / "percent_different.svg",
               bar_chart_svg("sides differ by > " +
                                 std::to_string(static_cast<int>(cfg.shift.tolerance_pct)) +
                                 "% membership",
                             bcats, {batch_series}, "% of dummy shifts"));

    // representative first dummy shift, for the scatter plots
    {
        RngStream pick_rng(derive_seed(shift_cfg.seed, 0x50, 0));
        const auto sd = make_dummy_shift(left, right, shift_cfg, pick_rng);
        const Matrix X = dataset_matrix(sd.data);
        const auto [scaler, Z] = scaler_fit_transform(X);
        const auto reduced = reduce(Z, cfg.reducer, cfg.components,
                                    derive_seed(derive_seed(shift_cfg.seed, 0x51, 0), 0xA1));
        auto model = cmeans(reduced.scores, 2, shift_cfg.cmeans,
                            derive_seed(derive_seed(shift_cfg.seed, 0x51, 0), 0xB2));
        canonicalize(model);
        const auto tags = dataset_tags(sd.data);
        std::vector<std::pair<double, double>> centers;
        for (Eigen::Index i = 0; i < model.centers.rows(); ++i) {
            centers.emplace_back(model.centers(i, 0), model.centers(i, 1));
        }
        write_file(fs::path(cfg.out_dir) / "component_scatter.svg",
                   scatter_plot_svg("dummy shift 1: clustered components",
                                    scatter_by_hand(reduced.scores, tags), centers));
        write_file(fs::path(cfg.out_dir) / "component_index.svg",
                   scatter_plot_svg("dummy shift 1: component 1 by row index",
                                    index_by_hand(reduced.scores, tags), {},
                                    "row index", "component 1"));
    }

    std::cout << "mean percent different: " << report.mean_pct_different << " (std "
              << report.std_pct_different << ")\n";
    for (const auto& s : report.fpc_stats) {
        std::cout << "  " << s.centers << " centers: mean FPC " << s.mean_fpc
                  << " (std " << s.std_fpc << ")\n";
    }
    std::cout << "wrote " << (fs::path(cfg.out_dir) / "shift_report.json").string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_scan(const RunConfig& cfg) {
    if (!cfg.seed) throw std::runtime_error("seed is mandatory (config or --seed)");
    Dataset ds = load_datasets(cfg.datasets, cfg.features);
    ShiftProtocolConfig shift_cfg = cfg.shift;
    shift_cfg.seed = *cfg.seed;
    shift_cfg.components = cfg.components;

    const auto trace = scan_document(ds, cfg.reducer, shift_cfg);
    const std::string run_fp =
        fnv1a64_hex(ds.fingerprint + "|scan|" + std::string(reducer_name(cfg.reducer)) +
                    "|s" + std::to_string(*cfg.seed));

    fs::create_directories(cfg.out_dir);
    write_file(fs::path(cfg.out_dir) / "scan_trace.json",
               scan_trace_json(trace, cfg.reducer, *cfg.seed, run_fp));
    write_file(fs::path(cfg.out_dir) / "scan_trace.csv", scan_trace_csv(trace));

    ScatterGroup flagged{"flagged", {}}, clear{"not flagged", {}};
    for (const auto& p : trace) {
        (p.flagged ? flagged : clear)
            .points.emplace_back(static_cast<double>(p.boundary_row), p.delta);
    }
    write_file(fs::path(cfg.out_dir) / "scan_delta.svg",
               scatter_plot_svg("membership delta by boundary row",
                                {clear, flagged}, {}, "boundary row",
                                "delta (%)"));

    int flags = 0;
    for (const auto& p : trace) flags += p.flagged ? 1 : 0;
    std::cout << "boundaries: " << trace.size() << ", flagged: " << flags << "\n";
    for (const auto& p : trace) {
        if (p.flagged) {
            std::cout << "  possible hand shift at row " << p.boundary_row
                      << " (delta " << p.delta << "%)\n";
        }
    }
    std::cout << "wrote " << (fs::path(cfg.out_dir) / "scan_trace.json").string() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"handwriting style clustering and hand-shift detection"};
    app.require_subcommand(1);

    std::string config_path, out_dir, reducer_name_opt, features_opt;
    std::uint64_t seed_opt = 0;
    bool seed_given = false;
    int centers_opt = 0, workers_opt = 0, components_opt = 0;
    std::vector<std::string> data_opt;
    std::string left_opt, right_opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON configuration file");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", seed_opt, "master RNG seed")
            ->each([&](const std::string&) { seed_given = true; });
        cmd->add_option("--reducer", reducer_name_opt,
                        "pca | ica | kpca-cosine | kpca-rbf");
        cmd->add_option("--features", features_opt,
                        "comma-separated feature subset, in order");
    };

    auto* extract = app.add_subcommand("extract", "build a feature dataset from pages");
    add_common(extract);
    extract->add_option("--workers", workers_opt, "parallel page workers");

    auto* cluster = app.add_subcommand("cluster", "fuzzy c-means on a dataset");
    add_common(cluster);
    cluster->add_option("--data", data_opt, "dataset CSV (repeatable)");
    cluster->add_option("--centers", centers_opt, "cluster count");
    cluster->add_option("--components", components_opt, "reduced dimensionality");

    auto* shift = app.add_subcommand("shift", "dummy hand-shift experiment");
    add_common(shift);
    shift->add_option("--left", left_opt, "left-side dataset CSV");
    shift->add_option("--right", right_opt, "right-side dataset CSV");

    auto* scan = app.add_subcommand("scan", "scan a document dataset for hand shifts");
    add_common(scan);
    scan->add_option("--data", data_opt, "dataset CSV (repeatable)");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed_given) cfg.seed = seed_opt;
        if (!reducer_name_opt.empty()) {
            const auto id = reducer_from_name(reducer_name_opt);
            if (!id) throw std::runtime_error("unknown reducer '" + reducer_name_opt + "'");
            cfg.reducer = *id;
        }
        if (!features_opt.empty()) cfg.features = parse_feature_list(features_opt);
        if (centers_opt > 0) cfg.centers = centers_opt;
        if (components_opt > 0) cfg.components = components_opt;
        if (workers_opt > 0) cfg.workers = workers_opt;
        if (!data_opt.empty()) cfg.datasets = data_opt;
        if (!left_opt.empty()) cfg.left_dataset = left_opt;
        if (!right_opt.empty()) cfg.right_dataset = right_opt;

        if (extract->parsed()) return cmd_extract(cfg);
        if (cluster->parsed()) return cmd_cluster(cfg);
        if (shift->parsed()) return cmd_shift(cfg);
        if (scan->parsed()) return cmd_scan(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
