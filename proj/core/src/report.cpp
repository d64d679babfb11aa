#include "handclust/report.hpp"

#include <sstream>

#include <json.hpp>

#include "handclust/util.hpp"

namespace handclust {

namespace {

using nlohmann::json;

json params_json(const FeatureParams& p) {
    return json{
        {"unsharp_radius", p.prep.unsharp_radius},
        {"unsharp_amount", p.prep.unsharp_amount},
        {"gray_ink_threshold", p.prep.gray_ink_threshold},
        {"fast_threshold", p.corner.fast_threshold},
        {"corner_moment_radius", p.corner.moment_radius},
        {"blob_min_sigma", p.blob.min_sigma},
        {"blob_max_sigma", p.blob.max_sigma},
        {"blob_num_sigma", p.blob.num_sigma},
        {"blob_threshold", p.blob.threshold},
        {"blob_overlap", p.blob.overlap},
        {"dog_sigma_ratio", p.blob.dog_sigma_ratio},
        {"height_width_cap", p.height_width_cap},
    };
}

json verdict_json(const ShiftVerdict& v) {
    return json{
        {"fpc", v.fpc},
        {"left_pct0", v.left_pct0},
        {"right_pct0", v.right_pct0},
        {"delta", v.delta},
        {"different", v.different},
        {"reducer", std::string(reducer_name(v.reducer))},
        {"seed", v.seed},
    };
}

} // namespace

std::string extraction_config_json(const FeatureParams& params,
                                   double margin_fraction, std::uint64_t seed) {
    json j = params_json(params);
    j["margin_crop_fraction"] = margin_fraction;
    j["seed"] = seed;
    json features = json::array();
    for (int i = 0; i < kFeatureCount; ++i) {
        features.push_back(std::string(feature_name(static_cast<FeatureId>(i))));
    }
    j["feature_order"] = features;
    return j.dump();
}

std::string config_fingerprint(const FeatureParams& params, double margin_fraction,
                               std::uint64_t seed) {
    return fnv1a64_hex(extraction_config_json(params, margin_fraction, seed));
}

std::string dataset_meta_json(const Dataset& ds, const FeatureParams& params,
                              double margin_fraction,
                              const std::vector<std::pair<int, int>>& rows_per_page,
                              const std::vector<std::string>& warnings) {
    json j;
    j["config"] = json::parse(extraction_config_json(params, margin_fraction, ds.seed));
    j["fingerprint"] = ds.fingerprint;
    j["seed"] = ds.seed;
    j["rows"] = ds.rows.size();
    json per_page = json::array();
    double total = 0.0;
    for (const auto& [page, count] : rows_per_page) {
        per_page.push_back(json{{"page", page}, {"rows", count}});
        total += count;
    }
    j["rows_per_page"] = per_page;
    j["mean_rows_per_page"] =
        rows_per_page.empty() ? 0.0 : total / static_cast<double>(rows_per_page.size());
    j["warnings"] = warnings;
    json features = json::array();
    for (const FeatureId id : ds.features) {
        features.push_back(std::string(feature_name(id)));
    }
    j["features"] = features;
    return j.dump(2) + "\n";
}

std::string fuzzy_model_json(const FuzzyModel& model,
                             const HandMembershipReport& report, ReducerId reducer,
                             int centers, const std::string& fingerprint) {
    json j;
    j["centers"] = json::array();
    for (Eigen::Index i = 0; i < model.centers.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index c = 0; c < model.centers.cols(); ++c) {
            row.push_back(model.centers(i, c));
        }
        j["centers"].push_back(row);
    }
    j["fpc"] = model.fpc;
    if (centers == 2) {
        j["fpc_threshold"] = 0.7;
    } else if (centers == 3) {
        j["fpc_threshold"] = 0.6;
    } else {
        j["fpc_threshold"] = nullptr;
    }
    j["fpc_acceptable"] = fpc_acceptable(model.fpc, centers);
    j["fuzzifier"] = model.fuzzifier;
    j["iterations"] = model.iterations;
    j["n_centers"] = centers;
    j["reducer"] = std::string(reducer_name(reducer));
    j["seed"] = model.seed;
    j["degenerate"] = model.degenerate;
    j["fingerprint"] = fingerprint;
    json hands = json::array();
    for (const auto& h : report.hands) {
        hands.push_back(json{{"hand", h.hand},
                             {"rows", h.rows},
                             {"cluster_pct", h.cluster_pct}});
    }
    j["hand_memberships"] = hands;
    j["warnings"] = report.warnings;
    return j.dump(2) + "\n";
}

std::string memberships_csv(const FuzzyModel& model) {
    std::ostringstream out;
    for (Eigen::Index i = 0; i < model.memberships.rows(); ++i) {
        out << (i ? "," : "") << "cluster_" << i;
    }
    out << '\n';
    for (Eigen::Index j = 0; j < model.memberships.cols(); ++j) {
        for (Eigen::Index i = 0; i < model.memberships.rows(); ++i) {
            out << (i ? "," : "") << format_double(model.memberships(i, j));
        }
        out << '\n';
    }
    return out.str();
}

std::string shift_report_json(const ShiftExperimentReport& report,
                              const std::string& fingerprint) {
    json j;
    j["reducer"] = std::string(reducer_name(report.reducer));
    j["seed"] = report.seed;
    j["fingerprint"] = fingerprint;
    j["mean_pct_different"] = report.mean_pct_different;
    j["std_pct_different"] = report.std_pct_different;
    j["batch_pct"] = report.batch_pct;
    json verdicts = json::array();
    for (const auto& v : report.verdicts) verdicts.push_back(verdict_json(v));
    j["verdicts"] = verdicts;
    json sweep = json::array();
    for (const auto& s : report.fpc_stats) {
        sweep.push_back(json{{"centers", s.centers},
                             {"mean_fpc", s.mean_fpc},
                             {"std_fpc", s.std_fpc}});
    }
    j["fpc_vs_centers"] = sweep;
    return j.dump(2) + "\n";
}

std::string verdicts_csv(const ShiftExperimentReport& report) {
    std::ostringstream out;
    out << "iteration,fpc,left_pct0,right_pct0,delta,different\n";
    for (std::size_t i = 0; i < report.verdicts.size(); ++i) {
        const auto& v = report.verdicts[i];
        out << i + 1 << ',' << format_double(v.fpc) << ','
            << format_double(v.left_pct0) << ',' << format_double(v.right_pct0)
            << ',' << format_double(v.delta) << ',' << (v.different ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string scan_trace_json(const std::vector<ScanPoint>& trace, ReducerId reducer,
                            std::uint64_t seed, const std::string& fingerprint) {
    json j;
    j["reducer"] = std::string(reducer_name(reducer));
    j["seed"] = seed;
    j["fingerprint"] = fingerprint;
    json points = json::array();
    for (const auto& p : trace) {
        points.push_back(json{{"boundary_row", p.boundary_row},
                              {"flagged", p.flagged},
                              {"delta", p.delta},
                              {"fpc", p.fpc}});
    }
    j["trace"] = points;
    return j.dump(2) + "\n";
}

std::string scan_trace_csv(const std::vector<ScanPoint>& trace) {
    std::ostringstream out;
    out << "boundary_row,flagged,delta,fpc\n";
    for (const auto& p : trace) {
        out << p.boundary_row << ',' << (p.flagged ? 1 : 0) << ','
            << format_double(p.delta) << ',' << format_double(p.fpc) << '\n';
    }
    return out.str();
}

} // namespace handclust
