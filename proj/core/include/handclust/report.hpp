#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "handclust/features.hpp"
#include "handclust/fuzzy.hpp"
#include "handclust/shift.hpp"

namespace handclust {

/// Canonical JSON dump of the extraction configuration; equal
/// configurations produce byte-identical strings.
std::string extraction_config_json(const FeatureParams& params,
                                   double margin_fraction, std::uint64_t seed);

/// fnv1a-64 hex of the canonical configuration dump. Embedded in every
/// output artifact so runs can be matched to their exact settings.
std::string config_fingerprint(const FeatureParams& params, double margin_fraction,
                               std::uint64_t seed);

std::string dataset_meta_json(const Dataset& ds, const FeatureParams& params,
                              double margin_fraction,
                              const std::vector<std::pair<int, int>>& rows_per_page,
                              const std::vector<std::string>& warnings);

std::string fuzzy_model_json(const FuzzyModel& model,
                             const HandMembershipReport& report, ReducerId reducer,
                             int centers, const std::string& fingerprint);

std::string memberships_csv(const FuzzyModel& model);

std::string shift_report_json(const ShiftExperimentReport& report,
                              const std::string& fingerprint);
std::string verdicts_csv(const ShiftExperimentReport& report);

std::string scan_trace_json(const std::vector<ScanPoint>& trace, ReducerId reducer,
                            std::uint64_t seed, const std::string& fingerprint);
std::string scan_trace_csv(const std::vector<ScanPoint>& trace);

} // namespace handclust
