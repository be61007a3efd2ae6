#pragma once

#include "nlror/harness/experiment.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace nlror {

inline constexpr int kReportFormatVersion = 1;

/// Versioned report document; manifest (possibly null) is echoed verbatim.
nlohmann::json report_to_json(const ExperimentResult& result, const nlohmann::json& manifest = nullptr);

/// Inverse of report_to_json for the fields re-aggregation needs (config, dataset metadata, trials).
ExperimentResult report_from_json(const nlohmann::json& doc);

/// One row per trial x model x subset x metric; absent scores are written as "null".
void write_long_csv(const ExperimentResult& result, std::ostream& out);

enum class ReportFormat { Json, Csv, Both };
ReportFormat parse_report_format(std::string_view name);

/// Writes <out>/report.json and/or <out>/scores.csv; returns the files written.
std::vector<std::filesystem::path> emit_report(const ExperimentResult& result, const nlohmann::json& manifest,
                                               const std::filesystem::path& out_dir, ReportFormat format);

/// One aggregate cell across datasets: mean and median of the per-dataset medians.
struct Waistline {
    Activation activation = Activation::Sigmoid;
    double gate_percentile = 99.0;
    std::string quantity;
    Subset subset = Subset::All;
    Metric metric = Metric::MAEn;
    std::size_t dataset_count = 0;
    std::optional<double> mean_of_medians;
    std::optional<double> median_of_medians;
};

struct SummaryReport {
    std::vector<ExperimentResult> datasets;  // aggregates recomputed from trials
    std::vector<Waistline> waistlines;
};

SummaryReport summarize_reports(std::vector<ExperimentResult> results);
nlohmann::json summary_to_json(const SummaryReport& summary);
void write_summary_csv(const SummaryReport& summary, std::ostream& out);

} // namespace nlror
