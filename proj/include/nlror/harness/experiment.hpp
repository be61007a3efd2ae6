#pragma once

#include "nlror/extrapolate.hpp"
#include "nlror/harness/dataset.hpp"
#include "nlror/harness/metrics.hpp"
#include "nlror/outlier_gate.hpp"
#include "nlror/regress.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nlror {

enum class Model { LR = 0, NLR = 1, NLR_OR = 2 };
enum class Subset { Outliers = 0, NonOutliers = 1, All = 2 };
enum class Metric { MAEn = 0, Spearman = 1 };

inline constexpr std::size_t kModelCount = 3;
inline constexpr std::size_t kSubsetCount = 3;
inline constexpr std::size_t kMetricCount = 2;

std::string_view to_string(Model m);
std::string_view to_string(Subset s);
std::string_view to_string(Metric m);

/// Which observations normalize MAEn.
enum class MadReference { FullTest, Subset };

std::string_view to_string(MadReference r);

struct ExperimentConfig {
    std::vector<Activation> activations{Activation::Sigmoid, Activation::RadialBasis, Activation::Softplus};
    std::size_t trials = 200;
    std::size_t members_per_trial = 100;
    std::vector<double> gate_percentiles{99.0, 95.0};
    CvConfig cv{};
    OrConfig or_config{};  // categorical groups are taken from the dataset
    std::uint64_t master_seed = 0;
    MadReference mad_reference = MadReference::FullTest;
    std::size_t min_subset_size = 5;
    bool record_predictions = false;
    bool record_diagnostics = false;

    void validate() const;
};

/// Strict parse; every key is optional and unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

using ScoreCell = std::optional<double>;
using ScoreTable = std::array<std::array<std::array<ScoreCell, kMetricCount>, kSubsetCount>, kModelCount>;

inline ScoreCell& cell(ScoreTable& t, Model m, Subset s, Metric k) {
    return t[static_cast<std::size_t>(m)][static_cast<std::size_t>(s)][static_cast<std::size_t>(k)];
}
inline const ScoreCell& cell(const ScoreTable& t, Model m, Subset s, Metric k) {
    return t[static_cast<std::size_t>(m)][static_cast<std::size_t>(s)][static_cast<std::size_t>(k)];
}

struct TrialReport {
    Activation activation = Activation::Sigmoid;
    double gate_percentile = 99.0;
    std::size_t trial = 0;
    std::uint64_t trial_seed = 0;
    std::size_t node_count = 0;
    std::size_t outlier_count = 0;
    std::size_t non_outlier_count = 0;
    std::size_t test_count = 0;
    ScoreTable scores{};
    // test rows in dataset order, regression (transformed) space; filled when record_predictions is set
    std::vector<double> nlr_predictions;
    std::vector<double> nlror_predictions;
};

/// Per-outlier extrapolation record for one trial.
struct OutlierDiagnostic {
    std::size_t test_row = 0;
    OrDiagnostic detail;
};

struct GateSummary {
    double percentile = 99.0;
    double threshold_distance = 0.0;
    double ridge = 0.0;
    std::vector<std::size_t> outlier_rows;  // positions within the test set
};

struct ActivationSummary {
    Activation activation = Activation::Sigmoid;
    std::size_t node_count = 0;
    CvResult cv;
    TrimPolicy trim_policy = TrimPolicy::None;
};

/// Boxplot over trials of one score, or of a paired difference between two models.
struct AggregateCell {
    Activation activation = Activation::Sigmoid;
    double gate_percentile = 99.0;
    std::string quantity;  // "LR", "NLR", "NLR_OR", "NLR-LR", "NLR_OR-NLR", "NLR_OR-LR"
    Subset subset = Subset::All;
    Metric metric = Metric::MAEn;
    std::size_t present_trials = 0;
    std::optional<double> mean;
    std::optional<BoxplotSummary> box;
};

struct ExperimentResult {
    std::string dataset_name;
    ExperimentConfig config;
    std::size_t train_count = 0;
    std::size_t test_count = 0;
    std::size_t dropped_rows = 0;
    double r_outl = 0.0;
    TargetTransform target_transform = TargetTransform::None;
    std::vector<ActivationSummary> activations;
    std::vector<GateSummary> gates;
    std::vector<TrialReport> trials;  // ordered by activation, trial, percentile
    std::vector<AggregateCell> aggregates;
    std::vector<double> test_observations;  // transformed space
    std::vector<std::vector<OutlierDiagnostic>> diagnostics;  // parallel to trials when record_diagnostics is set
};

/// Seed of trial t for one activation.
std::uint64_t trial_seed(std::uint64_t master_seed, Activation activation, std::size_t trial);

/// Scores one model's predictions on the three subsets; subsets below min_size are absent.
void score_model(ScoreTable& table, Model model, const Vector& predictions, const Vector& observations,
                 const std::vector<std::size_t>& outlier_rows, const std::vector<std::size_t>& non_outlier_rows,
                 MadReference mad_reference, std::size_t min_size);

std::vector<AggregateCell> aggregate_trials(const std::vector<TrialReport>& trials,
                                            const std::vector<Activation>& activations,
                                            const std::vector<double>& percentiles);

ExperimentResult run_experiment(const Dataset& dataset, const ExperimentConfig& config);

} // namespace nlror
