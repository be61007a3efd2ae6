#pragma once

#include "nlror/numkernel.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace nlror {

enum class Activation { Sigmoid, RadialBasis, Softplus };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view name);

/// Hidden-node activation; softplus uses the overflow-free max(z,0) + log1p(exp(-|z|)) form.
double activation_value(Activation kind, double z);

/// Hidden-layer draw: w ~ U[weight_low, weight_high], b ~ U[bias_low, bias_high].
struct HiddenInit {
    double weight_low = -1.0;
    double weight_high = 1.0;
    double bias_low = 0.0;
    double bias_high = 1.0;
};

struct ElmOptions {
    HiddenInit init{};
    bool output_bias = false;
    double rel_tol = kDefaultPinvTolerance;
};

/// Randomised single-hidden-layer network. Operates on normalized inputs.
struct ElmModel {
    Matrix hidden_weights;  // L x d
    Vector hidden_biases;   // L
    Matrix output_weights;  // L x m
    Vector output_bias;     // m, all zero unless output_bias_included
    Activation activation = Activation::Sigmoid;
    bool output_bias_included = false;
    std::uint64_t seed = 0;

    std::size_t node_count() const { return static_cast<std::size_t>(hidden_weights.rows()); }
    std::size_t input_dim() const { return static_cast<std::size_t>(hidden_weights.cols()); }
    std::size_t output_dim() const { return static_cast<std::size_t>(output_weights.cols()); }
};

/// Draws the random hidden layer only; output weights are left empty.
ElmModel draw_hidden_layer(std::size_t input_dim, std::size_t node_count, Activation activation, std::uint64_t seed,
                           const HiddenInit& init = {});

/// N x L hidden-layer output matrix, one row per input row (OpenMP over rows).
Matrix hidden_layer_output(const ElmModel& model, const Matrix& inputs);

ElmModel elm_train(const Matrix& inputs, const Matrix& targets, std::size_t node_count, Activation activation,
                   std::uint64_t seed, const ElmOptions& options = {});

Matrix elm_predict(const ElmModel& model, const Matrix& inputs);

/// Single-point evaluation of one output component; same arithmetic as elm_predict.
double elm_predict_one(const ElmModel& model, std::span<const double> x, std::size_t output = 0);

enum class TrimPolicy { None, DropMinMax };

std::string_view to_string(TrimPolicy t);

struct EnsembleModel {
    std::vector<ElmModel> members;
    TrimPolicy trim_policy = TrimPolicy::None;

    std::size_t size() const { return members.size(); }
    std::size_t input_dim() const { return members.empty() ? 0 : members.front().input_dim(); }
    std::size_t output_dim() const { return members.empty() ? 0 : members.front().output_dim(); }
};

struct EnsembleOptions {
    ElmOptions elm{};
    /// Overrides the activation-based default (drop-min-max for radial basis).
    std::optional<TrimPolicy> trim_policy;
};

/// Radial basis with >= 3 members trims; everything else averages plainly.
TrimPolicy default_trim_policy(Activation activation, std::size_t member_count);

/// Members are trained in parallel with seeds derive_seed(seed, member index).
EnsembleModel ensemble_train(const Matrix& inputs, const Matrix& targets, std::size_t node_count,
                             Activation activation, std::size_t member_count, std::uint64_t seed,
                             const EnsembleOptions& options = {});

/// N x members matrix of one output component.
Matrix member_predictions(const EnsembleModel& ensemble, const Matrix& inputs, std::size_t output = 0);

/// Mean of member values, or the mean after removing one largest and one smallest value.
double aggregate_member_values(std::span<const double> values, TrimPolicy policy);

Matrix ensemble_predict(const EnsembleModel& ensemble, const Matrix& inputs);

/// Serial single-point ensemble value (component 0 by default).
double ensemble_predict_one(const EnsembleModel& ensemble, std::span<const double> x, std::size_t output = 0);

struct LinearModel {
    Vector coefficients;
    double intercept = 0.0;
};

LinearModel lr_fit(const Matrix& inputs, const Vector& targets);
Vector lr_predict(const LinearModel& model, const Matrix& inputs);

std::vector<std::size_t> default_node_grid();

struct CvConfig {
    std::size_t folds = 5;
    std::vector<std::size_t> candidate_node_counts = default_node_grid();
    std::uint64_t seed = 0;

    void validate() const;
};

struct CvCandidateScore {
    std::size_t node_count = 0;
    std::optional<double> mean_mse;  // empty when the candidate was skipped
};

struct CvResult {
    std::size_t selected_node_count = 0;
    std::vector<CvCandidateScore> scores;
};

/// Contiguous-block k-fold CV over the candidate node counts (one ELM per fold and candidate).
CvResult cross_validate_node_count(const Matrix& inputs, const Matrix& targets, Activation activation,
                                   const CvConfig& cv, const ElmOptions& options = {});

std::size_t select_node_count(const Matrix& inputs, const Matrix& targets, Activation activation, const CvConfig& cv,
                              const ElmOptions& options = {});

} // namespace nlror
