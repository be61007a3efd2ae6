#pragma once

#include "nlror/numkernel.hpp"
#include "nlror/outlier_gate.hpp"
#include "nlror/preprocess.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nlror {

/// Deterministic scalar response over a normalized input (the NLR surface).
using PredictFn = std::function<double(const Vector&)>;
using ScalarFn = std::function<double(double)>;

struct OrConfig {
    std::vector<double> delta1_values{0.25, 0.5};
    std::vector<double> delta2_values{0.5, 1.0};
    bool include_raw_nlr = true;
    std::vector<OneHotGroup> categorical_groups;

    void validate() const;
};

/// Line through the nearest neighbour and the star x_nn + delta1 (x_nn - x_o), evaluated at x_o.
double nn_linear_extrapolate(const PredictFn& f, const Vector& x_o, const Vector& x_nn, double delta1);

/// Line from the projection p of x_nn onto the x_o--centre axis towards the centre, evaluated at x_o.
/// Throws DegenerateGeometry when p coincides with the centre or falls outside the centre--x_o segment.
double center_linear_extrapolate(const PredictFn& f, const Vector& x_o, const Vector& x_nn, const Vector& center,
                                 double delta2);

/// Median of the training rows sharing x_o's category in every group; global centre when none match.
Vector categorical_center(const Gate& gate, const Vector& x_o, const std::vector<OneHotGroup>& groups);

struct OrCandidate {
    std::string source;   // "nearest_neighbor", "center" or "nlr"
    double delta = 0.0;   // zero for the raw NLR value
    std::optional<double> value;
    std::string drop_reason;
};

/// Everything nlror_predict looked at for one outlier.
struct OrDiagnostic {
    std::size_t neighbor_index = 0;
    Vector center;
    std::vector<OrCandidate> candidates;
    double prediction = 0.0;
};

OrDiagnostic nlror_explain(const PredictFn& f, const Gate& gate, const Vector& x_o, const OrConfig& config);

/// Median of the directional extrapolations (and optionally the raw NLR value).
double nlror_predict(const PredictFn& f, const Gate& gate, const Vector& x_o, const OrConfig& config);

inline constexpr double kDefaultBoundaryStep = 1e-2;

/// f inside [train_min, train_max]; outside, continues along the one-sided boundary slope.
double boundary_extrapolate_1d(const ScalarFn& f, double train_min, double train_max, double fd_step, double x);

} // namespace nlror
