#include "nlror/extrapolate.hpp"

#include "nlror/errors.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace nlror {

void OrConfig::validate() const {
    for (double d : delta1_values) {
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw InvalidArgument("OrConfig: delta1 values must be positive");
        }
    }
    for (double d : delta2_values) {
        if (!(d > 0.0 && d <= 1.0)) {
            throw InvalidArgument("OrConfig: delta2 values must lie in (0, 1]");
        }
    }
}

double nn_linear_extrapolate(const PredictFn& f, const Vector& x_o, const Vector& x_nn, double delta1) {
    if (x_o.size() != x_nn.size()) {
        throw InvalidArgument("nn_linear_extrapolate: dimension mismatch");
    }
    if (!(delta1 > 0.0)) {
        throw InvalidArgument("nn_linear_extrapolate: delta1 must be positive");
    }
    if (x_o == x_nn) {
        throw InvalidArgument("nn_linear_extrapolate: outlier coincides with its nearest neighbour");
    }
    const Vector star = x_nn + delta1 * (x_nn - x_o);
    const double at_nn = f(x_nn);
    return at_nn + (at_nn - f(star)) / delta1;
}

double center_linear_extrapolate(const PredictFn& f, const Vector& x_o, const Vector& x_nn, const Vector& center,
                                 double delta2) {
    if (x_o.size() != x_nn.size() || x_o.size() != center.size()) {
        throw InvalidArgument("center_linear_extrapolate: dimension mismatch");
    }
    if (!(delta2 > 0.0 && delta2 <= 1.0)) {
        throw InvalidArgument("center_linear_extrapolate: delta2 must lie in (0, 1]");
    }
    const Vector axis = x_o - center;
    const double length = axis.norm();
    if (length == 0.0) {
        throw InvalidArgument("center_linear_extrapolate: outlier coincides with the centre");
    }
    const Vector unit = axis / length;
    // signed position of the projection along centre -> x_o
    const double s = (x_nn - center).dot(unit);
    if (!(s > 0.0)) {
        throw DegenerateGeometry("center_linear_extrapolate: projection of the neighbour lies at or behind the centre");
    }
    if (s > length) {
        throw DegenerateGeometry("center_linear_extrapolate: projection of the neighbour lies beyond the outlier");
    }
    const Vector p = center + s * unit;
    const Vector star = p + delta2 * (center - p);
    const double at_p = f(p);
    return at_p + ((length - s) / (delta2 * s)) * (at_p - f(star));
}

Vector categorical_center(const Gate& gate, const Vector& x_o, const std::vector<OneHotGroup>& groups) {
    if (groups.empty()) {
        return gate.center;
    }
    const Matrix& train = gate.training_inputs;
    std::vector<Eigen::Index> rows;
    for (Eigen::Index r = 0; r < train.rows(); ++r) {
        bool match = true;
        for (const auto& g : groups) {
            for (std::size_t c : g.column_indices) {
                const auto j = static_cast<Eigen::Index>(c);
                if (train(r, j) != x_o(j)) {
                    match = false;
                    break;
                }
            }
            if (!match) {
                break;
            }
        }
        if (match) {
            rows.push_back(r);
        }
    }
    if (rows.empty()) {
        spdlog::warn("categorical_center: no training rows share the outlier's category, using the global centre");
        return gate.center;
    }
    Matrix subset(static_cast<Eigen::Index>(rows.size()), train.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        subset.row(static_cast<Eigen::Index>(i)) = train.row(rows[i]);
    }
    return columnwise_median(subset);
}

namespace {

// Indicator columns are never interpolated: copy x_o's block into v.
void pin_categories(Vector& v, const Vector& x_o, const std::vector<OneHotGroup>& groups) {
    for (const auto& g : groups) {
        for (std::size_t c : g.column_indices) {
            v(static_cast<Eigen::Index>(c)) = x_o(static_cast<Eigen::Index>(c));
        }
    }
}

double median_of(std::vector<double> values) {
    return median(values);
}

} // namespace

OrDiagnostic nlror_explain(const PredictFn& f, const Gate& gate, const Vector& x_o, const OrConfig& config) {
    config.validate();
    if (static_cast<std::size_t>(x_o.size()) != gate.dim()) {
        throw InvalidArgument("nlror_predict: input dimension does not match the gate");
    }
    for (const auto& g : config.categorical_groups) {
        for (std::size_t c : g.column_indices) {
            if (c >= gate.dim()) {
                throw InvalidArgument("nlror_predict: categorical column index out of range");
            }
        }
    }

    OrDiagnostic diag;
    const Neighbor nn = nearest_training_neighbor(gate, x_o);
    diag.neighbor_index = nn.index;
    Vector x_nn = gate.training_inputs.row(static_cast<Eigen::Index>(nn.index)).transpose();
    diag.center = categorical_center(gate, x_o, config.categorical_groups);
    pin_categories(x_nn, x_o, config.categorical_groups);
    pin_categories(diag.center, x_o, config.categorical_groups);

    std::vector<double> collected;
    for (double delta : config.delta1_values) {
        OrCandidate c{"nearest_neighbor", delta, std::nullopt, {}};
        if (x_nn == x_o) {
            c.drop_reason = "outlier coincides with its nearest neighbour";
        } else {
            c.value = nn_linear_extrapolate(f, x_o, x_nn, delta);
        }
        diag.candidates.push_back(std::move(c));
    }
    for (double delta : config.delta2_values) {
        OrCandidate c{"center", delta, std::nullopt, {}};
        if (x_o == diag.center) {
            c.drop_reason = "outlier coincides with the centre";
        } else {
            try {
                c.value = center_linear_extrapolate(f, x_o, x_nn, diag.center, delta);
            } catch (const DegenerateGeometry& e) {
                c.drop_reason = e.what();
            }
        }
        diag.candidates.push_back(std::move(c));
    }
    for (auto& c : diag.candidates) {
        if (c.value && !std::isfinite(*c.value)) {
            c.drop_reason = "non-finite extrapolation";
            c.value.reset();
        }
        if (c.value) {
            collected.push_back(*c.value);
        }
    }
    if (collected.empty()) {
        spdlog::debug("nlror: every directional extrapolation dropped for this outlier");
    }
    if (config.include_raw_nlr) {
        const double raw = f(x_o);
        diag.candidates.push_back({"nlr", 0.0, raw, {}});
        collected.push_back(raw);
    }
    if (collected.empty()) {
        throw NoPrediction("nlror_predict: every directional extrapolation is degenerate and the NLR value is excluded");
    }
    diag.prediction = median_of(std::move(collected));
    return diag;
}

double nlror_predict(const PredictFn& f, const Gate& gate, const Vector& x_o, const OrConfig& config) {
    return nlror_explain(f, gate, x_o, config).prediction;
}

double boundary_extrapolate_1d(const ScalarFn& f, double train_min, double train_max, double fd_step, double x) {
    if (!(fd_step > 0.0)) {
        throw InvalidArgument("boundary_extrapolate_1d: fd_step must be positive");
    }
    if (!(train_min <= train_max)) {
        throw InvalidArgument("boundary_extrapolate_1d: empty training range");
    }
    if (x > train_max) {
        const double edge = f(train_max);
        const double slope = (edge - f(train_max - fd_step)) / fd_step;
        return edge + (x - train_max) * slope;
    }
    if (x < train_min) {
        const double edge = f(train_min);
        const double slope = (f(train_min + fd_step) - edge) / fd_step;
        return edge + (x - train_min) * slope;
    }
    return f(x);
}

} // namespace nlror
