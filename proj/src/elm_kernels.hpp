#pragma once

// Scalar building blocks shared by the batch, single-point and reference paths,
// so all three produce bit-identical values for the same row.

#include "nlror/regress.hpp"

#include <cstddef>

namespace nlror::detail {

inline double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        acc += a[k] * b[k];
    }
    return acc;
}

inline double hidden_unit(const ElmModel& model, std::size_t unit, const double* x) {
    const double z = dot(model.hidden_weights.row(static_cast<Eigen::Index>(unit)).data(), x, model.input_dim()) +
                     model.hidden_biases(static_cast<Eigen::Index>(unit));
    return activation_value(model.activation, z);
}

inline double output_from_hidden(const ElmModel& model, const double* hidden, std::size_t output) {
    double acc = 0.0;
    const auto col = static_cast<Eigen::Index>(output);
    for (std::size_t l = 0; l < model.node_count(); ++l) {
        acc += model.output_weights(static_cast<Eigen::Index>(l), col) * hidden[l];
    }
    return acc + model.output_bias(col);
}

} // namespace nlror::detail
