#pragma once

#include "nlror/numkernel.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace nlror {

/// Per-column training range; maps training values onto [-1, 1].
struct MinMaxScaler {
    Vector x_min;
    Vector x_max;

    std::size_t dim() const { return static_cast<std::size_t>(x_min.size()); }
    bool is_constant(std::size_t column) const { return x_min(static_cast<Eigen::Index>(column)) == x_max(static_cast<Eigen::Index>(column)); }
};

MinMaxScaler fit_minmax(const Matrix& train_inputs);

/// x' = 2 (x - min) / (max - min) - 1, without clamping. Constant columns map to 0.
Matrix apply_minmax(const MinMaxScaler& scaler, const Matrix& inputs);

/// Algebraic inverse of apply_minmax; constant columns come back as their training value.
Matrix invert_minmax(const MinMaxScaler& scaler, const Matrix& scaled);

/// Largest |x'| over the given columns of normalized test inputs (all columns when empty).
double r_outl(const Matrix& scaled_test_inputs, const std::vector<std::size_t>& columns = {});

/// (2c - a - b) / (b - a) for a training range [a, b] and worst test value c.
double r_outl_estimate(double a, double b, double c);

/// 2c/b - 1, the a << b approximation of r_outl_estimate.
double r_outl_estimate_approx(double b, double c);

enum class TargetTransform { None, NaturalLog, Log10, FourthRoot };

std::string_view to_string(TargetTransform t);
TargetTransform parse_target_transform(std::string_view name);

Vector transform_target(const Vector& values, TargetTransform transform);
Vector inverse_transform_target(const Vector& values, TargetTransform transform);

/// One categorical variable expanded into indicator columns.
struct OneHotGroup {
    std::string source_column;
    std::vector<std::size_t> column_indices;
    std::vector<std::string> category_labels;
};

Matrix one_hot_encode(const std::vector<std::string>& labels, const std::vector<std::string>& category_labels);

Vector clip_nonnegative(const Vector& predictions);

} // namespace nlror
