#include "nlror/preprocess.hpp"

#include "nlror/errors.hpp"

#include <algorithm>
#include <cmath>

namespace nlror {

MinMaxScaler fit_minmax(const Matrix& train_inputs) {
    if (train_inputs.rows() < 1 || train_inputs.cols() < 1) {
        throw InvalidArgument("fit_minmax: empty matrix");
    }
    require_finite(train_inputs, "fit_minmax");
    return MinMaxScaler{train_inputs.colwise().minCoeff().transpose(), train_inputs.colwise().maxCoeff().transpose()};
}

Matrix apply_minmax(const MinMaxScaler& scaler, const Matrix& inputs) {
    if (static_cast<std::size_t>(inputs.cols()) != scaler.dim()) {
        throw InvalidArgument("apply_minmax: input has " + std::to_string(inputs.cols()) + " columns, scaler expects " +
                              std::to_string(scaler.dim()));
    }
    Matrix out(inputs.rows(), inputs.cols());
    for (Eigen::Index j = 0; j < inputs.cols(); ++j) {
        const double lo = scaler.x_min(j);
        const double hi = scaler.x_max(j);
        if (lo == hi) {
            out.col(j).setZero();
            continue;
        }
        const double span = hi - lo;
        for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
            out(i, j) = 2.0 * (inputs(i, j) - lo) / span - 1.0;
        }
    }
    return out;
}

Matrix invert_minmax(const MinMaxScaler& scaler, const Matrix& scaled) {
    if (static_cast<std::size_t>(scaled.cols()) != scaler.dim()) {
        throw InvalidArgument("invert_minmax: dimension mismatch");
    }
    Matrix out(scaled.rows(), scaled.cols());
    for (Eigen::Index j = 0; j < scaled.cols(); ++j) {
        const double lo = scaler.x_min(j);
        const double hi = scaler.x_max(j);
        for (Eigen::Index i = 0; i < scaled.rows(); ++i) {
            out(i, j) = lo == hi ? lo : lo + 0.5 * (scaled(i, j) + 1.0) * (hi - lo);
        }
    }
    return out;
}

double r_outl(const Matrix& scaled_test_inputs, const std::vector<std::size_t>& columns) {
    if (scaled_test_inputs.rows() < 1 || scaled_test_inputs.cols() < 1) {
        throw InvalidArgument("r_outl: empty matrix");
    }
    double worst = 0.0;
    auto visit = [&](Eigen::Index j) {
        const double hi = scaled_test_inputs.col(j).maxCoeff();
        const double lo = scaled_test_inputs.col(j).minCoeff();
        worst = std::max({worst, std::abs(hi), std::abs(lo)});
    };
    if (columns.empty()) {
        for (Eigen::Index j = 0; j < scaled_test_inputs.cols(); ++j) {
            visit(j);
        }
    } else {
        for (std::size_t j : columns) {
            if (j >= static_cast<std::size_t>(scaled_test_inputs.cols())) {
                throw InvalidArgument("r_outl: column index out of range");
            }
            visit(static_cast<Eigen::Index>(j));
        }
    }
    return worst;
}

double r_outl_estimate(double a, double b, double c) {
    if (!(a < b)) {
        throw InvalidArgument("r_outl_estimate: training minimum must be below the maximum");
    }
    return 2.0 * (c - a) / (b - a) - 1.0;
}

double r_outl_estimate_approx(double b, double c) {
    if (!(b > 0.0)) {
        throw InvalidArgument("r_outl_estimate_approx: training maximum must be positive");
    }
    return 2.0 * c / b - 1.0;
}

std::string_view to_string(TargetTransform t) {
    switch (t) {
        case TargetTransform::None: return "none";
        case TargetTransform::NaturalLog: return "ln";
        case TargetTransform::Log10: return "log10";
        case TargetTransform::FourthRoot: return "fourth_root";
    }
    return "none";
}

TargetTransform parse_target_transform(std::string_view name) {
    if (name == "none") return TargetTransform::None;
    if (name == "ln" || name == "natural_log") return TargetTransform::NaturalLog;
    if (name == "log10") return TargetTransform::Log10;
    if (name == "fourth_root") return TargetTransform::FourthRoot;
    throw InvalidArgument("unknown target transform '" + std::string(name) + "'");
}

Vector transform_target(const Vector& values, TargetTransform transform) {
    Vector out(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const double v = values(i);
        switch (transform) {
            case TargetTransform::None:
                out(i) = v;
                break;
            case TargetTransform::NaturalLog:
            case TargetTransform::Log10:
                if (!(v > 0.0)) {
                    throw InvalidArgument("transform_target: value at index " + std::to_string(i) +
                                          " must be strictly positive for " + std::string(to_string(transform)));
                }
                out(i) = transform == TargetTransform::NaturalLog ? std::log(v) : std::log10(v);
                break;
            case TargetTransform::FourthRoot:
                if (!(v >= 0.0)) {
                    throw InvalidArgument("transform_target: value at index " + std::to_string(i) +
                                          " must be non-negative for fourth_root");
                }
                out(i) = std::sqrt(std::sqrt(v));
                break;
        }
    }
    return out;
}

Vector inverse_transform_target(const Vector& values, TargetTransform transform) {
    Vector out(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const double v = values(i);
        switch (transform) {
            case TargetTransform::None: out(i) = v; break;
            case TargetTransform::NaturalLog: out(i) = std::exp(v); break;
            case TargetTransform::Log10: out(i) = std::pow(10.0, v); break;
            case TargetTransform::FourthRoot: {
                const double sq = v * v;
                out(i) = sq * sq;
                break;
            }
        }
    }
    return out;
}

Matrix one_hot_encode(const std::vector<std::string>& labels, const std::vector<std::string>& category_labels) {
    if (category_labels.empty()) {
        throw InvalidArgument("one_hot_encode: no categories");
    }
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(labels.size()), static_cast<Eigen::Index>(category_labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto it = std::find(category_labels.begin(), category_labels.end(), labels[i]);
        if (it == category_labels.end()) {
            throw InvalidArgument("one_hot_encode: unknown category '" + labels[i] + "'");
        }
        out(static_cast<Eigen::Index>(i), it - category_labels.begin()) = 1.0;
    }
    return out;
}

Vector clip_nonnegative(const Vector& predictions) {
    return predictions.cwiseMax(0.0);
}

} // namespace nlror
