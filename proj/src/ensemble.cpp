#include "nlror/regress.hpp"

#include "elm_kernels.hpp"
#include "nlror/errors.hpp"
#include "nlror/parallel.hpp"

#include <string>
#include <vector>

namespace nlror {

std::string_view to_string(TrimPolicy t) {
    return t == TrimPolicy::DropMinMax ? "drop_min_max" : "none";
}

TrimPolicy default_trim_policy(Activation activation, std::size_t member_count) {
    return activation == Activation::RadialBasis && member_count >= 3 ? TrimPolicy::DropMinMax : TrimPolicy::None;
}

EnsembleModel ensemble_train(const Matrix& inputs, const Matrix& targets, std::size_t node_count,
                             Activation activation, std::size_t member_count, std::uint64_t seed,
                             const EnsembleOptions& options) {
    if (member_count < 1) {
        throw InvalidArgument("ensemble_train: member_count must be at least 1");
    }
    EnsembleModel ensemble;
    ensemble.trim_policy = options.trim_policy.value_or(default_trim_policy(activation, member_count));
    if (ensemble.trim_policy == TrimPolicy::DropMinMax && member_count < 3) {
        throw InvalidArgument("ensemble_train: drop_min_max trimming needs at least 3 members");
    }
    ensemble.members.resize(member_count);

    ExceptionSlot error;
    const auto count = static_cast<long>(member_count);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
    for (long k = 0; k < count; ++k) {
        error.run([&] {
            const auto member_seed = derive_seed(seed, static_cast<std::uint64_t>(k));
            ensemble.members[static_cast<std::size_t>(k)] =
                elm_train(inputs, targets, node_count, activation, member_seed, options.elm);
        });
    }
    error.rethrow();
    return ensemble;
}

Matrix member_predictions(const EnsembleModel& ensemble, const Matrix& inputs, std::size_t output) {
    if (ensemble.members.empty()) {
        throw InvalidArgument("member_predictions: empty ensemble");
    }
    if (static_cast<std::size_t>(inputs.cols()) != ensemble.input_dim()) {
        throw InvalidArgument("member_predictions: input has " + std::to_string(inputs.cols()) +
                              " columns, ensemble expects " + std::to_string(ensemble.input_dim()));
    }
    if (output >= ensemble.output_dim()) {
        throw InvalidArgument("member_predictions: output index out of range");
    }
    const auto n = inputs.rows();
    const auto members = static_cast<long>(ensemble.size());
    Matrix out(n, members);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (long k = 0; k < members; ++k) {
        const ElmModel& model = ensemble.members[static_cast<std::size_t>(k)];
        std::vector<double> hidden(model.node_count());
        for (Eigen::Index i = 0; i < n; ++i) {
            const double* x = inputs.row(i).data();
            for (std::size_t l = 0; l < hidden.size(); ++l) {
                hidden[l] = detail::hidden_unit(model, l, x);
            }
            out(i, k) = detail::output_from_hidden(model, hidden.data(), output);
        }
    }
    return out;
}

double aggregate_member_values(std::span<const double> values, TrimPolicy policy) {
    if (values.empty()) {
        throw InvalidArgument("aggregate_member_values: no values");
    }
    if (policy == TrimPolicy::None) {
        double sum = 0.0;
        for (double v : values) {
            sum += v;
        }
        return sum / static_cast<double>(values.size());
    }
    if (values.size() < 3) {
        throw InvalidArgument("aggregate_member_values: drop_min_max needs at least 3 values");
    }
    std::size_t lo = 0;
    for (std::size_t k = 1; k < values.size(); ++k) {
        if (values[k] < values[lo]) {
            lo = k;
        }
    }
    std::size_t hi = lo == 0 ? 1 : 0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k != lo && values[k] > values[hi]) {
            hi = k;
        }
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k != lo && k != hi) {
            sum += values[k];
        }
    }
    return sum / static_cast<double>(values.size() - 2);
}

Matrix ensemble_predict(const EnsembleModel& ensemble, const Matrix& inputs) {
    const auto n = inputs.rows();
    const auto m = ensemble.output_dim();
    Matrix out(n, static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m; ++k) {
        const Matrix per_member = member_predictions(ensemble, inputs, k);
#pragma omp parallel for schedule(static) num_threads(thread_count())
        for (Eigen::Index i = 0; i < n; ++i) {
            out(i, static_cast<Eigen::Index>(k)) = aggregate_member_values(
                std::span<const double>(per_member.row(i).data(), static_cast<std::size_t>(per_member.cols())),
                ensemble.trim_policy);
        }
    }
    return out;
}

double ensemble_predict_one(const EnsembleModel& ensemble, std::span<const double> x, std::size_t output) {
    if (ensemble.members.empty()) {
        throw InvalidArgument("ensemble_predict_one: empty ensemble");
    }
    std::vector<double> values(ensemble.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        values[k] = elm_predict_one(ensemble.members[k], x, output);
    }
    return aggregate_member_values(values, ensemble.trim_policy);
}

} // namespace nlror
