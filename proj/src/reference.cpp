#include "nlror/reference.hpp"

#include "elm_kernels.hpp"
#include "nlror/errors.hpp"
#include "nlror/parallel.hpp"

#include <cmath>
#include <limits>

namespace nlror::reference {

Matrix hidden_layer_output(const ElmModel& model, const Matrix& inputs) {
    if (static_cast<std::size_t>(inputs.cols()) != model.input_dim()) {
        throw InvalidArgument("reference::hidden_layer_output: dimension mismatch");
    }
    Matrix h(inputs.rows(), static_cast<Eigen::Index>(model.node_count()));
    for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
        for (std::size_t l = 0; l < model.node_count(); ++l) {
            h(i, static_cast<Eigen::Index>(l)) = detail::hidden_unit(model, l, inputs.row(i).data());
        }
    }
    return h;
}

Matrix member_predictions(const EnsembleModel& ensemble, const Matrix& inputs, std::size_t output) {
    Matrix out(inputs.rows(), static_cast<Eigen::Index>(ensemble.size()));
    for (std::size_t k = 0; k < ensemble.size(); ++k) {
        const ElmModel& model = ensemble.members[k];
        const Matrix h = reference::hidden_layer_output(model, inputs);
        for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
            out(i, static_cast<Eigen::Index>(k)) = detail::output_from_hidden(model, h.row(i).data(), output);
        }
    }
    return out;
}

Matrix ensemble_predict(const EnsembleModel& ensemble, const Matrix& inputs) {
    Matrix out(inputs.rows(), static_cast<Eigen::Index>(ensemble.output_dim()));
    for (std::size_t k = 0; k < ensemble.output_dim(); ++k) {
        const Matrix values = reference::member_predictions(ensemble, inputs, k);
        for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
            std::vector<double> row(values.row(i).data(), values.row(i).data() + values.cols());
            out(i, static_cast<Eigen::Index>(k)) = aggregate_member_values(row, ensemble.trim_policy);
        }
    }
    return out;
}

EnsembleModel ensemble_train(const Matrix& inputs, const Matrix& targets, std::size_t node_count,
                             Activation activation, std::size_t member_count, std::uint64_t seed,
                             const EnsembleOptions& options) {
    EnsembleModel ensemble;
    ensemble.trim_policy = options.trim_policy.value_or(default_trim_policy(activation, member_count));
    for (std::size_t k = 0; k < member_count; ++k) {
        ensemble.members.push_back(elm_train(inputs, targets, node_count, activation, derive_seed(seed, k), options.elm));
    }
    return ensemble;
}

Vector mahalanobis_distances(const Gate& gate, const Matrix& inputs) {
    Vector out(inputs.rows());
    for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
        out(i) = mahalanobis_distance(gate, inputs.row(i).transpose());
    }
    return out;
}

std::vector<Neighbor> nearest_training_neighbors(const Gate& gate, const Matrix& inputs) {
    std::vector<Neighbor> out;
    out.reserve(static_cast<std::size_t>(inputs.rows()));
    for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
        out.push_back(nearest_training_neighbor(gate, inputs.row(i).transpose()));
    }
    return out;
}

} // namespace nlror::reference
