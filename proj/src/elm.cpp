#include "nlror/regress.hpp"

#include "elm_kernels.hpp"
#include "nlror/errors.hpp"
#include "nlror/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace nlror {

std::string_view to_string(Activation a) {
    switch (a) {
        case Activation::Sigmoid: return "sigmoid";
        case Activation::RadialBasis: return "radial_basis";
        case Activation::Softplus: return "softplus";
    }
    return "sigmoid";
}

Activation parse_activation(std::string_view name) {
    if (name == "sigmoid" || name == "sigm") return Activation::Sigmoid;
    if (name == "radial_basis" || name == "radb" || name == "rbf") return Activation::RadialBasis;
    if (name == "softplus" || name == "softp") return Activation::Softplus;
    throw InvalidArgument("unknown activation '" + std::string(name) + "'");
}

double activation_value(Activation kind, double z) {
    switch (kind) {
        case Activation::Sigmoid:
            if (z >= 0.0) {
                return 1.0 / (1.0 + std::exp(-z));
            } else {
                const double e = std::exp(z);
                return e / (1.0 + e);
            }
        case Activation::RadialBasis:
            return std::exp(-z * z);
        case Activation::Softplus:
            return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
    }
    return 0.0;
}

ElmModel draw_hidden_layer(std::size_t input_dim, std::size_t node_count, Activation activation, std::uint64_t seed,
                           const HiddenInit& init) {
    if (input_dim < 1 || node_count < 1) {
        throw InvalidArgument("draw_hidden_layer: input dimension and node count must be positive");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> weight(init.weight_low, init.weight_high);
    std::uniform_real_distribution<double> bias(init.bias_low, init.bias_high);

    ElmModel model;
    model.activation = activation;
    model.seed = seed;
    model.hidden_weights.resize(static_cast<Eigen::Index>(node_count), static_cast<Eigen::Index>(input_dim));
    model.hidden_biases.resize(static_cast<Eigen::Index>(node_count));
    for (Eigen::Index l = 0; l < model.hidden_weights.rows(); ++l) {
        for (Eigen::Index j = 0; j < model.hidden_weights.cols(); ++j) {
            model.hidden_weights(l, j) = weight(rng);
        }
        model.hidden_biases(l) = bias(rng);
    }
    return model;
}

Matrix hidden_layer_output(const ElmModel& model, const Matrix& inputs) {
    if (static_cast<std::size_t>(inputs.cols()) != model.input_dim()) {
        throw InvalidArgument("hidden_layer_output: input has " + std::to_string(inputs.cols()) +
                              " columns, model expects " + std::to_string(model.input_dim()));
    }
    const auto n = inputs.rows();
    const auto nodes = model.node_count();
    Matrix h(n, static_cast<Eigen::Index>(nodes));
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (Eigen::Index i = 0; i < n; ++i) {
        const double* x = inputs.row(i).data();
        for (std::size_t l = 0; l < nodes; ++l) {
            h(i, static_cast<Eigen::Index>(l)) = detail::hidden_unit(model, l, x);
        }
    }
    return h;
}

ElmModel elm_train(const Matrix& inputs, const Matrix& targets, std::size_t node_count, Activation activation,
                   std::uint64_t seed, const ElmOptions& options) {
    if (inputs.rows() < 1) {
        throw InvalidArgument("elm_train: no training rows");
    }
    if (inputs.rows() != targets.rows()) {
        throw InvalidArgument("elm_train: inputs and targets differ in row count");
    }
    require_finite(inputs, "elm_train inputs");
    require_finite(targets, "elm_train targets");

    ElmModel model = draw_hidden_layer(static_cast<std::size_t>(inputs.cols()), node_count, activation, seed, options.init);
    const Matrix h = hidden_layer_output(model, inputs);
    if (!h.allFinite()) {
        throw InternalError("elm_train: hidden layer output is not finite (activation overflow, " +
                            std::string(to_string(activation)) + ", L=" + std::to_string(node_count) + ")");
    }

    const auto m = targets.cols();
    model.output_bias_included = options.output_bias;
    if (options.output_bias) {
        Matrix augmented(h.rows(), h.cols() + 1);
        augmented << h, Matrix::Ones(h.rows(), 1);
        const Matrix solution = pinv_solve(augmented, targets, options.rel_tol);
        model.output_weights = solution.topRows(h.cols());
        model.output_bias = solution.row(h.cols()).transpose();
    } else {
        model.output_weights = pinv_solve(h, targets, options.rel_tol);
        model.output_bias = Vector::Zero(m);
    }
    if (!model.output_weights.allFinite()) {
        throw InternalError("elm_train: output weights are not finite");
    }
    return model;
}

Matrix elm_predict(const ElmModel& model, const Matrix& inputs) {
    if (static_cast<std::size_t>(inputs.cols()) != model.input_dim()) {
        throw InvalidArgument("elm_predict: input has " + std::to_string(inputs.cols()) + " columns, model expects " +
                              std::to_string(model.input_dim()));
    }
    const Matrix h = hidden_layer_output(model, inputs);
    const auto n = inputs.rows();
    const auto m = model.output_dim();
    Matrix out(n, static_cast<Eigen::Index>(m));
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (Eigen::Index i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            out(i, static_cast<Eigen::Index>(k)) = detail::output_from_hidden(model, h.row(i).data(), k);
        }
    }
    return out;
}

double elm_predict_one(const ElmModel& model, std::span<const double> x, std::size_t output) {
    if (x.size() != model.input_dim()) {
        throw InvalidArgument("elm_predict_one: dimension mismatch");
    }
    if (output >= model.output_dim()) {
        throw InvalidArgument("elm_predict_one: output index out of range");
    }
    std::vector<double> hidden(model.node_count());
    for (std::size_t l = 0; l < hidden.size(); ++l) {
        hidden[l] = detail::hidden_unit(model, l, x.data());
    }
    return detail::output_from_hidden(model, hidden.data(), output);
}

} // namespace nlror
