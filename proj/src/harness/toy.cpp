#include "nlror/harness/toy.hpp"

#include "nlror/errors.hpp"
#include "nlror/extrapolate.hpp"
#include "nlror/harness/format.hpp"
#include "nlror/parallel.hpp"
#include "nlror/preprocess.hpp"

#include <cmath>
#include <fstream>
#include <random>

namespace nlror {

double toy_signal(double x) {
    return x + 0.2 * x * x;
}

ToyData toy_generate(std::uint64_t seed, std::size_t n_train, bool noise_free) {
    if (n_train < 2) {
        throw InvalidArgument("toy_generate: need at least two points");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> unit(0.0, 1.0);

    ToyData data;
    const auto n = static_cast<Eigen::Index>(n_train);
    data.inputs.resize(n, 1);
    data.signal.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        data.inputs(i, 0) = unit(rng);
        data.signal(i) = toy_signal(data.inputs(i, 0));
    }
    const double mean = data.signal.mean();
    const double sd = std::sqrt((data.signal.array() - mean).square().sum() / static_cast<double>(n - 1));
    data.targets = data.signal;
    if (!noise_free) {
        for (Eigen::Index i = 0; i < n; ++i) {
            data.targets(i) += 2.0 * sd * unit(rng);
        }
    }
    return data;
}

std::vector<std::size_t> toy_node_grid() {
    return {1, 2, 3, 4, 5, 7, 10, 15, 20, 30, 40, 60};
}

Eigen::Index ToyTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) {
            return static_cast<Eigen::Index>(i);
        }
    }
    throw InvalidArgument("ToyTable: no column '" + name + "'");
}

ToyTable toy_demo(std::uint64_t seed, Activation activation, const ToyDemoOptions& options) {
    if (!(options.grid_step > 0.0) || !(options.grid_high >= options.grid_low)) {
        throw InvalidArgument("toy_demo: invalid evaluation grid");
    }
    ToyTable table;
    table.train = toy_generate(seed, options.n_train);
    const MinMaxScaler scaler = fit_minmax(table.train.inputs);
    const Matrix scaled_train = apply_minmax(scaler, table.train.inputs);
    const Matrix targets = table.train.targets;

    CvConfig cv;
    cv.folds = options.folds;
    cv.candidate_node_counts = options.candidate_node_counts;
    cv.seed = derive_seed(seed, 1);
    table.node_count = select_node_count(scaled_train, targets, activation, cv);

    const EnsembleModel ensemble =
        ensemble_train(scaled_train, targets, table.node_count, activation, options.members, derive_seed(seed, 2));
    const LinearModel lr = lr_fit(table.train.inputs, table.train.targets);

    const auto points = static_cast<Eigen::Index>(std::llround((options.grid_high - options.grid_low) / options.grid_step)) + 1;
    Matrix grid(points, 1);
    for (Eigen::Index k = 0; k < points; ++k) {
        grid(k, 0) = options.grid_low + static_cast<double>(k) * options.grid_step;
    }
    const Matrix scaled_grid = apply_minmax(scaler, grid);
    const Matrix members = member_predictions(ensemble, scaled_grid);
    const Matrix mean = ensemble_predict(ensemble, scaled_grid);
    const Vector linear = lr_predict(lr, grid);

    const ScalarFn surface = [&](double u) {
        const double x[1] = {u};
        return ensemble_predict_one(ensemble, x);
    };

    table.columns = {"x", "true_signal", "lr", "ensemble_mean", "boundary_extrapolation"};
    for (std::size_t k = 0; k < ensemble.size(); ++k) {
        table.columns.push_back("member_" + zero_pad(k, 3));
    }
    table.values.resize(points, static_cast<Eigen::Index>(table.columns.size()));
    for (Eigen::Index k = 0; k < points; ++k) {
        const double x = grid(k, 0);
        table.values(k, 0) = x;
        table.values(k, 1) = toy_signal(x);
        table.values(k, 2) = linear(k);
        table.values(k, 3) = mean(k, 0);
        table.values(k, 4) = boundary_extrapolate_1d(surface, -1.0, 1.0, options.fd_step, scaled_grid(k, 0));
        table.values.row(k).tail(members.cols()) = members.row(k);
    }
    return table;
}

void write_toy_csv(const ToyTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out << (c ? "," : "") << table.columns[c];
    }
    out << '\n';
    for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
        for (Eigen::Index c = 0; c < table.values.cols(); ++c) {
            out << (c ? "," : "") << format_double(table.values(r, c));
        }
        out << '\n';
    }
}

void write_toy_training_csv(const ToyData& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    out << "x,target,true_signal\n";
    for (Eigen::Index i = 0; i < data.inputs.rows(); ++i) {
        out << format_double(data.inputs(i, 0)) << ',' << format_double(data.targets(i)) << ','
            << format_double(data.signal(i)) << '\n';
    }
}

} // namespace nlror
