#include "nlror/errors.hpp"
#include "nlror/parallel.hpp"
#include "nlror/regress.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <limits>
#include <string>

namespace nlror {

std::vector<std::size_t> default_node_grid() {
    return {5, 10, 20, 40, 70, 100, 150, 200, 300};
}

void CvConfig::validate() const {
    if (folds < 2) {
        throw InvalidArgument("CvConfig: folds must be at least 2");
    }
    if (candidate_node_counts.empty()) {
        throw InvalidArgument("CvConfig: empty candidate list");
    }
    for (std::size_t i = 0; i < candidate_node_counts.size(); ++i) {
        if (candidate_node_counts[i] < 1) {
            throw InvalidArgument("CvConfig: node counts must be positive");
        }
        if (i > 0 && candidate_node_counts[i] <= candidate_node_counts[i - 1]) {
            throw InvalidArgument("CvConfig: candidate node counts must be strictly increasing");
        }
    }
}

namespace {

struct Fold {
    Eigen::Index begin;
    Eigen::Index end;
};

// Contiguous blocks in record order; the first n % folds blocks get one extra row.
std::vector<Fold> contiguous_folds(Eigen::Index n, std::size_t folds) {
    std::vector<Fold> out;
    const auto k = static_cast<Eigen::Index>(folds);
    Eigen::Index start = 0;
    for (Eigen::Index f = 0; f < k; ++f) {
        const Eigen::Index size = n / k + (f < n % k ? 1 : 0);
        out.push_back({start, start + size});
        start += size;
    }
    return out;
}

Matrix drop_block(const Matrix& m, const Fold& fold) {
    const Eigen::Index kept = m.rows() - (fold.end - fold.begin);
    Matrix out(kept, m.cols());
    out.topRows(fold.begin) = m.topRows(fold.begin);
    out.bottomRows(m.rows() - fold.end) = m.bottomRows(m.rows() - fold.end);
    return out;
}

} // namespace

CvResult cross_validate_node_count(const Matrix& inputs, const Matrix& targets, Activation activation,
                                   const CvConfig& cv, const ElmOptions& options) {
    cv.validate();
    if (inputs.rows() != targets.rows()) {
        throw InvalidArgument("cross_validate_node_count: inputs and targets differ in row count");
    }
    if (static_cast<std::size_t>(inputs.rows()) < cv.folds) {
        throw InvalidArgument("cross_validate_node_count: fewer rows than folds");
    }

    const auto folds = contiguous_folds(inputs.rows(), cv.folds);
    Eigen::Index smallest_train = inputs.rows();
    for (const auto& f : folds) {
        smallest_train = std::min(smallest_train, inputs.rows() - (f.end - f.begin));
    }

    std::vector<std::size_t> usable;
    CvResult result;
    for (std::size_t node_count : cv.candidate_node_counts) {
        if (static_cast<Eigen::Index>(node_count) > smallest_train) {
            spdlog::warn("cross validation: skipping L={} (training fold has only {} rows)", node_count, smallest_train);
            result.scores.push_back({node_count, std::nullopt});
        } else {
            usable.push_back(node_count);
            result.scores.push_back({node_count, 0.0});
        }
    }
    if (usable.empty()) {
        throw InvalidArgument("cross_validate_node_count: every candidate exceeds the training-fold size (" +
                              std::to_string(smallest_train) + ")");
    }

    // One validation MSE per (candidate, fold); filled in parallel, reduced in a fixed order.
    const auto n_folds = static_cast<long>(folds.size());
    const auto n_jobs = static_cast<long>(usable.size()) * n_folds;
    std::vector<double> fold_mse(static_cast<std::size_t>(n_jobs));
    ExceptionSlot error;
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
    for (long job = 0; job < n_jobs; ++job) {
        error.run([&] {
            const std::size_t node_count = usable[static_cast<std::size_t>(job / n_folds)];
            const Fold& fold = folds[static_cast<std::size_t>(job % n_folds)];
            const Matrix train_x = drop_block(inputs, fold);
            const Matrix train_y = drop_block(targets, fold);
            const auto seed = derive_seed(cv.seed, static_cast<std::uint64_t>(job % n_folds), node_count);
            const ElmModel model = elm_train(train_x, train_y, node_count, activation, seed, options);
            const Matrix pred = elm_predict(model, inputs.middleRows(fold.begin, fold.end - fold.begin));
            const Matrix residual = pred - targets.middleRows(fold.begin, fold.end - fold.begin);
            fold_mse[static_cast<std::size_t>(job)] = residual.squaredNorm() / static_cast<double>(residual.size());
        });
    }
    error.rethrow();

    double best = std::numeric_limits<double>::infinity();
    std::size_t u = 0;
    for (auto& score : result.scores) {
        if (!score.mean_mse) {
            continue;
        }
        double sum = 0.0;
        for (long f = 0; f < n_folds; ++f) {
            sum += fold_mse[u * static_cast<std::size_t>(n_folds) + static_cast<std::size_t>(f)];
        }
        ++u;
        const double mean = sum / static_cast<double>(n_folds);
        score.mean_mse = mean;
        // strict < keeps the smaller L on ties
        if (mean < best) {
            best = mean;
            result.selected_node_count = score.node_count;
        }
    }
    if (result.selected_node_count == 0) {
        // every mean was non-finite; fall back to the most parsimonious candidate
        spdlog::warn("cross validation: no finite validation MSE, using L={}", usable.front());
        result.selected_node_count = usable.front();
    }
    return result;
}

std::size_t select_node_count(const Matrix& inputs, const Matrix& targets, Activation activation, const CvConfig& cv,
                              const ElmOptions& options) {
    return cross_validate_node_count(inputs, targets, activation, cv, options).selected_node_count;
}

} // namespace nlror
