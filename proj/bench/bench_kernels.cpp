// Serial reference kernels against the OpenMP kernels on the same inputs.

#include "nlror/outlier_gate.hpp"
#include "nlror/parallel.hpp"
#include "nlror/reference.hpp"
#include "nlror/regress.hpp"

#include <benchmark/benchmark.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <random>

using namespace nlror;

namespace {

Matrix uniform(std::uint64_t seed, Eigen::Index rows, Eigen::Index cols) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = u(rng);
        }
    }
    return m;
}

struct Problem {
    Matrix train;
    Matrix targets;
    Matrix test;
    EnsembleModel ensemble;
    Gate gate;
};

const Problem& problem() {
    static const Problem p = [] {
        Problem q;
        q.train = uniform(1, 1000, 8);
        q.targets = Matrix(1000, 1);
        for (Eigen::Index i = 0; i < q.train.rows(); ++i) {
            q.targets(i, 0) = std::sin(3.0 * q.train(i, 0)) + q.train.row(i).squaredNorm();
        }
        q.test = 2.0 * uniform(2, 2000, 8);
        q.ensemble = ensemble_train(q.train, q.targets, 40, Activation::Sigmoid, 100, 3);
        q.gate = fit_gate(q.train, 99.0);
        return q;
    }();
    return p;
}

void threads_from(const benchmark::State& state) { set_thread_count(static_cast<int>(state.range(0))); }

void BM_EnsembleTrainReference(benchmark::State& state) {
    const auto& p = problem();
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::ensemble_train(p.train, p.targets, 40, Activation::Sigmoid, 20, 5));
    }
}

void BM_EnsembleTrainParallel(benchmark::State& state) {
    const auto& p = problem();
    threads_from(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ensemble_train(p.train, p.targets, 40, Activation::Sigmoid, 20, 5));
    }
}

void BM_EnsemblePredictReference(benchmark::State& state) {
    const auto& p = problem();
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::ensemble_predict(p.ensemble, p.test));
    }
}

void BM_EnsemblePredictParallel(benchmark::State& state) {
    const auto& p = problem();
    threads_from(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ensemble_predict(p.ensemble, p.test));
    }
}

void BM_MahalanobisReference(benchmark::State& state) {
    const auto& p = problem();
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::mahalanobis_distances(p.gate, p.test));
    }
}

void BM_MahalanobisParallel(benchmark::State& state) {
    const auto& p = problem();
    threads_from(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mahalanobis_distances(p.gate, p.test));
    }
}

void BM_NearestNeighborReference(benchmark::State& state) {
    const auto& p = problem();
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::nearest_training_neighbors(p.gate, p.test));
    }
}

void BM_NearestNeighborParallel(benchmark::State& state) {
    const auto& p = problem();
    threads_from(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(nearest_training_neighbors(p.gate, p.test));
    }
}

} // namespace

BENCHMARK(BM_EnsembleTrainReference)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleTrainParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsemblePredictReference)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsemblePredictParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MahalanobisReference)->UseRealTime()->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MahalanobisParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_NearestNeighborReference)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NearestNeighborParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
    spdlog::set_level(spdlog::level::warn);
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) {
        return 1;
    }
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
