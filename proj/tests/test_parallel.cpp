#include "nlror/errors.hpp"
#include "nlror/parallel.hpp"
#include "nlror/reference.hpp"
#include "nlror/regress.hpp"
#include "nlror/serialize.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <omp.h>

#include <filesystem>
#include <set>

using namespace nlror;
using namespace nlror::testing;

namespace {

struct Fixture {
    Matrix train;
    Matrix targets;
    Matrix test;
};

Fixture make_fixture(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Fixture f;
    f.train = uniform_matrix(rng, 120, 4);
    f.targets = normal_matrix(rng, 120, 1);
    f.test = uniform_matrix(rng, 80, 4, -3, 3);
    return f;
}

class ThreadGuard {
public:
    explicit ThreadGuard(int n) { set_thread_count(n); }
    ~ThreadGuard() { set_thread_count(0); }
};

} // namespace

TEST(DeriveSeed, DistinctAndStable) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        seen.insert(derive_seed(42, i));
    }
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_EQ(derive_seed(42, 7), derive_seed(42, 7));
    EXPECT_NE(derive_seed(42, 7), derive_seed(43, 7));
    EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 3, 2));
}

TEST(ExceptionSlot, CarriesFirstError) {
    ExceptionSlot slot;
#pragma omp parallel for num_threads(4)
    for (int i = 0; i < 16; ++i) {
        slot.run([i] {
            if (i % 5 == 3) {
                throw InvalidArgument("boom");
            }
        });
    }
    EXPECT_THROW(slot.rethrow(), InvalidArgument);
}

TEST(Reference, EnsembleMatchesSerialBitwise) {
    const Fixture f = make_fixture(91);
    for (auto act : {Activation::Sigmoid, Activation::RadialBasis, Activation::Softplus}) {
        const EnsembleModel par = ensemble_train(f.train, f.targets, 9, act, 12, 5);
        const EnsembleModel ser = reference::ensemble_train(f.train, f.targets, 9, act, 12, 5);
        ASSERT_EQ(par.size(), ser.size());
        for (std::size_t k = 0; k < par.size(); ++k) {
            EXPECT_TRUE(par.members[k].output_weights == ser.members[k].output_weights);
        }
        EXPECT_TRUE(hidden_layer_output(par.members[0], f.test) ==
                    reference::hidden_layer_output(par.members[0], f.test));
        EXPECT_TRUE(member_predictions(par, f.test) == reference::member_predictions(par, f.test));
        EXPECT_TRUE(ensemble_predict(par, f.test) == reference::ensemble_predict(par, f.test));
    }
}

TEST(Reference, GateKernelsMatchSerialBitwise) {
    const Fixture f = make_fixture(92);
    const Gate g = fit_gate(f.train, 99.0);
    EXPECT_TRUE(mahalanobis_distances(g, f.test) == reference::mahalanobis_distances(g, f.test));
    const auto a = nearest_training_neighbors(g, f.test);
    const auto b = reference::nearest_training_neighbors(g, f.test);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].index, b[i].index);
        EXPECT_EQ(a[i].distance, b[i].distance);
    }
}

TEST(ThreadCount, ResultsIndependentOfTeamSize) {
    const Fixture f = make_fixture(93);
    CvConfig cv;
    cv.candidate_node_counts = {3, 8, 16};
    Matrix baseline;
    CvResult baseline_cv;
    {
        ThreadGuard guard(1);
        baseline = ensemble_predict(ensemble_train(f.train, f.targets, 10, Activation::RadialBasis, 16, 3), f.test);
        baseline_cv = cross_validate_node_count(f.train, f.targets, Activation::Sigmoid, cv);
    }
    for (int threads : {2, 3, 8}) {
        ThreadGuard guard(threads);
        EXPECT_EQ(thread_count(), threads);
        const Matrix p =
            ensemble_predict(ensemble_train(f.train, f.targets, 10, Activation::RadialBasis, 16, 3), f.test);
        EXPECT_TRUE(p == baseline);
        const CvResult r = cross_validate_node_count(f.train, f.targets, Activation::Sigmoid, cv);
        EXPECT_EQ(r.selected_node_count, baseline_cv.selected_node_count);
        for (std::size_t i = 0; i < r.scores.size(); ++i) {
            EXPECT_EQ(r.scores[i].mean_mse, baseline_cv.scores[i].mean_mse);
        }
    }
}

TEST(Serialize, EnsembleRoundTrip) {
    const Fixture f = make_fixture(94);
    const EnsembleModel e = ensemble_train(f.train, f.targets, 7, Activation::RadialBasis, 5, 11);
    const auto path = std::filesystem::temp_directory_path() / "nlror_ensemble_roundtrip.json";
    write_json_file(path, ensemble_to_json(e));
    const EnsembleModel back = ensemble_from_json(read_json_file(path));
    std::filesystem::remove(path);
    EXPECT_EQ(back.trim_policy, e.trim_policy);
    EXPECT_LE((ensemble_predict(back, f.test) - ensemble_predict(e, f.test)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_EQ(back.members[3].seed, e.members[3].seed);
}

TEST(Serialize, GateRoundTrip) {
    const Fixture f = make_fixture(95);
    const Gate g = fit_gate(f.train, 95.0);
    const Gate back = gate_from_json(nlohmann::json::parse(gate_to_json(g).dump()));
    EXPECT_EQ(back.threshold_distance, g.threshold_distance);
    EXPECT_TRUE(back.cholesky_lower == g.cholesky_lower);
    EXPECT_TRUE(mahalanobis_distances(back, f.test) == mahalanobis_distances(g, f.test));
}

TEST(Serialize, RejectsWrongFormat) {
    EXPECT_THROW(ensemble_from_json(nlohmann::json{{"format", "something-else"}, {"version", 1}}), InvalidArgument);
    auto doc = elm_to_json(elm_train(to_matrix({{0.1}, {0.5}}), to_matrix({{1}, {2}}), 2, Activation::Sigmoid, 1));
    doc["version"] = 99;
    EXPECT_THROW(elm_from_json(doc), InvalidArgument);
}
