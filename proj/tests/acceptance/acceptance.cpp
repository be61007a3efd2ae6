// One [PASS]/[FAIL] line per acceptance criterion; exit status 1 if any criterion fails.

#include "nlror/errors.hpp"
#include "nlror/extrapolate.hpp"
#include "nlror/harness/dataset.hpp"
#include "nlror/harness/experiment.hpp"
#include "nlror/harness/format.hpp"
#include "nlror/harness/metrics.hpp"
#include "nlror/harness/toy.hpp"
#include "nlror/numkernel.hpp"
#include "nlror/outlier_gate.hpp"
#include "nlror/preprocess.hpp"
#include "nlror/regress.hpp"

#include <Eigen/QR>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#ifndef NLROR_CLI_PATH
#error "NLROR_CLI_PATH must name the nlror executable"
#endif

using namespace nlror;

namespace {

// Tolerances, pinned.
constexpr double kROutlTol = 0.01;
constexpr double kIdentityTol = 1e-10;
constexpr double kPinvTol = 1e-8;
constexpr double kAffineTol = 1e-10;
constexpr double kGateRelTol = 0.05;
constexpr double kInvarianceTol = 1e-8;
constexpr double kSigmoidRelTol = 1e-6;
constexpr double kRbfRelTol = 1e-6;
constexpr double kTrimTol = 1e-12;
constexpr double kMetricTol = 1e-12;
constexpr double kDivergenceFraction = 0.95;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

Matrix normal_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) {
            m(i, j) = n(rng);
        }
    }
    return m;
}

Matrix orthonormal_columns(std::mt19937_64& rng, Eigen::Index n, Eigen::Index k) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd(normal_matrix(rng, n, k)));
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
    return q;
}

Vector unit_vector(std::mt19937_64& rng, Eigen::Index d) {
    return normal_matrix(rng, d, 1).col(0).normalized();
}

Outcome criterion_01() {
    const auto pipeline = [](double a, double b, double c) {
        Matrix train(2, 1);
        train << a, b;
        Matrix test(1, 1);
        test << c;
        return r_outl(apply_minmax(fit_minmax(train), test));
    };
    const double bei = pipeline(0.0, 51.1, 223.0);
    const double bei_est = r_outl_estimate(0.0, 51.1, 223.0);
    const double sta = pipeline(0.0, 64.0, 231.0);
    const double sta_est = r_outl_estimate(0.0, 64.0, 231.0);
    const bool ok = std::abs(bei - 7.73) <= kROutlTol && std::abs(bei_est - 7.73) <= kROutlTol &&
                    std::abs(sta - 6.22) <= kROutlTol && std::abs(sta_est - 6.22) <= kROutlTol;
    return {ok, "BEI_r " + fmt(bei) + "/" + fmt(bei_est) + ", STA " + fmt(sta) + "/" + fmt(sta_est)};
}

Outcome criterion_02() {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    double worst = 0.0;
    bool exact = true;
    for (int k = 0; k < 1000; ++k) {
        double v[3] = {u(rng), u(rng), u(rng)};
        std::sort(v, v + 3);
        const double a = v[0], b = v[1], c = v[2];
        Matrix train(2, 1);
        train << a, b;
        Matrix test(1, 1);
        test << c;
        const double pipe = r_outl(apply_minmax(fit_minmax(train), test));
        const double closed = (2.0 * c - a - b) / (b - a);
        worst = std::max(worst, std::abs(pipe - closed) / std::max(1.0, std::abs(closed)));
        const double span = b - a;
        const double shifted = c - a;
        exact = exact && r_outl_estimate(0.0, span, shifted) == 2.0 * shifted / span - 1.0 &&
                r_outl_estimate(0.0, span, shifted) == r_outl_estimate_approx(span, shifted);
    }
    return {worst <= kIdentityTol && exact,
            "max rel. deviation " + fmt(worst) + (exact ? ", a=0 form exact" : ", a=0 form NOT exact")};
}

Outcome criterion_03() {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> rows(20, 80);
    double worst_exact = 0.0;
    for (int k = 0; k < 100; ++k) {
        const Eigen::Index n = rows(rng);
        const Eigen::Index l = std::uniform_int_distribution<Eigen::Index>(1, n / 2)(rng);
        const Matrix h = normal_matrix(rng, n, l);
        const Matrix b = normal_matrix(rng, l, 1);
        worst_exact = std::max(worst_exact, (pinv_solve(h, h * b) - b).cwiseAbs().maxCoeff());
    }
    double worst_rank = 0.0;
    for (int k = 0; k < 20; ++k) {
        const Eigen::Index n = 40, l = 15, r = 1 + k % 10;
        const Matrix u = orthonormal_columns(rng, n, r);
        const Matrix v = orthonormal_columns(rng, l, r);
        Vector s(r);
        for (Eigen::Index i = 0; i < r; ++i) {
            s(i) = std::uniform_real_distribution<double>(0.1, 10.0)(rng);
        }
        const Matrix h = u * s.asDiagonal() * v.transpose();
        const Matrix y = normal_matrix(rng, n, 1);
        const Matrix oracle = v * s.cwiseInverse().asDiagonal() * u.transpose() * y;
        worst_rank = std::max(worst_rank, (pinv_solve(h, y) - oracle).cwiseAbs().maxCoeff());
    }
    return {worst_exact <= kPinvTol && worst_rank <= kPinvTol,
            "exact recovery " + fmt(worst_exact) + ", rank-deficient " + fmt(worst_rank)};
}

Outcome criterion_04() {
    std::mt19937_64 rng(4);
    double worst = 0.0;
    std::size_t used_candidates = 0;
    for (int k = 0; k < 100; ++k) {
        const Eigen::Index d = 1 + k % 10;
        const Vector a = normal_matrix(rng, d, 1).col(0);
        const double c = std::normal_distribution<double>(0.0, 3.0)(rng);
        const PredictFn f = [a, c](const Vector& x) { return a.dot(x) + c; };
        const Matrix train = normal_matrix(rng, 60, d);
        const Gate gate = fit_gate(train, 99.0);
        const Vector x_o = gate.center + (4.0 + 4.0 * std::uniform_real_distribution<double>(0, 1)(rng)) * unit_vector(rng, d);
        const Vector x_nn = train.row(static_cast<Eigen::Index>(nearest_training_neighbor(gate, x_o).index)).transpose();
        const double truth = f(x_o);
        for (double d1 : {0.25, 0.5}) {
            worst = std::max(worst, std::abs(nn_linear_extrapolate(f, x_o, x_nn, d1) - truth));
        }
        for (double d2 : {0.5, 1.0}) {
            try {
                worst = std::max(worst, std::abs(center_linear_extrapolate(f, x_o, x_nn, gate.center, d2) - truth));
            } catch (const DegenerateGeometry&) {
            }
        }
        const OrDiagnostic diag = nlror_explain(f, gate, x_o, OrConfig{});
        for (const auto& cand : diag.candidates) {
            used_candidates += cand.value.has_value();
        }
        worst = std::max(worst, std::abs(diag.prediction - truth));
    }
    return {worst <= kAffineTol, "max |error| " + fmt(worst) + " over " + std::to_string(used_candidates) +
                                     " candidate values"};
}

Outcome criterion_05() {
    std::mt19937_64 rng(5);
    const Eigen::Index n = 10000;
    const Matrix train = normal_matrix(rng, n, 2);
    const Gate gate = fit_gate(train, 99.0);
    const double expected = std::sqrt(-2.0 * std::log(0.01));  // chi-square(2) quantile, square-rooted
    const auto exceed = (mahalanobis_distances(gate, train).array() > gate.threshold_distance).count();
    const double frac = static_cast<double>(exceed) / static_cast<double>(n);
    const bool ok = std::abs(gate.threshold_distance - expected) <= kGateRelTol * expected &&
                    frac <= 0.01 + 2.0 / static_cast<double>(n);
    return {ok, "threshold " + fmt(gate.threshold_distance) + " vs " + fmt(expected) + ", exceed fraction " + fmt(frac)};
}

Outcome criterion_06() {
    std::mt19937_64 rng(6);
    const Matrix train = normal_matrix(rng, 400, 5);
    const Matrix test = 2.0 * normal_matrix(rng, 100, 5);
    const Vector base = mahalanobis_distances(fit_gate(train, 99.0), test);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        Matrix a = normal_matrix(rng, 5, 5);
        while (std::abs(a.determinant()) < 0.1) {
            a = normal_matrix(rng, 5, 5);
        }
        const Eigen::RowVectorXd t = 5.0 * normal_matrix(rng, 1, 5).row(0);
        const Matrix tr = (train * a.transpose()).rowwise() + t;
        const Matrix te = (test * a.transpose()).rowwise() + t;
        worst = std::max(worst, (mahalanobis_distances(fit_gate(tr, 99.0), te) - base).cwiseAbs().maxCoeff());
    }
    return {worst <= kInvarianceTol, "max |ΔD_M| " + fmt(worst)};
}

struct ToyRun {
    Activation activation;
    std::vector<double> rmse_nlr, rmse_lr;
    std::size_t divergent = 0;
};

std::vector<ToyRun> run_toy() {
    std::vector<ToyRun> runs;
    for (auto act : {Activation::Sigmoid, Activation::RadialBasis, Activation::Softplus}) {
        ToyRun run{act, {}, {}, 0};
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const ToyTable t = toy_demo(seed, act);
            const auto x = t.column("x");
            const auto truth = t.column("true_signal");
            const auto lr = t.column("lr");
            const auto mean = t.column("ensemble_mean");
            double se_nlr = 0.0, se_lr = 0.0;
            std::size_t count = 0;
            Eigen::Index at0 = -1, at6 = -1;
            for (Eigen::Index k = 0; k < t.values.rows(); ++k) {
                const double xv = t.values(k, x);
                if (xv >= -2.0 - 1e-9 && xv <= 2.0 + 1e-9) {
                    se_nlr += std::pow(t.values(k, mean) - t.values(k, truth), 2);
                    se_lr += std::pow(t.values(k, lr) - t.values(k, truth), 2);
                    ++count;
                }
                if (std::abs(xv) < 1e-9) {
                    at0 = k;
                }
                if (std::abs(xv - 6.0) < 1e-9) {
                    at6 = k;
                }
            }
            run.rmse_nlr.push_back(std::sqrt(se_nlr / static_cast<double>(count)));
            run.rmse_lr.push_back(std::sqrt(se_lr / static_cast<double>(count)));
            const Eigen::Index first_member = t.column("member_000");
            const auto spread = [&](Eigen::Index row) {
                const Eigen::RowVectorXd m = t.values.row(row).tail(t.values.cols() - first_member);
                const double mu = m.mean();
                return std::sqrt((m.array() - mu).square().sum() / static_cast<double>(m.size() - 1));
            };
            run.divergent += spread(at6) > spread(at0);
        }
        runs.push_back(std::move(run));
    }
    return runs;
}

Outcome criterion_07(const std::vector<ToyRun>& runs) {
    bool ok = true;
    std::string detail;
    for (const auto& r : runs) {
        const double nlr = median(r.rmse_nlr);
        const double lr = median(r.rmse_lr);
        ok = ok && nlr < lr;
        detail += std::string(detail.empty() ? "" : ", ") + std::string(to_string(r.activation)) + " " + fmt(nlr) +
                  " vs LR " + fmt(lr);
    }
    return {ok, "median RMSE on [-2,2]: " + detail};
}

Outcome criterion_08(const std::vector<ToyRun>& runs) {
    bool ok = true;
    std::string detail;
    for (const auto& r : runs) {
        ok = ok && static_cast<double>(r.divergent) >= kDivergenceFraction * 20.0;
        detail += std::string(detail.empty() ? "" : ", ") + std::string(to_string(r.activation)) + " " +
                  std::to_string(r.divergent) + "/20";
    }
    return {ok, "spread(6) > spread(0): " + detail};
}

Outcome criterion_09() {
    // 3-D smooth regression problem; one ELM per activation and node count
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix x(200, 3);
    Matrix y(200, 1);
    for (Eigen::Index i = 0; i < 200; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) {
            x(i, j) = u(rng);
        }
        y(i, 0) = std::sin(2.0 * x(i, 0)) + x(i, 1) * x(i, 2);
    }
    std::vector<Vector> rays;
    for (int r = 0; r < 10; ++r) {
        rays.push_back(unit_vector(rng, 3));
    }
    double sig_worst = 0.0, rbf_worst = 0.0, slow_unit = 1.0;
    bool soft_ok = true;
    for (std::size_t nodes : {5, 10, 20, 40}) {
        const ElmModel sig = elm_train(x, y, nodes, Activation::Sigmoid, 100 + nodes);
        const ElmModel rbf = elm_train(x, y, nodes, Activation::RadialBasis, 200 + nodes);
        const ElmModel soft = elm_train(x, y, nodes, Activation::Softplus, 300 + nodes);
        const auto at = [](const ElmModel& m, const Vector& p) { return elm_predict_one(m, as_span(p)); };
        for (const auto& ray : rays) {
            const double sig_scale = sig.output_weights.cwiseAbs().sum();
            sig_worst = std::max(sig_worst, std::abs(at(sig, 1000.0 * ray) - at(sig, 100.0 * ray)) / sig_scale);
            slow_unit = std::min(slow_unit, (sig.hidden_weights * ray).cwiseAbs().minCoeff());

            rbf_worst = std::max(rbf_worst, std::abs(at(rbf, 1000.0 * ray)) / rbf.output_weights.cwiseAbs().sum());

            // softplus: growth bounded by the Lipschitz constant along the ray, and eventually linear
            const double lip = (soft.output_weights.col(0).cwiseAbs().array() * (soft.hidden_weights * ray).cwiseAbs().array()).sum();
            const double f0 = at(soft, Vector::Zero(3));
            double previous_slope = 0.0;
            for (double t : {10.0, 100.0, 1000.0, 10000.0}) {
                const double ft = at(soft, t * ray);
                soft_ok = soft_ok && std::abs(ft) <= std::abs(f0) + t * lip * (1.0 + 1e-12);
                const double slope = (at(soft, 2.0 * t * ray) - ft) / t;
                soft_ok = soft_ok && std::abs(slope) <= lip * (1.0 + 1e-9);
                if (t == 10000.0) {
                    soft_ok = soft_ok && std::abs(slope - previous_slope) <= 1e-3 * lip;
                }
                previous_slope = slope;
            }
        }
    }
    const bool ok = sig_worst < kSigmoidRelTol && rbf_worst < kRbfRelTol && soft_ok;
    return {ok, "sigmoid max |f(1000u)-f(100u)|/sum|beta| " + fmt(sig_worst) + " (slowest unit |w.u| " +
                    fmt(slow_unit) + "), radial basis max |f(1000u)|/sum|beta| " + fmt(rbf_worst) +
                    ", softplus linear growth " + (soft_ok ? "ok" : "violated")};
}

Dataset wavy_dataset(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.1);
    Matrix x = normal_matrix(rng, 260, 3);
    for (Eigen::Index i = 200; i < 260; ++i) {
        x.row(i) *= 2.0;
    }
    Vector y(260);
    for (Eigen::Index i = 0; i < 260; ++i) {
        y(i) = std::sin(x(i, 0)) * x(i, 1) + 0.5 * x(i, 2) + noise(rng);
    }
    return make_dataset("wavy", x, y, 200);
}

Outcome criterion_10() {
    std::size_t checked = 0, outliers = 0, mismatches = 0;
    for (std::uint64_t seed : {10, 11, 12}) {
        const Dataset ds = wavy_dataset(seed);
        ExperimentConfig c;
        c.trials = 2;
        c.members_per_trial = 10;
        c.cv.candidate_node_counts = {5, 10, 20};
        c.master_seed = seed;
        c.record_predictions = true;
        const ExperimentResult r = run_experiment(ds, c);
        for (const auto& t : r.trials) {
            const auto& gate = t.gate_percentile == r.gates[0].percentile ? r.gates[0] : r.gates[1];
            std::vector<bool> flagged(t.test_count, false);
            for (auto i : gate.outlier_rows) {
                flagged[i] = true;
            }
            for (std::size_t i = 0; i < t.test_count; ++i) {
                if (flagged[i]) {
                    ++outliers;
                    continue;
                }
                ++checked;
                mismatches += std::memcmp(&t.nlr_predictions[i], &t.nlror_predictions[i], sizeof(double)) != 0;
            }
        }
    }
    return {mismatches == 0 && outliers > 0, std::to_string(checked) + " non-outlier predictions, " +
                                                 std::to_string(mismatches) + " differ (" + std::to_string(outliers) +
                                                 " outlier predictions skipped)"};
}

Outcome criterion_11() {
    std::mt19937_64 rng(11);
    const Matrix x = normal_matrix(rng, 150, 2) * 0.5;
    Matrix y(150, 1);
    for (Eigen::Index i = 0; i < 150; ++i) {
        y(i, 0) = std::exp(-x.row(i).squaredNorm()) + 0.1 * x(i, 0);
    }
    const EnsembleModel e = ensemble_train(x, y, 12, Activation::RadialBasis, 100, 11);
    const Matrix test = normal_matrix(rng, 200, 2);
    const Matrix members = member_predictions(e, test);
    const Matrix mean = ensemble_predict(e, test);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < test.rows(); ++i) {
        std::vector<double> v(members.row(i).data(), members.row(i).data() + members.cols());
        std::sort(v.begin(), v.end());
        double sum = 0.0;
        for (std::size_t k = 1; k + 1 < v.size(); ++k) {
            sum += v[k];
        }
        worst = std::max(worst, std::abs(mean(i, 0) - sum / 98.0));
    }
    return {e.trim_policy == TrimPolicy::DropMinMax && worst <= kTrimTol,
            "max |trimmed - oracle| " + fmt(worst) + " over 200 points"};
}

Outcome criterion_12() {
    std::mt19937_64 rng(12);
    bool ok = true;
    const Matrix m = normal_matrix(rng, 40, 3);
    std::vector<double> a(m.col(0).data(), m.col(0).data() + 40);
    std::vector<double> inc, dec;
    for (double v : a) {
        inc.push_back(std::exp(v));
        dec.push_back(-v * v * v);
    }
    ok = ok && spearman(a, inc) == 1.0 && spearman(a, dec) == -1.0;
    const double triple = spearman(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 2});
    ok = ok && std::abs(triple - 0.5) <= kMetricTol;
    const auto ranks = average_ranks(std::vector<double>{5, 5, 9});
    ok = ok && ranks == std::vector<double>{1.5, 1.5, 3.0};
    std::vector<double> p(m.col(1).data(), m.col(1).data() + 40);
    std::vector<double> o(m.col(2).data(), m.col(2).data() + 40);
    const double base = maen(p, o, o);
    double worst = 0.0;
    for (double k : {1e-3, 0.37, 12.0, 5e3}) {
        std::vector<double> pk, ok_;
        for (std::size_t i = 0; i < p.size(); ++i) {
            pk.push_back(k * p[i]);
            ok_.push_back(k * o[i]);
        }
        worst = std::max(worst, std::abs(maen(pk, ok_, ok_) - base) / base);
    }
    ok = ok && worst <= kMetricTol;
    return {ok, "triple " + fmt(triple) + ", MAEn scale deviation " + fmt(worst)};
}

// Linear beyond radius 1, a smooth bump inside; the two match in value and gradient at the sphere.
Dataset sphere_dataset(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n_train = 300, n_test = 200, n_far = 10;
    Vector slope(3);
    slope << 1.0, -0.5, 0.8;
    const auto f = [&](const Vector& x) {
        const double r2 = x.squaredNorm();
        return slope.dot(x) + (r2 < 1.0 ? 2.0 * (1.0 - r2) * (1.0 - r2) : 0.0);
    };
    Matrix x(static_cast<Eigen::Index>(n_train + n_test), 3);
    Vector y(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        Vector dir(3);
        for (int j = 0; j < 3; ++j) {
            dir(j) = n(rng);
        }
        dir.normalize();
        const bool far = static_cast<std::size_t>(i) >= n_train + n_test - n_far;
        const double radius = far ? 2.5 + 1.5 * u(rng) : std::cbrt(u(rng));
        const Vector p = radius * dir;
        x.row(i) = p.transpose();
        y(i) = f(p) + 0.05 * n(rng);
    }
    return make_dataset("sphere", x, y, n_train);
}

Outcome criterion_13() {
    std::string detail;
    bool ok = true;
    ExperimentConfig c;
    c.trials = 1;
    c.members_per_trial = 100;
    c.gate_percentiles = {99.0};
    for (auto act : {Activation::Sigmoid, Activation::RadialBasis, Activation::Softplus}) {
        c.activations = {act};
        std::vector<double> nlr, nlror;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            c.master_seed = seed;
            const ExperimentResult r = run_experiment(sphere_dataset(1000 + seed), c);
            const auto& t = r.trials.front();
            const auto a = cell(t.scores, Model::NLR, Subset::Outliers, Metric::MAEn);
            const auto b = cell(t.scores, Model::NLR_OR, Subset::Outliers, Metric::MAEn);
            if (a && b) {
                nlr.push_back(*a);
                nlror.push_back(*b);
            }
        }
        const bool this_ok = nlr.size() >= 25 && median(nlror) < median(nlr);
        ok = ok && this_ok;
        detail += std::string(detail.empty() ? "" : ", ") + std::string(to_string(act)) + " NLR_OR " +
                  fmt(nlr.empty() ? NAN : median(nlror)) + " vs NLR " + fmt(nlr.empty() ? NAN : median(nlr)) + " (" +
                  std::to_string(nlr.size()) + " seeds)";
    }
    return {ok, "median outlier MAEn: " + detail};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome criterion_14() {
    const auto dir = std::filesystem::temp_directory_path() / ("nlror_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    {
        std::mt19937_64 rng(14);
        std::normal_distribution<double> n(0.0, 1.0);
        std::ofstream csv(dir / "data.csv", std::ios::binary);
        csv << "t,x1,x2,wind,y\n";
        const char* dirs[] = {"NW", "NE", "S", "CV"};
        for (int i = 0; i < 160; ++i) {
            const double scale = i >= 140 ? 3.0 : 1.0;
            const double x1 = scale * n(rng), x2 = scale * n(rng);
            csv << i << ',' << format_double(x1) << ',' << format_double(x2) << ',' << dirs[i % 4] << ','
                << format_double(std::exp(0.3 * x1) + 0.2 * x2 * x2 + 0.1 * (i % 4) + 0.05 * std::abs(n(rng)) + 1.0)
                << '\n';
        }
        std::ofstream(dir / "manifest.json") << R"({"csv_path": "data.csv", "feature_columns": ["x1", "x2"],
  "categorical_groups": [{"column": "wind", "labels": ["NW", "NE", "S", "CV"]}],
  "target_column": "y", "target_transform": "ln", "split": {"train_fraction": 0.75}})";
        std::ofstream(dir / "config.json") << R"({"trials": 3, "members_per_trial": 8, "master_seed": 77,
  "cv": {"candidate_node_counts": [3, 6, 12]}, "record_predictions": true, "record_diagnostics": true})";
    }
    const auto run = [&](const std::string& out, const std::string& threads) {
        const std::string cmd = std::string(NLROR_CLI_PATH) + " --log-level warn --threads " + threads +
                                " run --manifest " + (dir / "manifest.json").string() + " --config " +
                                (dir / "config.json").string() + " --out " + (dir / out).string() + " --format both";
        return std::system(cmd.c_str());
    };
    const int rc1 = run("a", "1");
    const int rc2 = run("b", "4");
    Outcome o;
    if (rc1 != 0 || rc2 != 0) {
        o = {false, "CLI exited with " + std::to_string(rc1) + "/" + std::to_string(rc2)};
    } else {
        const std::string ja = slurp(dir / "a" / "report.json"), jb = slurp(dir / "b" / "report.json");
        const std::string ca = slurp(dir / "a" / "scores.csv"), cb = slurp(dir / "b" / "scores.csv");
        o = {!ja.empty() && ja == jb && !ca.empty() && ca == cb,
             "report.json " + std::to_string(ja.size()) + " bytes " + (ja == jb ? "identical" : "DIFFER") +
                 ", scores.csv " + std::to_string(ca.size()) + " bytes " + (ca == cb ? "identical" : "DIFFER") +
                 " (1 vs 4 threads)"};
    }
    std::filesystem::remove_all(dir);
    return o;
}

} // namespace

int main() {
    spdlog::set_level(spdlog::level::err);
    int failures = 0;
    const auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::printf("[%s] %02d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
        std::fflush(stdout);
    };
    report(1, "r_outl reproduction", criterion_01);
    report(2, "r_outl closed form", criterion_02);
    report(3, "pseudoinverse oracle", criterion_03);
    report(4, "affine exactness of NLR_OR", criterion_04);
    report(5, "gate calibration", criterion_05);
    report(6, "Mahalanobis affine invariance", criterion_06);
    std::vector<ToyRun> toy;
    try {
        toy = run_toy();
    } catch (const std::exception& e) {
        std::printf("toy problem failed: %s\n", e.what());
    }
    report(7, "toy in-domain advantage", [&] { return criterion_07(toy); });
    report(8, "toy extrapolation divergence", [&] { return criterion_08(toy); });
    report(9, "activation asymptotics", criterion_09);
    report(10, "NLR_OR non-outlier identity", criterion_10);
    report(11, "trimmed-mean rule", criterion_11);
    report(12, "metric properties", criterion_12);
    report(13, "synthetic NLR_OR benefit", criterion_13);
    report(14, "end-to-end determinism", criterion_14);
    std::printf("%d of 14 criteria passed\n", 14 - failures);
    return failures == 0 ? 0 : 1;
}
