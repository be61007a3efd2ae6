#include "nlror/outlier_gate.hpp"

#include "nlror/errors.hpp"
#include "nlror/parallel.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <string>

namespace nlror {

double covariance_ridge(const Matrix& covariance) {
    const auto d = covariance.rows();
    const double trace = covariance.trace();
    if (!(trace > 0.0)) {
        return 1e-8;
    }
    const double scale = trace / static_cast<double>(d);
    const Eigen::MatrixXd c = covariance;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c, Eigen::EigenvaluesOnly);
    const double smallest = eig.eigenvalues().minCoeff();
    return smallest < 1e-10 * scale ? 1e-8 * scale : 0.0;
}

Gate assemble_gate(Vector mean, Matrix covariance, double threshold_distance, double percentile_q, Vector center,
                   Matrix training_inputs) {
    const auto d = mean.size();
    if (d < 1 || covariance.rows() != d || covariance.cols() != d || center.size() != d) {
        throw InvalidArgument("assemble_gate: inconsistent dimensions");
    }
    if (training_inputs.rows() > 0 && training_inputs.cols() != d) {
        throw InvalidArgument("assemble_gate: training inputs have the wrong width");
    }
    if (!(threshold_distance >= 0.0)) {
        throw InvalidArgument("assemble_gate: threshold must be non-negative");
    }
    Gate gate;
    gate.ridge = covariance_ridge(covariance);
    Eigen::MatrixXd regularized = covariance;
    regularized.diagonal().array() += gate.ridge;
    Eigen::LLT<Eigen::MatrixXd> llt(regularized);
    if (llt.info() != Eigen::Success) {
        throw InternalError("assemble_gate: covariance is not positive definite after regularization");
    }
    gate.cholesky_lower = llt.matrixL();
    gate.mean = std::move(mean);
    gate.covariance = std::move(covariance);
    gate.threshold_distance = threshold_distance;
    gate.percentile_q = percentile_q;
    gate.center = std::move(center);
    gate.training_inputs = std::move(training_inputs);
    return gate;
}

namespace {

// sqrt(|L^{-1}(x - mu)|^2) by forward substitution.
double distance_from_factor(const Gate& gate, const double* x) {
    const auto d = gate.mean.size();
    const Matrix& l = gate.cholesky_lower;
    double z_local[16];
    std::vector<double> z_heap;
    double* z = z_local;
    if (d > 16) {
        z_heap.resize(static_cast<std::size_t>(d));
        z = z_heap.data();
    }
    double sum = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
        double v = x[i] - gate.mean(i);
        for (Eigen::Index k = 0; k < i; ++k) {
            v -= l(i, k) * z[k];
        }
        z[i] = v / l(i, i);
        sum += z[i] * z[i];
    }
    return std::sqrt(sum);
}

double squared_distance(const double* a, const double* b, Eigen::Index d) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
        const double diff = a[k] - b[k];
        s += diff * diff;
    }
    return s;
}

Neighbor nearest_row(const Matrix& train, const double* x) {
    Neighbor best{0, std::numeric_limits<double>::infinity()};
    double best_sq = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < train.rows(); ++r) {
        const double sq = squared_distance(train.row(r).data(), x, train.cols());
        if (sq < best_sq) {
            best_sq = sq;
            best.index = static_cast<std::size_t>(r);
        }
    }
    best.distance = std::sqrt(best_sq);
    return best;
}

void require_dim(const Gate& gate, Eigen::Index d, const char* what) {
    if (static_cast<std::size_t>(d) != gate.dim()) {
        throw InvalidArgument(std::string(what) + ": input dimension " + std::to_string(d) + " does not match gate dimension " +
                              std::to_string(gate.dim()));
    }
}

} // namespace

Gate fit_gate(const Matrix& train_inputs, double percentile_q) {
    if (train_inputs.rows() < 2) {
        throw InvalidArgument("fit_gate: need at least two training rows");
    }
    if (!(percentile_q > 0.0 && percentile_q < 100.0)) {
        throw InvalidArgument("fit_gate: percentile must lie in (0, 100)");
    }
    require_finite(train_inputs, "fit_gate");
    Gate gate = assemble_gate(sample_mean(train_inputs), sample_covariance(train_inputs), 0.0, percentile_q,
                              columnwise_median(train_inputs), train_inputs);
    const Vector d = mahalanobis_distances(gate, train_inputs);
    gate.threshold_distance = percentile(as_span(d), percentile_q);
    return gate;
}

double mahalanobis_distance(const Gate& gate, const Vector& x) {
    require_dim(gate, x.size(), "mahalanobis_distance");
    return distance_from_factor(gate, x.data());
}

Vector mahalanobis_distances(const Gate& gate, const Matrix& inputs) {
    require_dim(gate, inputs.cols(), "mahalanobis_distances");
    Vector out(inputs.rows());
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
        out(i) = distance_from_factor(gate, inputs.row(i).data());
    }
    return out;
}

Neighbor nearest_training_neighbor(const Gate& gate, const Vector& x) {
    require_dim(gate, x.size(), "nearest_training_neighbor");
    if (gate.training_inputs.rows() < 1) {
        throw InvalidArgument("nearest_training_neighbor: gate holds no training rows");
    }
    return nearest_row(gate.training_inputs, x.data());
}

std::vector<Neighbor> nearest_training_neighbors(const Gate& gate, const Matrix& inputs) {
    require_dim(gate, inputs.cols(), "nearest_training_neighbors");
    if (gate.training_inputs.rows() < 1) {
        throw InvalidArgument("nearest_training_neighbors: gate holds no training rows");
    }
    std::vector<Neighbor> out(static_cast<std::size_t>(inputs.rows()));
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
        out[static_cast<std::size_t>(i)] = nearest_row(gate.training_inputs, inputs.row(i).data());
    }
    return out;
}

OutlierPartition classify(const Gate& gate, const Matrix& test_inputs) {
    require_dim(gate, test_inputs.cols(), "classify");
    OutlierPartition part;
    part.distances = mahalanobis_distances(gate, test_inputs);
    const auto neighbors = nearest_training_neighbors(gate, test_inputs);
    const auto d = test_inputs.cols();

    part.rows.resize(static_cast<std::size_t>(test_inputs.rows()));
    for (Eigen::Index i = 0; i < test_inputs.rows(); ++i) {
        RowVerdict& v = part.rows[static_cast<std::size_t>(i)];
        v.distance = part.distances(i);
        v.beyond_threshold = v.distance > gate.threshold_distance;
        v.neighbor = neighbors[static_cast<std::size_t>(i)];
        v.center_distance = std::sqrt(squared_distance(test_inputs.row(i).data(), gate.center.data(), d));
        v.neighbor_center_distance = std::sqrt(squared_distance(
            gate.training_inputs.row(static_cast<Eigen::Index>(v.neighbor.index)).data(), gate.center.data(), d));
        v.beyond_neighbor = v.center_distance > v.neighbor_center_distance;
        v.outlier = v.beyond_threshold && v.beyond_neighbor;
        (v.outlier ? part.outlier_indices : part.non_outlier_indices).push_back(static_cast<std::size_t>(i));
    }
    return part;
}

} // namespace nlror
