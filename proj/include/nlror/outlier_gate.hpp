#pragma once

#include "nlror/numkernel.hpp"

#include <cstddef>
#include <vector>

namespace nlror {

/// Mahalanobis outlier detector fitted on normalized training inputs.
///
/// The distance uses the sample mean and covariance; the "farther than the
/// nearest neighbour" test uses the column-wise median centre. Both centres
/// are kept because the two conditions are defined against different ones.
struct Gate {
    Vector mean;
    Matrix covariance;        // sample covariance, before regularization
    double ridge = 0.0;       // added to the diagonal when the covariance is near-singular
    Matrix cholesky_lower;    // L with L L^T = covariance + ridge I
    double threshold_distance = 0.0;
    double percentile_q = 99.0;
    Vector center;
    Matrix training_inputs;

    std::size_t dim() const { return static_cast<std::size_t>(mean.size()); }
};

/// Builds a gate from explicit moments; regularizes and factors the covariance.
Gate assemble_gate(Vector mean, Matrix covariance, double threshold_distance, double percentile_q, Vector center,
                   Matrix training_inputs);

/// Ridge that assemble_gate would add for this covariance (0 when well conditioned).
double covariance_ridge(const Matrix& covariance);

Gate fit_gate(const Matrix& train_inputs, double percentile_q);

double mahalanobis_distance(const Gate& gate, const Vector& x);

/// Distances for every row (OpenMP over rows).
Vector mahalanobis_distances(const Gate& gate, const Matrix& inputs);

struct Neighbor {
    std::size_t index = 0;
    double distance = 0.0;
};

/// Exact brute-force Euclidean nearest training row; the smallest index wins ties.
Neighbor nearest_training_neighbor(const Gate& gate, const Vector& x);

std::vector<Neighbor> nearest_training_neighbors(const Gate& gate, const Matrix& inputs);

/// Both conditions for one test row, kept for diagnostics.
struct RowVerdict {
    double distance = 0.0;
    bool beyond_threshold = false;
    Neighbor neighbor;
    double center_distance = 0.0;
    double neighbor_center_distance = 0.0;
    bool beyond_neighbor = false;
    bool outlier = false;
};

struct OutlierPartition {
    std::vector<std::size_t> outlier_indices;
    std::vector<std::size_t> non_outlier_indices;
    Vector distances;
    std::vector<RowVerdict> rows;
};

/// Outlier iff D_M > threshold and the row is farther from the centre than its nearest training row is.
OutlierPartition classify(const Gate& gate, const Matrix& test_inputs);

} // namespace nlror
