#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace nlror {

/// Dense row-major real matrix (rows are samples, columns are variables).
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Relative singular-value cutoff used when none is given.
inline constexpr double kDefaultPinvTolerance = 1e-10;

/// Throws InvalidArgument if any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);
void require_finite(const Vector& v, const char* what);

/// Minimum-norm least-squares solution of design * B = targets via SVD.
/// Singular values below rel_tol * (largest singular value) are treated as zero.
Matrix pinv_solve(const Matrix& design, const Matrix& targets, double rel_tol = kDefaultPinvTolerance);

Vector sample_mean(const Matrix& data);

/// Unbiased (N-1) covariance. The result is exactly symmetric.
Matrix sample_covariance(const Matrix& data);

/// Linear-interpolation percentile on the sorted values, q in [0, 100].
double percentile(std::span<const double> values, double q);

double median(std::span<const double> values);

Vector columnwise_median(const Matrix& data);

/// Ranks 1..n, ties share the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

inline std::span<const double> as_span(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

} // namespace nlror
