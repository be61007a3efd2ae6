#include "nlror/numkernel.hpp"

#include "nlror/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace nlror {

void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) {
        throw InvalidArgument(std::string(what) + ": non-finite entry");
    }
}

void require_finite(const Vector& v, const char* what) {
    if (!v.allFinite()) {
        throw InvalidArgument(std::string(what) + ": non-finite entry");
    }
}

Matrix pinv_solve(const Matrix& design, const Matrix& targets, double rel_tol) {
    if (design.rows() < 1 || design.cols() < 1 || targets.cols() < 1) {
        throw InvalidArgument("pinv_solve: empty design or target matrix");
    }
    if (design.rows() != targets.rows()) {
        throw InvalidArgument("pinv_solve: design has " + std::to_string(design.rows()) + " rows but targets have " +
                              std::to_string(targets.rows()));
    }
    if (!(rel_tol > 0.0)) {
        throw InvalidArgument("pinv_solve: rel_tol must be positive");
    }
    require_finite(design, "pinv_solve design");
    require_finite(targets, "pinv_solve targets");

    // BDCSVD falls back to Jacobi for small problems; both are deterministic.
    const Eigen::MatrixXd h = design;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();

    const double cutoff = s.size() > 0 ? rel_tol * s(0) : 0.0;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > cutoff) {
            inv(i) = 1.0 / s(i);
        }
    }

    const Eigen::MatrixXd projected = svd.matrixU().transpose() * targets;
    const Eigen::MatrixXd solution = svd.matrixV() * (inv.asDiagonal() * projected);
    return solution;
}

Vector sample_mean(const Matrix& data) {
    if (data.rows() < 1) {
        throw InvalidArgument("sample_mean: empty matrix");
    }
    return data.colwise().mean().transpose();
}

Matrix sample_covariance(const Matrix& data) {
    if (data.rows() < 2) {
        throw InvalidArgument("sample_covariance: need at least two rows");
    }
    const Vector mu = sample_mean(data);
    const Matrix centered = data.rowwise() - mu.transpose();
    const auto d = data.cols();
    const double scale = 1.0 / static_cast<double>(data.rows() - 1);

    Matrix cov(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i; j < d; ++j) {
            const double c = centered.col(i).dot(centered.col(j)) * scale;
            cov(i, j) = c;
            cov(j, i) = c;
        }
    }
    return cov;
}

namespace {

double interpolate_sorted(const std::vector<double>& sorted, double q) {
    const double pos = q / 100.0 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    if (lo == hi) {
        return sorted[lo];
    }
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace

double percentile(std::span<const double> values, double q) {
    if (values.empty()) {
        throw InvalidArgument("percentile: empty input");
    }
    if (!(q >= 0.0 && q <= 100.0)) {
        throw InvalidArgument("percentile: q must lie in [0, 100]");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return interpolate_sorted(sorted, q);
}

double median(std::span<const double> values) {
    if (values.empty()) {
        throw InvalidArgument("median: empty input");
    }
    std::vector<double> work(values.begin(), values.end());
    const std::size_t n = work.size();
    const std::size_t mid = n / 2;
    std::nth_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(mid), work.end());
    const double upper = work[mid];
    if (n % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

Vector columnwise_median(const Matrix& data) {
    if (data.rows() < 1 || data.cols() < 1) {
        throw InvalidArgument("columnwise_median: empty matrix");
    }
    Vector out(data.cols());
    std::vector<double> column(static_cast<std::size_t>(data.rows()));
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
        for (Eigen::Index i = 0; i < data.rows(); ++i) {
            column[static_cast<std::size_t>(i)] = data(i, j);
        }
        out(j) = median(column);
    }
    return out;
}

std::vector<double> average_ranks(std::span<const double> values) {
    if (values.empty()) {
        throw InvalidArgument("average_ranks: empty input");
    }
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        // positions i..j (0-based) hold ranks i+1..j+1
        const double rank = 0.5 * static_cast<double>(i + j + 2);
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = rank;
        }
        i = j + 1;
    }
    return ranks;
}

} // namespace nlror
