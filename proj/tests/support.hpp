#pragma once

#include "nlror/numkernel.hpp"

#include <Eigen/QR>

#include <random>

namespace nlror::testing {

inline Matrix uniform_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double lo = -1.0,
                             double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = u(rng);
        }
    }
    return m;
}

inline Matrix normal_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = n(rng);
        }
    }
    return m;
}

// n x k with orthonormal columns (Householder QR of a Gaussian matrix)
inline Matrix orthonormal_columns(std::mt19937_64& rng, Eigen::Index n, Eigen::Index k) {
    const Eigen::MatrixXd g = normal_matrix(rng, n, k);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
    return q;
}

inline Vector to_vector(std::initializer_list<double> values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) {
        v(i++) = x;
    }
    return v;
}

inline Matrix to_matrix(std::initializer_list<std::initializer_list<double>> rows) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = static_cast<Eigen::Index>(rows.begin()->size());
    Matrix m(r, c);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (double x : row) {
            m(i, j++) = x;
        }
        ++i;
    }
    return m;
}

} // namespace nlror::testing
