#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "resest/errors.hpp"

namespace resest {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Largest eigenvalue modulus. Empty matrices have radius 0.
inline double spectral_radius(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    if (m.rows() != m.cols()) throw ConfigError("spectral_radius: matrix is not square");
    Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw ConfigError("spectral_radius: eigen solver failed");
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

inline bool all_finite(const Vector& v) { return v.allFinite(); }

/// Row-major nested vectors to an Eigen matrix. Ragged input is an error.
inline Matrix matrix_from_rows(const std::vector<std::vector<double>>& rows, const std::string& what) {
    if (rows.empty()) return Matrix(0, 0);
    const auto cols = rows.front().size();
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw ConfigError(what + ": ragged matrix row " + std::to_string(i));
        for (std::size_t j = 0; j < cols; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return m;
}

inline std::vector<std::vector<double>> matrix_to_rows(const Matrix& m) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) rows[static_cast<std::size_t>(i)].push_back(m(i, j));
    return rows;
}

inline Vector vector_from(const std::vector<double>& v) {
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> vector_to(const Vector& v) { return {v.data(), v.data() + v.size()}; }

/// Rows of `m` selected by 0-based indices.
inline Matrix select_rows(const Matrix& m, const std::vector<int>& rows0) {
    Matrix out(static_cast<Eigen::Index>(rows0.size()), m.cols());
    for (std::size_t i = 0; i < rows0.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows0[i]);
    return out;
}

inline Vector select(const Vector& v, const std::vector<int>& idx0) {
    Vector out(static_cast<Eigen::Index>(idx0.size()));
    for (std::size_t i = 0; i < idx0.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(idx0[i]);
    return out;
}

}  // namespace resest
