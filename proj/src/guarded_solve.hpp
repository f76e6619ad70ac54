#pragma once

#include "carma/aux_ar.hpp"

namespace carma::detail {

inline constexpr double kConditionGuard = 1e12;

/// Solve the symmetric positive definite system M x = b; throws
/// SingularSystemError when M is indefinite or its condition number
/// exceeds the guard.
inline Vector guarded_solve(const Matrix& M, const Vector& b, const char* what) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(M);
    if (es.info() != Eigen::Success)
        throw SingularSystemError(std::string(what) + ": eigensolver failed");
    const Vector& d = es.eigenvalues();
    const double dmax = d[d.size() - 1];
    const double dmin = d[0];
    if (!(dmin > 0.0) || dmax / dmin > kConditionGuard)
        throw SingularSystemError(std::string(what) + ": system singular or ill-conditioned");
    return es.eigenvectors() * ((es.eigenvectors().transpose() * b).array() / d.array()).matrix();
}

}  // namespace carma::detail
