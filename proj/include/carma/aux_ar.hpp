#pragma once

#include "carma/model.hpp"
#include "carma/types.hpp"

namespace carma {

/// Auxiliary AR(r) parameter (pi_1, ..., pi_r, sigma).
struct AuxParam {
    Vector pis;
    double sigma = 0.0;
    int r = 0;

    /// Stacked (r+1)-vector (pi_1, ..., pi_r, sigma) used by the indirect
    /// objective.
    Vector to_vector() const {
        Vector v(r + 1);
        v.head(r) = pis;
        v[r] = sigma;
        return v;
    }
};

/// Thrown when normal equations or the exact Yule-Walker system are
/// numerically singular (condition number above 1e12).
struct SingularSystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Analytic link function theta -> pi(theta): solves the r+1 Yule-Walker
/// equations built from the exact autocovariance on the sampling grid.
/// Requires r >= 2p-1, a stationary and h-identifiable spec.
AuxParam link_function(const Vector& theta, const ModelFamily& family, double h, int r,
                       double sigma_L2 = 1.0);
AuxParam link_function(const CarmaSpec& spec, double h, int r);

/// Non-mean-corrected sample autocovariance
/// (1/(n-r)) sum_{k=1}^{n-r} Y_{(k+l)h} Y_{(k+j)h} for 0 <= l, j <= r.
double sample_autocov(const SampledSeries& series, int l, int j, int r);

/// Least-squares estimate of the auxiliary AR(r) parameter: pi solves the
/// sample normal equations, sigma^2 is the average squared residual.
AuxParam ls_estimate(const SampledSeries& series, int r);

/// In-place demeaning helper (optional preprocessing for real data; the
/// model itself is zero-mean).
void demean(SampledSeries& series);

}  // namespace carma
