#pragma once

#include <optional>

#include "carma/aux_ar.hpp"
#include "carma/types.hpp"

namespace carma {

/// Result of a structural-parameter estimation run.
struct ThetaEstimate {
    Vector theta_hat;
    double objective = 0.0;     // final objective value (indirect) or -loglik/n (QMLE)
    AuxParam pi_hat;            // data-leg auxiliary estimate (indirect only)
    int evals = 0;
    bool converged = false;     // optimizer converged and inner stages converged
    bool boundary = false;      // landed on the box boundary (reported as failure)
    std::optional<Matrix> cov;  // estimated covariance of theta_hat, if requested
};

}  // namespace carma
