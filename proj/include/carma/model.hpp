#pragma once

#include <functional>
#include <string>
#include <vector>

#include "carma/types.hpp"

namespace carma {

/// State-space form of a CARMA(p, q) model: companion matrix A, observation
/// vector c (coefficients of the MA polynomial in ascending powers of z,
/// zero-padded to length p), driving-noise variance sigma_L2 and the
/// effective MA order q = degree of the MA polynomial.
struct CarmaSpec {
    int p = 0;
    Matrix A;
    Vector c;
    double sigma_L2 = 1.0;
    int q = 0;
};

/// Maps a parameter vector to AR coefficients (a_1, ..., a_p) of
/// z^p + a_1 z^{p-1} + ... + a_p and MA coefficients (m_0, ..., m_{p-1})
/// of m_0 + m_1 z + ... (ascending powers). Must be three times
/// continuously differentiable on the box; this is a documented
/// precondition, not a programmatic check.
struct ModelFamily {
    std::string name;
    int p = 0;
    int dim = 0;  // number of free parameters
    std::function<void(const Vector& theta, Vector& ar, Vector& ma)> map;

    /// CAR(1): A = [theta], c = [1]. One parameter, theta < 0.
    static ModelFamily car1();

    /// CARMA(3,1): last row of A is (theta1, theta2, theta3),
    /// c = (theta4, theta5, 0). Five parameters.
    static ModelFamily carma31();

    static ModelFamily by_name(const std::string& name);
};

/// Exact autocovariances gamma(0), gamma(h), ..., gamma(r h).
struct AcfTable {
    double h = 1.0;
    std::vector<double> values;
};

CarmaSpec build_state_space(const Vector& theta, const ModelFamily& family,
                            double sigma_L2 = 1.0);
CarmaSpec build_state_space(const ThetaParam& theta, const ModelFamily& family,
                            double sigma_L2 = 1.0);

/// True iff every eigenvalue of A has real part < -1e-8. Near-integrated
/// specs are rejected because they destabilize the Lyapunov solve and the
/// exact discretization.
bool check_stationarity(const CarmaSpec& spec);

/// True iff all eigenvalues lie in the strip -pi/h < Im(z) < pi/h, so the
/// parameters remain identifiable from h-sampled data.
bool check_sampling_identifiability(const CarmaSpec& spec, double h);

/// Squared violation of stationarity/identifiability, 0 when feasible.
/// Used to build informative penalties for infeasible optimizer moves.
double feasibility_violation(const CarmaSpec& spec, double h);

/// Stationary state covariance: unique solution of
/// A S + S A^T = -sigma_L2 e_p e_p^T (solved via the Kronecker form).
Matrix stationary_state_cov(const CarmaSpec& spec);

/// gamma(t) = c^T exp(A t) Sigma c for t >= 0.
double autocovariance(const CarmaSpec& spec, double t);

/// Autocovariances on the sampling grid, sharing one Lyapunov solve.
AcfTable acf_table(const CarmaSpec& spec, double h, int r);

}  // namespace carma
