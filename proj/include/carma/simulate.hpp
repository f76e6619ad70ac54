#pragma once

#include <optional>

#include "carma/model.hpp"
#include "carma/rng.hpp"
#include "carma/types.hpp"

namespace carma {

/// Parameters of the normal inverse Gaussian law of unit-time increments.
struct NigParams {
    double alpha = 3.0;
    double beta = 1.0;
    double delta = 2.5145;
    double mu = -0.8890;

    double mean() const;      // mu + delta*beta / sqrt(alpha^2 - beta^2)
    double variance() const;  // delta*alpha^2 / (alpha^2 - beta^2)^(3/2)
    void validate() const;    // requires alpha > |beta|, delta > 0
};

/// Driving Levy process configuration. sigma_L2 is the variance of L_1;
/// for NIG drivers the implied variance must agree with it to 1e-3.
struct DriverConfig {
    DriverKind kind = DriverKind::Brownian;
    double sigma_L2 = 1.0;
    std::optional<NigParams> nig;
    int fine_grid_factor = 10;  // subintervals per h for non-Gaussian state integration

    void validate() const;
};

/// One draw from InverseGaussian(mean, shape) via the
/// Michael-Schucany-Haas transform.
double inverse_gaussian(double mean, double shape, RngStream& rng);

/// One unit-time NIG increment via the normal variance-mean mixture.
double nig_increment(const NigParams& params, RngStream& rng);

/// NIG increment over a time step dt (NIG is closed under convolution:
/// delta and mu scale linearly in dt).
double nig_increment(const NigParams& params, double dt, RngStream& rng);

/// Exact state-noise covariance of the h-sampled Brownian-driven state:
/// Sigma_h = Sigma - e^{Ah} Sigma e^{A^T h}.
Matrix brownian_state_noise_cov(const CarmaSpec& spec, double h);

/// Per-spec discretization quantities shared by the simulators and the
/// Kalman filter.
struct SampledTransition {
    Matrix F;            // e^{Ah}
    Matrix Sigma;        // stationary state covariance
    Matrix Sigma_h;      // exact Brownian state-noise covariance
    Matrix chol_Sigma;   // lower Cholesky factor of Sigma (PSD-safe)
    Matrix chol_Sigma_h; // lower Cholesky factor of Sigma_h
};
SampledTransition sampled_transition(const CarmaSpec& spec, double h);

/// Simulate Y_h, ..., Y_nh from the state-space recursion. Brownian drivers
/// use the exact discretization with X_0 drawn from the stationary law;
/// NIG drivers integrate the state noise on a fine grid and discard a
/// burn-in of ceil(200 / rho) steps, rho = min |Re lambda(A)|.
SampledSeries simulate_carma_path(const CarmaSpec& spec, std::size_t n, double h,
                                  const DriverConfig& driver, RngStream& rng);

/// Frozen driver randomness for common-random-numbers simulation: one cache
/// is generated per estimation run and reused for every candidate theta, so
/// the indirect objective is a deterministic function of theta.
struct LevyCache {
    DriverConfig driver;
    std::size_t n = 0;
    double h = 1.0;
    Matrix state_normals;               // p x n standard normals (Brownian)
    Vector init_normals;                // p standard normals (Brownian)
    std::vector<double> nig_increments; // n * fine_grid_factor increments (NIG)
    std::vector<double> nig_burnin;     // burn-in increments, consumed from the front
};

LevyCache make_levy_cache(const DriverConfig& driver, std::size_t n, double h, int p,
                          RngStream& rng);

/// Simulate from the frozen cache; writes n observations into out.
void simulate_from_cache(const CarmaSpec& spec, const LevyCache& cache,
                         std::vector<double>& out);

/// Write a path as CSV with header "t,value".
void dump_path_csv(const SampledSeries& series, const std::string& path);

}  // namespace carma
