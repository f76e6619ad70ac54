#pragma once

#include "carma/aux_ar.hpp"
#include "carma/types.hpp"

namespace carma {

enum class PsiKind { Huber, Bisquare };

/// Robustifying psi function: Huber psi_k(u) = sign(u) min(|u|, k) or the
/// Tukey bisquare psi(u) = u (1 - u^2/k^2)^2 on |u| <= k.
struct PsiSpec {
    PsiKind kind = PsiKind::Huber;
    double k = 4.0;
};

double huber_psi(double u, double k);
double bisquare_psi(double u, double k);
double psi(const PsiSpec& spec, double u);
double dpsi(const PsiSpec& spec, double u);

/// Mallows weight psi(x)/x with the continuous extension psi'(0) = 1 at 0.
double psi_weight(const PsiSpec& spec, double x);

/// E[psi^2(Z)] for Z ~ N(0,1), computed by quadrature; the centering
/// constant of the chi function.
double chi_reference(const PsiSpec& spec);

/// chi(x^2) = psi^2(sqrt(x^2)) - c_ref.
double chi_fn(double x2, const PsiSpec& spec, double c_ref);

/// phi(y, u) = w(||y||) psi(u) for an already standardized regressor y.
double mallows_phi(const Vector& y, double u, const PsiSpec& weight, const PsiSpec& psi_spec);

/// GM estimation settings mirroring the reference schedule: a fixed number
/// of Huber sweeps followed by bisquare sweeps with early stopping, tuning
/// constant k = 4 and a bisquare Mallows weight on the standardized
/// regressor norm. The chi reference distribution is standard normal.
struct GmConfig {
    PsiSpec huber_stage{PsiKind::Huber, 4.0};
    PsiSpec bisquare_stage{PsiKind::Bisquare, 4.0};
    PsiSpec weight{PsiKind::Bisquare, 4.0};
    int huber_iters = 6;
    int bisquare_iters = 50;
    double convergence_tol = 1e-6;

    static GmConfig defaults() { return GmConfig{}; }

    /// phi(y, u) = u, chi(x) = x - 1: reduces the GM estimator to least
    /// squares (Huber functions with an effectively infinite cutoff).
    static GmConfig least_squares() {
        GmConfig cfg;
        cfg.huber_stage = PsiSpec{PsiKind::Huber, 1e12};
        cfg.bisquare_stage = PsiSpec{PsiKind::Huber, 1e12};
        cfg.weight = PsiSpec{PsiKind::Huber, 1e12};
        cfg.huber_iters = 2;
        cfg.bisquare_iters = 2;
        return cfg;
    }

    void validate() const;
};

struct DegenerateSeriesError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GmResult {
    AuxParam aux;
    bool converged = false;
    int iterations = 0;
    double phi_residual = 0.0;  // sup-norm of the empirical phi equation, scale-normalized
    double chi_residual = 0.0;  // absolute value of the empirical chi equation
};

/// Iterative weighted least squares solver for the GM estimating equations.
/// Initialized from the LS fit with a MAD residual scale; each sweep solves
/// the weighted normal equations and takes safeguarded Newton steps on the
/// chi equation for sigma. Non-convergence is reported, never silently
/// accepted.
GmResult gm_estimate(const SampledSeries& series, int r, const GmConfig& cfg);

}  // namespace carma
