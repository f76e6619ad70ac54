#include "carma/gm.hpp"

#include <algorithm>
#include <cmath>

#include "guarded_solve.hpp"

namespace carma {

namespace {

double median_inplace(std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid) - 1, v.end());
    return 0.5 * (hi + v[mid - 1]);
}

/// MAD scaled for consistency at the normal distribution.
double mad_scale(const std::vector<double>& values) {
    std::vector<double> work(values);
    const double med = median_inplace(work);
    for (auto& v : work) v = std::abs(v - med);
    return 1.4826 * median_inplace(work);
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

/// One Newton pass (with bisection fallback) on the chi equation
/// g(sigma) = mean psi^2(e/sigma) - c_ref.
double scale_step(const std::vector<double>& resid, double sigma, const PsiSpec& spec,
                  double c_ref) {
    const auto g = [&](double s) {
        double acc = 0.0;
        for (double e : resid) {
            const double p = psi(spec, e / s);
            acc += p * p;
        }
        return acc / static_cast<double>(resid.size()) - c_ref;
    };
    for (int it = 0; it < 8; ++it) {
        double gval = 0.0, gder = 0.0;
        for (double e : resid) {
            const double u = e / sigma;
            const double p = psi(spec, u);
            gval += p * p;
            gder += -2.0 * p * dpsi(spec, u) * u / sigma;
        }
        const double m = static_cast<double>(resid.size());
        gval = gval / m - c_ref;
        gder /= m;
        if (std::abs(gval) < 1e-12) return sigma;
        double next = std::numeric_limits<double>::quiet_NaN();
        if (std::abs(gder) > 1e-300) next = sigma - gval / gder;
        if (std::isfinite(next) && next > 0.25 * sigma && next < 4.0 * sigma) {
            sigma = next;
            continue;
        }
        // bracketing bisection fallback
        double lo = sigma / 64.0, hi = sigma * 64.0;
        double glo = g(lo), ghi = g(hi);
        if (glo * ghi > 0.0) return sigma;  // no bracket, keep current scale
        for (int b = 0; b < 60; ++b) {
            const double mid = 0.5 * (lo + hi);
            const double gm = g(mid);
            if (glo * gm <= 0.0) {
                hi = mid;
                ghi = gm;
            } else {
                lo = mid;
                glo = gm;
            }
        }
        return 0.5 * (lo + hi);
    }
    return sigma;
}

}  // namespace

double huber_psi(double u, double k) {
    return u >= 0.0 ? std::min(u, k) : std::max(u, -k);
}

double bisquare_psi(double u, double k) {
    if (std::abs(u) >= k) return 0.0;
    const double t = 1.0 - (u * u) / (k * k);
    return u * t * t;
}

double psi(const PsiSpec& spec, double u) {
    return spec.kind == PsiKind::Huber ? huber_psi(u, spec.k) : bisquare_psi(u, spec.k);
}

double dpsi(const PsiSpec& spec, double u) {
    if (spec.kind == PsiKind::Huber) return std::abs(u) < spec.k ? 1.0 : 0.0;
    const double t = (u * u) / (spec.k * spec.k);
    if (t >= 1.0) return 0.0;
    return (1.0 - t) * (1.0 - 5.0 * t);
}

double psi_weight(const PsiSpec& spec, double x) {
    const double ax = std::abs(x);
    if (ax < 1e-12) return 1.0;
    return psi(spec, ax) / ax;
}

double chi_reference(const PsiSpec& spec) {
    // Simpson quadrature of psi^2(z) phi(z) on [-9, 9]; psi^2 grows at most
    // quadratically so the tail truncation is far below 1e-12.
    const int n = 4000;  // even
    const double a = -9.0, b = 9.0;
    const double step = (b - a) / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double z = a + step * i;
        const double p = psi(spec, z);
        const double f = p * p * normal_pdf(z);
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * f;
    }
    return acc * step / 3.0;
}

double chi_fn(double x2, const PsiSpec& spec, double c_ref) {
    const double p = psi(spec, std::sqrt(std::max(0.0, x2)));
    return p * p - c_ref;
}

double mallows_phi(const Vector& y, double u, const PsiSpec& weight, const PsiSpec& psi_spec) {
    return psi_weight(weight, y.norm()) * psi(psi_spec, u);
}

void GmConfig::validate() const {
    if (huber_iters < 1 || bisquare_iters < 0)
        throw std::invalid_argument("GmConfig: iteration counts invalid");
    if (!(convergence_tol > 0.0)) throw std::invalid_argument("GmConfig: tol must be > 0");
    if (!(huber_stage.k > 0.0) || !(bisquare_stage.k > 0.0) || !(weight.k > 0.0))
        throw std::invalid_argument("GmConfig: tuning constants must be > 0");
}

GmResult gm_estimate(const SampledSeries& series, int r, const GmConfig& cfg) {
    cfg.validate();
    const std::size_t n = series.values.size();
    if (n <= static_cast<std::size_t>(r) + 1)
        throw std::invalid_argument("gm_estimate: series too short for order r");
    for (double v : series.values)
        if (!std::isfinite(v)) throw std::invalid_argument("gm_estimate: non-finite observation");

    const std::size_t m = n - static_cast<std::size_t>(r);
    const double* y = series.values.data();

    const double s_mad = mad_scale(series.values);
    if (!(s_mad > 0.0))
        throw DegenerateSeriesError("gm_estimate: zero-variance regressors (constant series)");

    // Mallows weights on standardized regressor norms ||y_k|| / (s * sqrt(r))
    std::vector<double> reg_weight(m);
    const double norm_scale = s_mad * std::sqrt(static_cast<double>(r));
    for (std::size_t k = 0; k < m; ++k) {
        double sq = 0.0;
        for (int i = 0; i < r; ++i) {
            const double v = y[k + static_cast<std::size_t>(i)];
            sq += v * v;
        }
        reg_weight[k] = psi_weight(cfg.weight, std::sqrt(sq) / norm_scale);
    }

    // LS initialization; sigma0 from the MAD of its residuals
    const AuxParam init = ls_estimate(series, r);
    Vector pi = init.pis;
    std::vector<double> resid(m);
    const auto refresh_residuals = [&](const Vector& coef) {
        for (std::size_t k = 0; k < m; ++k) {
            double pred = 0.0;
            for (int i = 1; i <= r; ++i) pred += coef[i - 1] * y[k + static_cast<std::size_t>(r - i)];
            resid[k] = y[k + static_cast<std::size_t>(r)] - pred;
        }
    };
    refresh_residuals(pi);
    double sigma = mad_scale(resid);
    if (!(sigma > 0.0)) {
        // exact zero-residual fit: nothing for the robust stages to do
        GmResult res;
        res.aux = init;
        res.converged = true;
        return res;
    }

    GmResult res;
    Matrix A(r, r);
    Vector b(r), yk(r);
    bool converged = false;
    double last_rel = std::numeric_limits<double>::infinity();

    const auto sweep_stage = [&](const PsiSpec& stage, int iters, bool early_stop) {
        const double c_ref = chi_reference(stage);
        for (int it = 0; it < iters; ++it) {
            A.setZero();
            b.setZero();
            for (std::size_t k = 0; k < m; ++k) {
                const double u = resid[k] / sigma;
                const double w = reg_weight[k] * psi_weight(stage, u);
                if (w == 0.0) continue;
                const double target = y[k + static_cast<std::size_t>(r)];
                for (int i = 1; i <= r; ++i) yk[i - 1] = y[k + static_cast<std::size_t>(r - i)];
                b.noalias() += w * target * yk;
                A.selfadjointView<Eigen::Lower>().rankUpdate(yk, w);
            }
            A = A.selfadjointView<Eigen::Lower>();
            Vector pi_new;
            try {
                pi_new = detail::guarded_solve(A, b, "gm_estimate");
            } catch (const SingularSystemError&) {
                throw std::runtime_error(
                    "gm_estimate: weighted normal equations singular (all weights vanished)");
            }
            refresh_residuals(pi_new);
            const double sigma_new = scale_step(resid, sigma, stage, c_ref);

            double rel = std::abs(sigma_new - sigma) / (1.0 + sigma_new);
            for (int i = 0; i < r; ++i)
                rel = std::max(rel, std::abs(pi_new[i] - pi[i]) / (1.0 + std::abs(pi_new[i])));
            pi = pi_new;
            sigma = sigma_new;
            last_rel = rel;
            ++res.iterations;
            if (early_stop && rel < cfg.convergence_tol) {
                converged = true;
                return;
            }
        }
    };

    sweep_stage(cfg.huber_stage, cfg.huber_iters, false);
    if (cfg.bisquare_iters > 0 && !converged)
        sweep_stage(cfg.bisquare_stage, cfg.bisquare_iters, true);
    if (!converged) converged = last_rel < cfg.convergence_tol;

    // fixed-point residuals of the empirical estimating equations
    const PsiSpec& final_stage = cfg.bisquare_iters > 0 ? cfg.bisquare_stage : cfg.huber_stage;
    const double c_ref = chi_reference(final_stage);
    Vector phi_eq = Vector::Zero(r);
    double chi_eq = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double u = resid[k] / sigma;
        const double p = reg_weight[k] * psi(final_stage, u);
        for (int i = 1; i <= r; ++i) phi_eq[i - 1] += p * y[k + static_cast<std::size_t>(r - i)];
        chi_eq += chi_fn(u * u, final_stage, c_ref);
    }
    res.phi_residual = phi_eq.cwiseAbs().maxCoeff() / (static_cast<double>(m) * s_mad);
    res.chi_residual = std::abs(chi_eq / static_cast<double>(m));

    res.aux.r = r;
    res.aux.pis = pi;
    res.aux.sigma = sigma;
    res.converged = converged;
    return res;
}

}  // namespace carma
