#include "carma/simulate.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <fstream>

namespace carma {

namespace {

/// Factor G with G G^T = M for symmetric positive semidefinite M.
/// LLT when M is definite, eigendecomposition with clamped negative
/// eigenvalues otherwise.
Matrix psd_factor(const Matrix& M) {
    Eigen::LLT<Matrix> llt(M);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    Eigen::SelfAdjointEigenSolver<Matrix> es(M);
    Vector d = es.eigenvalues();
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = d[i] > 0.0 ? std::sqrt(d[i]) : 0.0;
    return es.eigenvectors() * d.asDiagonal();
}

double min_abs_real_eigenvalue(const Matrix& A) {
    Eigen::EigenSolver<Matrix> solver(A, false);
    double rho = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
        rho = std::min(rho, std::abs(solver.eigenvalues()[i].real()));
    return rho;
}

// Cap on NIG burn-in length (in h-steps); reached only by specs that are
// numerically at the stationarity boundary.
constexpr std::size_t kMaxBurninSteps = 20000;

std::size_t nig_burnin_steps(const CarmaSpec& spec) {
    const double rho = min_abs_real_eigenvalue(spec.A);
    if (!(rho > 0.0)) return kMaxBurninSteps;
    const double steps = std::ceil(200.0 / rho);
    if (steps >= static_cast<double>(kMaxBurninSteps)) return kMaxBurninSteps;
    return static_cast<std::size_t>(steps);
}

}  // namespace

double NigParams::mean() const { return mu + delta * beta / std::sqrt(alpha * alpha - beta * beta); }

double NigParams::variance() const {
    const double g2 = alpha * alpha - beta * beta;
    return delta * alpha * alpha / (g2 * std::sqrt(g2));
}

void NigParams::validate() const {
    if (!(alpha > std::abs(beta)))
        throw std::invalid_argument("NigParams: requires alpha > |beta|");
    if (!(delta > 0.0)) throw std::invalid_argument("NigParams: requires delta > 0");
}

void DriverConfig::validate() const {
    if (fine_grid_factor < 1)
        throw std::invalid_argument("DriverConfig: fine_grid_factor must be >= 1");
    if (sigma_L2 < 0.0) throw std::invalid_argument("DriverConfig: sigma_L2 must be >= 0");
    if (kind == DriverKind::Nig) {
        if (!nig) throw std::invalid_argument("DriverConfig: NIG driver needs NigParams");
        nig->validate();
        if (std::abs(nig->variance() - sigma_L2) > 1e-3)
            throw std::invalid_argument(
                "DriverConfig: NIG implied variance deviates from sigma_L2 by more than 1e-3");
    }
}

double inverse_gaussian(double mean, double shape, RngStream& rng) {
    if (!(mean > 0.0) || !(shape > 0.0))
        throw std::invalid_argument("inverse_gaussian: mean and shape must be > 0");
    while (true) {
        const double nu = rng.normal();
        const double y = nu * nu;
        const double x = mean + mean * mean * y / (2.0 * shape) -
                         (mean / (2.0 * shape)) *
                             std::sqrt(4.0 * mean * shape * y + mean * mean * y * y);
        if (!(x > 0.0)) continue;  // reject nonpositive mixing draws (round-off)
        if (rng.uniform() <= mean / (mean + x)) return x;
        const double alt = mean * mean / x;
        if (alt > 0.0) return alt;
    }
}

double nig_increment(const NigParams& params, RngStream& rng) {
    return nig_increment(params, 1.0, rng);
}

double nig_increment(const NigParams& params, double dt, RngStream& rng) {
    const double delta_t = params.delta * dt;
    const double gamma0 = std::sqrt(params.alpha * params.alpha - params.beta * params.beta);
    const double z = inverse_gaussian(delta_t / gamma0, delta_t * delta_t, rng);
    return params.mu * dt + params.beta * z + std::sqrt(z) * rng.normal();
}

Matrix brownian_state_noise_cov(const CarmaSpec& spec, double h) {
    const Matrix S = stationary_state_cov(spec);
    const Matrix F = (spec.A * h).exp();
    Matrix Sh = S - F * S * F.transpose();
    return 0.5 * (Sh + Sh.transpose()).eval();
}

SampledTransition sampled_transition(const CarmaSpec& spec, double h) {
    SampledTransition t;
    t.F = (spec.A * h).exp();
    t.Sigma = stationary_state_cov(spec);
    Matrix Sh = t.Sigma - t.F * t.Sigma * t.F.transpose();
    t.Sigma_h = 0.5 * (Sh + Sh.transpose()).eval();
    t.chol_Sigma = psd_factor(t.Sigma);
    t.chol_Sigma_h = psd_factor(t.Sigma_h);
    return t;
}

SampledSeries simulate_carma_path(const CarmaSpec& spec, std::size_t n, double h,
                                  const DriverConfig& driver, RngStream& rng) {
    driver.validate();
    if (n < 1) throw std::invalid_argument("simulate_carma_path: n must be >= 1");
    if (!check_stationarity(spec))
        throw std::invalid_argument("simulate_carma_path: spec is not stationary");

    CarmaSpec scaled = spec;
    scaled.sigma_L2 = driver.sigma_L2;

    SampledSeries series;
    series.h = h;
    series.values.resize(n);
    series.meta.driver = driver.kind;
    series.meta.contaminated = false;

    const int p = spec.p;
    Vector x = Vector::Zero(p);
    Vector tmp(p);

    if (driver.kind == DriverKind::Brownian) {
        const SampledTransition t = sampled_transition(scaled, h);
        for (int i = 0; i < p; ++i) tmp[i] = rng.normal();
        x = t.chol_Sigma * tmp;
        Vector z(p);
        for (std::size_t m = 0; m < n; ++m) {
            for (int i = 0; i < p; ++i) z[i] = rng.normal();
            tmp.noalias() = t.F * x;
            tmp.noalias() += t.chol_Sigma_h * z;
            x.swap(tmp);
            series.values[m] = spec.c.dot(x);
        }
        return series;
    }

    // NIG: fine-grid integration of the state noise, burn-in from zero state.
    const int f = driver.fine_grid_factor;
    const double dt = h / f;
    const Matrix Fd = (spec.A * dt).exp();
    const NigParams& nig = *driver.nig;
    const std::size_t burn = nig_burnin_steps(spec);
    for (std::size_t m = 0; m < burn * static_cast<std::size_t>(f); ++m) {
        tmp.noalias() = Fd * x;
        tmp[p - 1] += nig_increment(nig, dt, rng);
        x.swap(tmp);
    }
    for (std::size_t m = 0; m < n; ++m) {
        for (int j = 0; j < f; ++j) {
            tmp.noalias() = Fd * x;
            tmp[p - 1] += nig_increment(nig, dt, rng);
            x.swap(tmp);
        }
        series.values[m] = spec.c.dot(x);
    }
    for (double v : series.values)
        if (!std::isfinite(v)) throw std::runtime_error("simulate_carma_path: non-finite output");
    return series;
}

LevyCache make_levy_cache(const DriverConfig& driver, std::size_t n, double h, int p,
                          RngStream& rng) {
    driver.validate();
    LevyCache cache;
    cache.driver = driver;
    cache.n = n;
    cache.h = h;
    if (driver.kind == DriverKind::Brownian) {
        cache.init_normals.resize(p);
        for (int i = 0; i < p; ++i) cache.init_normals[i] = rng.normal();
        cache.state_normals.resize(p, static_cast<Eigen::Index>(n));
        for (std::size_t m = 0; m < n; ++m)
            for (int i = 0; i < p; ++i) cache.state_normals(i, static_cast<Eigen::Index>(m)) = rng.normal();
    } else {
        const int f = driver.fine_grid_factor;
        const double dt = h / f;
        const NigParams& nig = *driver.nig;
        cache.nig_increments.resize(n * static_cast<std::size_t>(f));
        for (auto& v : cache.nig_increments) v = nig_increment(nig, dt, rng);
        cache.nig_burnin.resize(kMaxBurninSteps * static_cast<std::size_t>(f));
        for (auto& v : cache.nig_burnin) v = nig_increment(nig, dt, rng);
    }
    return cache;
}

void simulate_from_cache(const CarmaSpec& spec, const LevyCache& cache,
                         std::vector<double>& out) {
    const int p = spec.p;
    const std::size_t n = cache.n;
    out.resize(n);
    Vector x = Vector::Zero(p);
    Vector tmp(p);

    if (cache.driver.kind == DriverKind::Brownian) {
        CarmaSpec scaled = spec;
        scaled.sigma_L2 = cache.driver.sigma_L2;
        const SampledTransition t = sampled_transition(scaled, cache.h);
        x = t.chol_Sigma * cache.init_normals;
        for (std::size_t m = 0; m < n; ++m) {
            tmp.noalias() = t.F * x;
            tmp.noalias() += t.chol_Sigma_h * cache.state_normals.col(static_cast<Eigen::Index>(m));
            x.swap(tmp);
            out[m] = spec.c.dot(x);
        }
        return;
    }

    const int f = cache.driver.fine_grid_factor;
    const double dt = cache.h / f;
    const Matrix Fd = (spec.A * dt).exp();
    const std::size_t burn_steps =
        std::min(nig_burnin_steps(spec), kMaxBurninSteps) * static_cast<std::size_t>(f);
    for (std::size_t m = 0; m < burn_steps; ++m) {
        tmp.noalias() = Fd * x;
        tmp[p - 1] += cache.nig_burnin[m];
        x.swap(tmp);
    }
    std::size_t idx = 0;
    for (std::size_t m = 0; m < n; ++m) {
        for (int j = 0; j < f; ++j, ++idx) {
            tmp.noalias() = Fd * x;
            tmp[p - 1] += cache.nig_increments[idx];
            x.swap(tmp);
        }
        out[m] = spec.c.dot(x);
    }
}

void dump_path_csv(const SampledSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("dump_path_csv: cannot open " + path);
    out << "t,value\n";
    char buf[64];
    for (std::size_t m = 0; m < series.values.size(); ++m) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n",
                      series.h * static_cast<double>(m + 1), series.values[m]);
        out << buf;
    }
    if (!out) throw std::runtime_error("dump_path_csv: write failed for " + path);
}

}  // namespace carma
