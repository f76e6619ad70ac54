#include "carma/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "carma/rng.hpp"

namespace carma {

namespace {

Vector clip_to_box(const Vector& x, const Vector& lo, const Vector& hi) {
    return x.cwiseMax(lo).cwiseMin(hi);
}

struct Simplex {
    std::vector<Vector> x;
    std::vector<double> f;

    void sort() {
        std::vector<std::size_t> idx(f.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
        std::vector<Vector> xs(x.size());
        std::vector<double> fs(f.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            xs[i] = x[idx[i]];
            fs[i] = f[idx[i]];
        }
        x.swap(xs);
        f.swap(fs);
    }
};

}  // namespace

OptimResult nelder_mead_box(const std::function<double(const Vector&)>& f, const Vector& lower,
                            const Vector& upper, const Vector& start,
                            const OptimSettings& settings) {
    const Eigen::Index d = start.size();
    if (lower.size() != d || upper.size() != d)
        throw std::invalid_argument("nelder_mead_box: bound dimensions do not match start");
    for (Eigen::Index i = 0; i < d; ++i)
        if (!(lower[i] < upper[i]))
            throw std::invalid_argument("nelder_mead_box: empty box");

    const Vector width = upper - lower;
    int evals = 0;
    const auto eval = [&](const Vector& x) {
        const Vector xc = clip_to_box(x, lower, upper);
        double penalty = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) {
            const double over = (x[i] - xc[i]) / width[i];
            penalty += over * over;
        }
        ++evals;
        return f(xc) + 1e6 * penalty;
    };

    Vector best = clip_to_box(start, lower, upper);
    double best_f = eval(best);
    bool converged = false;
    RngStream jitter(settings.jitter_seed);

    for (int run = 0; run <= settings.restarts; ++run) {
        const double shrink = std::pow(0.5, run);
        Simplex s;
        s.x.resize(static_cast<std::size_t>(d) + 1);
        s.f.resize(static_cast<std::size_t>(d) + 1);
        s.x[0] = best;
        s.f[0] = best_f;
        for (Eigen::Index i = 0; i < d; ++i) {
            Vector v = best;
            double step = settings.init_step_frac * width[i] * shrink;
            if (run > 0) step *= 1.0 + 0.5 * (jitter.uniform() - 0.5);
            if (v[i] + step > upper[i]) step = -step;
            v[i] += step;
            s.x[static_cast<std::size_t>(i) + 1] = v;
            s.f[static_cast<std::size_t>(i) + 1] = eval(v);
        }
        s.sort();

        const int budget = settings.max_evals;
        const int run_start = evals;
        bool run_converged = false;
        while (evals - run_start < budget) {
            // convergence on both f-spread and x-spread
            double f_spread = 0.0, x_spread = 0.0;
            for (std::size_t i = 1; i < s.x.size(); ++i) {
                f_spread = std::max(f_spread, std::abs(s.f[i] - s.f[0]));
                x_spread = std::max(x_spread, (s.x[i] - s.x[0]).cwiseAbs().maxCoeff());
            }
            if (f_spread <= settings.f_tol * (1.0 + std::abs(s.f[0])) &&
                x_spread <= settings.x_tol * (1.0 + s.x[0].cwiseAbs().maxCoeff())) {
                run_converged = true;
                break;
            }

            Vector centroid = Vector::Zero(d);
            for (std::size_t i = 0; i + 1 < s.x.size(); ++i) centroid += s.x[i];
            centroid /= static_cast<double>(d);

            const Vector& worst = s.x.back();
            const Vector refl = centroid + (centroid - worst);
            const double f_refl = eval(refl);

            if (f_refl < s.f[0]) {
                const Vector expd = centroid + 2.0 * (centroid - worst);
                const double f_expd = eval(expd);
                if (f_expd < f_refl) {
                    s.x.back() = expd;
                    s.f.back() = f_expd;
                } else {
                    s.x.back() = refl;
                    s.f.back() = f_refl;
                }
            } else if (f_refl < s.f[s.f.size() - 2]) {
                s.x.back() = refl;
                s.f.back() = f_refl;
            } else {
                const bool outside = f_refl < s.f.back();
                const Vector contr = outside ? centroid + 0.5 * (refl - centroid)
                                             : centroid - 0.5 * (centroid - worst);
                const double f_contr = eval(contr);
                if (f_contr < std::min(f_refl, s.f.back())) {
                    s.x.back() = contr;
                    s.f.back() = f_contr;
                } else {
                    for (std::size_t i = 1; i < s.x.size(); ++i) {
                        s.x[i] = s.x[0] + 0.5 * (s.x[i] - s.x[0]);
                        s.f[i] = eval(s.x[i]);
                    }
                }
            }
            s.sort();
        }
        if (s.f[0] < best_f) {
            best_f = s.f[0];
            best = clip_to_box(s.x[0], lower, upper);
        }
        converged = run_converged;
    }

    OptimResult res;
    res.x = best;
    res.f = best_f;
    res.evals = evals;
    res.converged = converged;
    return res;
}

}  // namespace carma
