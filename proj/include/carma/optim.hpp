#pragma once

#include <cstdint>
#include <functional>

#include "carma/types.hpp"

namespace carma {

/// Nelder-Mead settings. Restarts rebuild the simplex around the best point
/// with shrinking, deterministically jittered steps.
struct OptimSettings {
    int max_evals = 2000;  // per restart
    int restarts = 3;
    double f_tol = 1e-13;
    double x_tol = 1e-9;
    double init_step_frac = 0.10;  // initial simplex step as a fraction of box width
    std::uint64_t jitter_seed = 12345;
};

struct OptimResult {
    Vector x;
    double f = 0.0;
    int evals = 0;
    bool converged = false;
};

/// Minimize f over the box [lower, upper] with a Nelder-Mead simplex.
/// Out-of-box vertices are evaluated at their clipped projection plus a
/// quadratic penalty, so the simplex is steered back without aborting.
OptimResult nelder_mead_box(const std::function<double(const Vector&)>& f, const Vector& lower,
                            const Vector& upper, const Vector& start,
                            const OptimSettings& settings);

}  // namespace carma
