#include "carma/contaminate.hpp"

#include <stdexcept>

namespace carma {

void OutlierConfig::validate() const {
    if (gamma < 0.0 || gamma > 1.0)
        throw std::invalid_argument("OutlierConfig: gamma must lie in [0, 1]");
    if (patchy) {
        if (patchy->l < 1) throw std::invalid_argument("OutlierConfig: patch length l must be >= 1");
        if (patchy->epsilon < 0.0 || patchy->epsilon > 1.0)
            throw std::invalid_argument("OutlierConfig: epsilon must lie in [0, 1]");
    }
}

std::vector<int> patchy_indicator(std::size_t n, double epsilon, int l, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("patchy_indicator: n must be >= 1");
    std::vector<int> b(n);
    for (auto& v : b) v = rng.bernoulli(epsilon) ? 1 : 0;
    std::vector<int> V(n, 0);
    for (std::size_t m = 0; m < n; ++m) {
        const std::size_t lo = m >= static_cast<std::size_t>(l) ? m - static_cast<std::size_t>(l) : 0;
        for (std::size_t j = lo; j <= m; ++j)
            if (b[j]) {
                V[m] = 1;
                break;
            }
    }
    return V;
}

SampledSeries contaminate(const SampledSeries& series, const OutlierConfig& cfg, RngStream& rng) {
    std::vector<int> flags;
    return contaminate_with_flags(series, cfg, rng, flags);
}

SampledSeries contaminate_with_flags(const SampledSeries& series, const OutlierConfig& cfg,
                                     RngStream& rng, std::vector<int>& flags) {
    cfg.validate();
    const std::size_t n = series.values.size();

    // indicators and outlier values first: independent of the observations
    if (cfg.patchy)
        flags = patchy_indicator(n, cfg.patchy->epsilon, cfg.patchy->l, rng);
    else {
        flags.assign(n, 0);
        for (auto& v : flags) v = rng.bernoulli(cfg.gamma) ? 1 : 0;
    }
    std::vector<double> outlier_value(n, cfg.xi);
    if (cfg.value_generator)
        for (auto& v : outlier_value) v = cfg.value_generator(rng);

    SampledSeries out = series;
    out.meta.contaminated = true;
    for (std::size_t m = 0; m < n; ++m) {
        if (!flags[m]) continue;
        if (cfg.mode == OutlierMode::Replacement)
            out.values[m] = outlier_value[m];
        else
            out.values[m] = series.values[m] + outlier_value[m];
    }
    return out;
}

}  // namespace carma
