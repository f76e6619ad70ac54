#pragma once

#include <functional>
#include <optional>

#include "carma/rng.hpp"
#include "carma/types.hpp"

namespace carma {

enum class OutlierMode { Replacement, Additive };

struct PatchyTemporal {
    int l = 4;            // patch length parameter, window is l+1 draws
    double epsilon = 0.0; // Bernoulli success probability of the B-sequence
};

/// Outlier injection settings. For the isolated model the indicator V_m is
/// i.i.d. Bernoulli(gamma); for the patchy model V_m = max(B_{m-l},...,B_m).
/// The outlier value defaults to the constant xi; a custom generator must be
/// stationary and independent of the series.
struct OutlierConfig {
    double gamma = 0.0;
    OutlierMode mode = OutlierMode::Additive;
    double xi = 0.0;
    std::function<double(RngStream&)> value_generator;  // optional, overrides xi
    std::optional<PatchyTemporal> patchy;

    void validate() const;
};

/// Indicator sequence V with V_m = max of the last l+1 Bernoulli(epsilon)
/// draws; indices before l use only the available history.
std::vector<int> patchy_indicator(std::size_t n, double epsilon, int l, RngStream& rng);

/// Apply the disturbed-process transform. Indicators and outlier values are
/// drawn before the input is read, so they are independent of the series.
SampledSeries contaminate(const SampledSeries& series, const OutlierConfig& cfg, RngStream& rng);

/// Same as contaminate but also reports the indicator sequence (used for
/// plot overlays).
SampledSeries contaminate_with_flags(const SampledSeries& series, const OutlierConfig& cfg,
                                     RngStream& rng, std::vector<int>& flags);

}  // namespace carma
