#pragma once

#include <cstdint>
#include <random>

namespace carma {

/// Role of a random stream within one replication. Streams with different
/// roles are statistically independent even under the same master seed.
enum class StreamRole : std::uint64_t {
    DataDriver = 1,
    Outliers = 2,
    SimDriver = 3,
    SimBurnin = 4,
    Optimizer = 5,
    Generic = 6,
};

/// splitmix64 finalizer; good avalanche, used to derive stream keys.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// A seeded random stream keyed by (master seed, replication index, role).
/// Distinct keys give independent streams, so replications can run on any
/// thread schedule and still reproduce bit-identically.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t replication, StreamRole role)
        : engine_(derive_key(master_seed, replication, role)) {}

    explicit RngStream(std::uint64_t raw_seed) : engine_(raw_seed) {}

    static std::uint64_t derive_key(std::uint64_t master_seed, std::uint64_t replication,
                                    StreamRole role) {
        std::uint64_t k = mix64(master_seed);
        k = mix64(k ^ (0x517cc1b727220a95ULL * (replication + 1)));
        k = mix64(k ^ (static_cast<std::uint64_t>(role) << 32));
        return k;
    }

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    bool bernoulli(double p) { return uniform_(engine_) < p; }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace carma
