// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace seco {

// Seeded generator with a fully specified output stream: mt19937_64 for raw
// bits, and hand-written transforms for uniform and normal variates (the
// standard distributions are implementation-defined, so they would break
// byte-identical output across toolchains).
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, bound); bound must be non-zero.
    std::uint64_t below(std::uint64_t bound);

    /// Standard normal via Box-Muller; caches the second variate.
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Independent generator for substream `stream`, derived from this
    /// generator's seed only (not its current position).
    Rng fork(std::uint64_t stream) const;

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace seco
