#ifndef CENSIM_RNG_HPP
#define CENSIM_RNG_HPP

#include <cstdint>
#include <span>
#include <random>

namespace censim {

// Deterministic random stream.  Every flow (and every tool application)
// gets its own substream derived from the master seed, so parallel and
// serial generation produce identical traces.  All sampling goes through
// hand-rolled transforms on raw 64-bit draws; we never rely on the
// stdlib distribution objects, whose output is implementation-defined.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    // Derives an independent substream from (seed, a, b) via splitmix64.
    static RngStream substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1).
    double uniform();
    // Uniform in [lo, hi).
    double uniform(double lo, double hi);
    // Standard Box-Muller normal.
    double normal(double mean, double stddev);
    // Normal restricted to [lo, hi] by rejection; clamps after 1000 tries.
    double truncated_normal(double mean, double stddev, double lo, double hi);
    // Exponential with the given mean.
    double exponential(double mean);
    // Index into a weight vector (weights need not be normalized).
    std::size_t categorical(std::span<const double> weights);

private:
    std::mt19937_64 gen_;
};

// splitmix64 finalizer, also used for seed mixing.
std::uint64_t mix64(std::uint64_t x);

} // namespace censim

#endif
