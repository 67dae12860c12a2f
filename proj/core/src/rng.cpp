#include "censim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace censim {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngStream RngStream::substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return RngStream(mix64(mix64(mix64(seed) ^ a) ^ b));
}

double RngStream::uniform() {
    // 53 random bits into [0, 1).
    return std::ldexp(static_cast<double>(gen_() >> 11), -53);
}

double RngStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double RngStream::normal(double mean, double stddev) {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return mean + stddev * z;
}

double RngStream::truncated_normal(double mean, double stddev, double lo, double hi) {
    if (lo > hi) throw std::invalid_argument("truncated_normal: lo > hi");
    if (stddev <= 0.0) return std::min(std::max(mean, lo), hi);
    for (int i = 0; i < 1000; ++i) {
        double v = normal(mean, stddev);
        if (v >= lo && v <= hi) return v;
    }
    return std::min(std::max(mean, lo), hi);
}

double RngStream::exponential(double mean) {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return -mean * std::log(u);
}

std::size_t RngStream::categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (total <= 0.0 || weights.empty())
        throw std::invalid_argument("categorical: non-positive total weight");
    double r = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (r < acc) return i;
    }
    return weights.size() - 1;
}

} // namespace censim
