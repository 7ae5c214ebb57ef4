#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace resest {

/// 64-bit FNV-1a. Stable across platforms, used to name RNG streams and hash configs.
constexpr std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// An independent random stream derived from (seed, name).
///
/// Every signal in a scenario draws from its own stream ("attack_2", "noise_1",
/// "disturbance", ...), so adding or removing one signal leaves the draws of all
/// the others untouched.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view name) {
        const std::uint64_t tag = fnv1a64(name);
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
        engine_.seed(seq);
    }

    /// Uniform on the open interval (0, 1).
    double open_unit() {
        const std::uint64_t bits = engine_() >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    /// Uniform on the open interval (lo, hi); requires lo < hi.
    double uniform(double lo, double hi) {
        const double v = lo + (hi - lo) * open_unit();
        if (v <= lo) return std::nextafter(lo, hi);
        if (v >= hi) return std::nextafter(hi, lo);
        return v;
    }

    double normal(double mean, double stddev) {
        std::normal_distribution<double> dist(mean, stddev);
        return dist(engine_);
    }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace resest
