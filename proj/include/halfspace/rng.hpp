#pragma once

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, index, slot), so sample i of a run is the same no matter
// which worker produces it or in what order.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace halfspace::rng {

inline constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t hash_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                                        std::uint64_t slot) noexcept {
    std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc908ULL);
    h = splitmix64(h ^ stream);
    h = splitmix64(h ^ index);
    return splitmix64(h ^ slot);
}

/// Uniform double in [0, 1) with 53 random bits.
inline constexpr double to_unit(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Stream identifiers keep independent uses of one seed apart.
enum class Stream : std::uint64_t {
    Training = 1,
    Evaluation = 2,
    SgdSteps = 3,
    Directions = 4,
    Density = 5,
};

/// Sequential view over one (seed, stream, index) key. Cheap to construct.
class CounterRng {
public:
    constexpr CounterRng(std::uint64_t seed, Stream stream, std::uint64_t index) noexcept
        : seed_(seed), stream_(static_cast<std::uint64_t>(stream)), index_(index) {}

    constexpr double uniform() noexcept { return to_unit(hash_key(seed_, stream_, index_, slot_++)); }

    /// Uniform in (0, 1]; safe as a log argument.
    constexpr double uniform_open_low() noexcept { return 1.0 - uniform(); }

    /// Standard normal via Box-Muller; consumes two slots per pair.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open_low();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t index_;
    std::uint64_t slot_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace halfspace::rng
