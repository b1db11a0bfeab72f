#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ergoprobe {

inline constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ mix64(b + 0x632be59bd9b4e019ULL));
}

// Stateless generator: every draw is a pure function of (seed, stream, counter),
// so values do not depend on evaluation order or thread count.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(hash_combine(seed, stream)) {}

    constexpr std::uint64_t bits(std::uint64_t counter) const { return hash_combine(key_, counter); }

    // Uniform on the open interval (0, 1).
    double uniform(std::uint64_t counter) const {
        return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal(std::uint64_t counter) const {
        const double u1 = uniform(2 * counter);
        const double u2 = uniform(2 * counter + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t key_;
};

}  // namespace ergoprobe
