// rng.hpp - seed derivation and the engine every random draw goes through.

#pragma once

#include "scrambling/core.hpp"

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace scrambling {

using Engine = std::mt19937_64;

// splitmix64 finaliser
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Order-sensitive mix of a parent seed with any number of child keys.
constexpr Seed derive_seed(Seed parent, std::initializer_list<std::uint64_t> keys) noexcept {
    Seed s = splitmix64(parent);
    for (auto k : keys) s = splitmix64(s ^ splitmix64(k + 0x632be59bd9b4e019ULL));
    return s;
}

inline std::uint64_t bits_of(double x) noexcept {
    if (x == 0.0) x = 0.0;  // fold -0.0 onto +0.0
    return std::bit_cast<std::uint64_t>(x);
}

// Seed of one sweep cell. gamma enters through its bit pattern so the
// single-cell CLI path and the sweep agree without knowing grid indices.
inline Seed cell_seed(Seed master, int n_qubits, double gamma, int realization) noexcept {
    return derive_seed(master, {static_cast<std::uint64_t>(n_qubits), bits_of(gamma),
                                static_cast<std::uint64_t>(realization)});
}

inline Engine make_engine(Seed seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    return Engine(seq);
}

} // namespace scrambling
