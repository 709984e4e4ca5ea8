#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pufauth {

// One splitmix64 step. Used for seed derivation, not as a bulk generator.
std::uint64_t splitmix64(std::uint64_t& state);

// FNV-1a, for hashing device ids into seed material.
std::uint64_t hash_string(std::string_view s);

// Mixes a master seed with up to three context words (device hash, cell
// index, ...) into an independent stream seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b = 0, std::uint64_t c = 0);

// Deterministic uniform stream. mt19937_64 output is fully specified by the
// standard, and the unit mapping below avoids the implementation-defined
// std:: distributions, so a seed reproduces the same stream everywhere.
// One instance is owned by one execution context at a time.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0,1), 53-bit resolution.
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return unit() < p; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace pufauth
