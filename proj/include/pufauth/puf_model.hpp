#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pufauth/bitvec.hpp"
#include "pufauth/rng.hpp"

namespace pufauth {

// Two-population cell noise: most cells flip with probability stable_eps,
// a fraction_unstable share draws its flip probability from
// (stable_eps, unstable_max].
struct NoiseProfile {
    double fraction_unstable = 0.05;
    double stable_eps = 0.001;
    double unstable_max = 0.5;

    void validate() const;
};

// Simulated SRAM cell array. stable_value is the noise-free power-up word;
// flip_prob[i] is the chance a single reading of cell i deviates from it.
struct PufDevice {
    std::string device_id;
    std::size_t n_cells = 0;
    BitVector stable_value;
    std::vector<double> flip_prob;
    double bias_q = 0.5;
    double rho_chip = 0.0;
    std::uint64_t seed = 0;
};

// Shared wafer pattern for correlated fleets, derived from the master seed.
BitVector make_wafer_pattern(std::uint64_t master_seed, std::size_t n, double bias_q = 0.5);

// Each cell copies the wafer bit with probability rho_chip, otherwise draws
// Bernoulli(bias_q). The device seed is derived from (master_seed, device_id),
// so the same pair regenerates a bit-identical device.
PufDevice generate_device(std::uint64_t master_seed, const std::string& device_id,
                          std::size_t n, const NoiseProfile& noise, double bias_q = 0.5,
                          double rho_chip = 0.0, const BitVector* wafer_pattern = nullptr);

// One power cycle: stable_value XOR per-cell Bernoulli(flip_prob), fresh per call.
BitVector sample_response(const PufDevice& dev, Rng& rng);

// Same, restricted to cells [offset, offset+len). Consumes one draw per sampled cell.
BitVector sample_window(const PufDevice& dev, std::size_t offset, std::size_t len, Rng& rng);

struct Fleet {
    std::uint64_t master_seed = 0;
    NoiseProfile noise;
    std::vector<PufDevice> devices;
};

Fleet make_fleet(std::uint64_t master_seed, std::size_t count, std::size_t n,
                 const NoiseProfile& noise, double bias_q = 0.5, double rho_chip = 0.0);

// Fleet documents carry only the generation parameters; devices are
// regenerated on import.
std::string fleet_to_json(const Fleet& f);
Fleet fleet_from_json(const std::string& text);

}  // namespace pufauth
