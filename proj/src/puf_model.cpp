#include "pufauth/puf_model.hpp"

#include <cstdio>
#include "json.hpp"
#include <stdexcept>

namespace pufauth {

void NoiseProfile::validate() const {
    if (fraction_unstable < 0.0 || fraction_unstable > 1.0)
        throw std::invalid_argument("NoiseProfile: fraction_unstable must be in [0,1]");
    if (!(stable_eps >= 0.0 && stable_eps < unstable_max && unstable_max <= 0.5))
        throw std::invalid_argument("NoiseProfile: need 0 <= stable_eps < unstable_max <= 0.5");
}

BitVector make_wafer_pattern(std::uint64_t master_seed, std::size_t n, double bias_q) {
    Rng rng(derive_seed(master_seed, hash_string("wafer")));
    BitVector v(n);
    for (std::size_t i = 0; i < n; ++i)
        if (rng.bernoulli(bias_q)) v.set(i, true);
    return v;
}

PufDevice generate_device(std::uint64_t master_seed, const std::string& device_id,
                          std::size_t n, const NoiseProfile& noise, double bias_q,
                          double rho_chip, const BitVector* wafer_pattern) {
    noise.validate();
    if (!(bias_q > 0.0 && bias_q < 1.0))
        throw std::invalid_argument("generate_device: bias_q must be in (0,1)");
    if (!(rho_chip >= 0.0 && rho_chip < 1.0))
        throw std::invalid_argument("generate_device: rho_chip must be in [0,1)");
    if (rho_chip > 0.0) {
        if (wafer_pattern == nullptr)
            throw std::invalid_argument("generate_device: rho_chip > 0 requires a wafer pattern");
        if (wafer_pattern->size() != n)
            throw std::invalid_argument("generate_device: wafer pattern length mismatch");
    }

    PufDevice dev;
    dev.device_id = device_id;
    dev.n_cells = n;
    dev.bias_q = bias_q;
    dev.rho_chip = rho_chip;
    dev.seed = derive_seed(master_seed, hash_string(device_id));
    dev.stable_value = BitVector(n);
    dev.flip_prob.resize(n);

    Rng rng(dev.seed);
    for (std::size_t i = 0; i < n; ++i) {
        bool bit;
        if (rho_chip > 0.0 && rng.bernoulli(rho_chip))
            bit = wafer_pattern->get(i);
        else
            bit = rng.bernoulli(bias_q);
        if (bit) dev.stable_value.set(i, true);

        if (rng.bernoulli(noise.fraction_unstable)) {
            // uniform over (stable_eps, unstable_max]
            dev.flip_prob[i] = noise.unstable_max - rng.unit() * (noise.unstable_max - noise.stable_eps);
        } else {
            dev.flip_prob[i] = noise.stable_eps;
        }
    }
    return dev;
}

BitVector sample_window(const PufDevice& dev, std::size_t offset, std::size_t len, Rng& rng) {
    if (offset + len > dev.n_cells)
        throw std::out_of_range("sample_window: window exceeds device size");
    BitVector out(len);
    for (std::size_t i = 0; i < len; ++i) {
        bool bit = dev.stable_value.get(offset + i);
        if (rng.bernoulli(dev.flip_prob[offset + i])) bit = !bit;
        if (bit) out.set(i, true);
    }
    return out;
}

BitVector sample_response(const PufDevice& dev, Rng& rng) {
    return sample_window(dev, 0, dev.n_cells, rng);
}

Fleet make_fleet(std::uint64_t master_seed, std::size_t count, std::size_t n,
                 const NoiseProfile& noise, double bias_q, double rho_chip) {
    Fleet fleet;
    fleet.master_seed = master_seed;
    fleet.noise = noise;
    BitVector wafer;
    const BitVector* wafer_ptr = nullptr;
    if (rho_chip > 0.0) {
        wafer = make_wafer_pattern(master_seed, n, bias_q);
        wafer_ptr = &wafer;
    }
    char id[32];
    for (std::size_t d = 0; d < count; ++d) {
        std::snprintf(id, sizeof(id), "dev%02zu", d);
        fleet.devices.push_back(generate_device(master_seed, id, n, noise, bias_q, rho_chip, wafer_ptr));
    }
    return fleet;
}

std::string fleet_to_json(const Fleet& f) {
    nlohmann::json j;
    j["format"] = "pufauth-fleet-v1";
    j["master_seed"] = f.master_seed;
    j["noise"] = {{"fraction_unstable", f.noise.fraction_unstable},
                  {"stable_eps", f.noise.stable_eps},
                  {"unstable_max", f.noise.unstable_max}};
    j["devices"] = nlohmann::json::array();
    for (const auto& d : f.devices)
        j["devices"].push_back({{"id", d.device_id},
                                {"n", d.n_cells},
                                {"bias_q", d.bias_q},
                                {"rho_chip", d.rho_chip}});
    return j.dump(2);
}

Fleet fleet_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("format", "") != "pufauth-fleet-v1")
        throw std::invalid_argument("fleet_from_json: unknown document format");
    Fleet fleet;
    fleet.master_seed = j.at("master_seed").get<std::uint64_t>();
    fleet.noise.fraction_unstable = j.at("noise").at("fraction_unstable").get<double>();
    fleet.noise.stable_eps = j.at("noise").at("stable_eps").get<double>();
    fleet.noise.unstable_max = j.at("noise").at("unstable_max").get<double>();
    for (const auto& dj : j.at("devices")) {
        auto n = dj.at("n").get<std::size_t>();
        auto bias_q = dj.at("bias_q").get<double>();
        auto rho = dj.at("rho_chip").get<double>();
        BitVector wafer;
        const BitVector* wafer_ptr = nullptr;
        if (rho > 0.0) {
            wafer = make_wafer_pattern(fleet.master_seed, n, bias_q);
            wafer_ptr = &wafer;
        }
        fleet.devices.push_back(generate_device(fleet.master_seed, dj.at("id").get<std::string>(),
                                                n, fleet.noise, bias_q, rho, wafer_ptr));
    }
    return fleet;
}

}  // namespace pufauth
