#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pufauth/hamming.hpp"
#include "pufauth/net.hpp"
#include "pufauth/puf_model.hpp"

namespace pufauth {

// Where the entity's PUF readings come from. A stabilized read is one
// majority-voted value over the challenged cell window.
class PufSource {
public:
    virtual ~PufSource() = default;
    virtual BitVector stabilized_window_read(std::uint32_t offset, std::uint32_t n,
                                             unsigned votes) = 0;
    // Full array width, for validating challenge bounds.
    virtual std::size_t cells() const = 0;
};

// Simulated device: every raw read powers up the whole array, then the
// challenged window is sliced out.
class SimulatedSource : public PufSource {
public:
    SimulatedSource(PufDevice device, std::uint64_t read_seed);
    BitVector stabilized_window_read(std::uint32_t offset, std::uint32_t n,
                                     unsigned votes) override;
    std::size_t cells() const override { return device_.n_cells; }

private:
    PufDevice device_;
    Rng rng_;
};

// Replays raw reads from a dump file (concatenated response records); each
// vote consumes one record, cycling back to the start when exhausted.
class DumpSource : public PufSource {
public:
    explicit DumpSource(const std::filesystem::path& path);
    BitVector stabilized_window_read(std::uint32_t offset, std::uint32_t n,
                                     unsigned votes) override;
    std::size_t cells() const override;
    std::size_t record_count() const { return records_.size(); }

private:
    std::vector<BitVector> records_;
    std::size_t next_ = 0;
};

struct EntityConfig {
    std::string host = "127.0.0.1";
    std::uint16_t port = 0;
    std::string device_id;
    std::filesystem::path helper_dir;  // entity NVS analogue
};

struct EnrollOutcome {
    std::uint32_t stored_bits = 0;
    std::uint32_t helper_bytes = 0;
    std::filesystem::path helper_path;  // empty when no helper persisted locally
};

struct AuthOutcome {
    bool accepted = false;
    std::uint32_t hd_bits = 0;
    std::uint32_t threshold_bits = 0;
    std::uint32_t n = 0;
    double tau = 0.0;
    double measured_ber = 0.0;
    bool decoded_at_entity = false;
    proto::DecodeStats stats;
};

class EntityClient {
public:
    EntityClient(EntityConfig config, std::unique_ptr<PufSource> source);

    EnrollOutcome enroll(std::uint32_t offset, std::uint32_t n, unsigned votes,
                         std::optional<HammingVariant> variant, bool overwrite = false,
                         bool ec_at_verifier = false);
    // Without a selector the verifier authenticates against the device's
    // latest enrollment.
    AuthOutcome authenticate(std::optional<std::pair<std::uint32_t, std::uint32_t>> selector =
                                 std::nullopt);

    // Session bodies over an arbitrary stream, for tests and frame capture.
    EnrollOutcome enroll_over(net::Stream& stream, std::uint32_t offset, std::uint32_t n,
                              unsigned votes, std::optional<HammingVariant> variant,
                              bool overwrite, bool ec_at_verifier);
    AuthOutcome authenticate_over(net::Stream& stream,
                                  std::optional<std::pair<std::uint32_t, std::uint32_t>> selector =
                                      std::nullopt);

    std::filesystem::path helper_path(std::uint32_t offset, std::uint32_t n) const;

private:
    EntityConfig config_;
    std::unique_ptr<PufSource> source_;
};

}  // namespace pufauth
