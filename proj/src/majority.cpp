#include "pufauth/majority.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

namespace pufauth {

MajorityAccumulator::MajorityAccumulator(std::size_t n, unsigned target_votes)
    : n_(n), target_votes_(target_votes), counters_(n, 0) {
    if (n == 0) throw std::invalid_argument("majority: n must be positive");
    if (target_votes == 0) throw std::invalid_argument("majority: target_votes must be >= 1");
    if (target_votes > 255) throw std::invalid_argument("majority: target_votes above counter width (max 255)");
}

void MajorityAccumulator::accumulate(const BitVector& reading) {
    if (reading.size() != n_) throw std::invalid_argument("majority: reading length mismatch");
    if (votes_seen_ >= target_votes_) throw std::logic_error("majority: accumulating past target_votes");
    for (std::size_t i = 0; i < n_; ++i)
        counters_[i] = static_cast<std::uint8_t>(counters_[i] + (reading.get(i) ? 1 : 0));
    ++votes_seen_;
}

BitVector MajorityAccumulator::finalize() const {
    if (votes_seen_ != target_votes_) throw std::logic_error("majority: finalize before all votes are in");
    BitVector out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        if (2u * counters_[i] > target_votes_) out.set(i, true);
    return out;
}

namespace {
constexpr std::uint8_t kSnapshotVersion = 1;
}

void MajorityAccumulator::save(std::ostream& out) const {
    out.put(static_cast<char>(kSnapshotVersion));
    const auto n32 = static_cast<std::uint32_t>(n_);
    char hdr[6] = {static_cast<char>(n32 >> 24), static_cast<char>(n32 >> 16),
                   static_cast<char>(n32 >> 8), static_cast<char>(n32),
                   static_cast<char>(target_votes_), static_cast<char>(votes_seen_)};
    out.write(hdr, 6);
    out.write(reinterpret_cast<const char*>(counters_.data()),
              static_cast<std::streamsize>(counters_.size()));
    if (!out) throw std::runtime_error("majority: snapshot write failed");
}

MajorityAccumulator MajorityAccumulator::load(std::istream& in) {
    const int version = in.get();
    if (version != kSnapshotVersion) throw std::runtime_error("majority: unsupported snapshot version");
    char hdr[6];
    if (!in.read(hdr, 6)) throw std::runtime_error("majority: truncated snapshot header");
    const std::uint32_t n = (static_cast<std::uint32_t>(static_cast<std::uint8_t>(hdr[0])) << 24) |
                            (static_cast<std::uint32_t>(static_cast<std::uint8_t>(hdr[1])) << 16) |
                            (static_cast<std::uint32_t>(static_cast<std::uint8_t>(hdr[2])) << 8) |
                            static_cast<std::uint32_t>(static_cast<std::uint8_t>(hdr[3]));
    const auto target = static_cast<std::uint8_t>(hdr[4]);
    const auto seen = static_cast<std::uint8_t>(hdr[5]);
    if (seen > target) throw std::runtime_error("majority: snapshot votes_seen exceeds target");
    MajorityAccumulator acc(n, target);
    if (!in.read(reinterpret_cast<char*>(acc.counters_.data()), n))
        throw std::runtime_error("majority: truncated snapshot counters");
    for (std::uint8_t c : acc.counters_)
        if (c > seen) throw std::runtime_error("majority: snapshot counter exceeds votes_seen");
    acc.votes_seen_ = seen;
    return acc;
}

BitVector stabilized_read(const PufDevice& device, unsigned votes, Rng& rng) {
    MajorityAccumulator acc(device.n_cells, votes);
    for (unsigned v = 0; v < votes; ++v) acc.accumulate(sample_response(device, rng));
    return acc.finalize();
}

std::vector<BitVector> stabilized_window(const PufDevice& device, unsigned votes,
                                         std::size_t count, Rng& rng) {
    std::vector<BitVector> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(stabilized_read(device, votes, rng));
    return out;
}

}  // namespace pufauth
