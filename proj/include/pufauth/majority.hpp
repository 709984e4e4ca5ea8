#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "pufauth/bitvec.hpp"
#include "pufauth/puf_model.hpp"

namespace pufauth {

// Per-bit vote counters over N readings. Serializable at any intermediate
// votes_seen so a half-finished round survives a device power cycle.
class MajorityAccumulator {
public:
    MajorityAccumulator(std::size_t n, unsigned target_votes);

    void accumulate(const BitVector& reading);
    // Strict majority: bit = 1 iff 2*counter > N; ties at even N resolve to 0.
    BitVector finalize() const;

    std::size_t n() const { return n_; }
    unsigned target_votes() const { return target_votes_; }
    unsigned votes_seen() const { return votes_seen_; }
    const std::vector<std::uint8_t>& counters() const { return counters_; }

    // Snapshot: version byte, u32 BE n, u8 N, u8 votes_seen, n counter bytes.
    void save(std::ostream& out) const;
    static MajorityAccumulator load(std::istream& in);

    bool operator==(const MajorityAccumulator&) const = default;

private:
    std::size_t n_;
    unsigned target_votes_;
    unsigned votes_seen_ = 0;
    std::vector<std::uint8_t> counters_;
};

// N sample_response() calls folded through accumulate/finalize.
BitVector stabilized_read(const PufDevice& device, unsigned votes, Rng& rng);

// Several stabilized reads from one RNG stream, for repeated-auth experiments.
std::vector<BitVector> stabilized_window(const PufDevice& device, unsigned votes,
                                         std::size_t count, Rng& rng);

}  // namespace pufauth
