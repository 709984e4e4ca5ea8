#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pufauth/bitvec.hpp"

namespace pufauth {

// Code geometry. data_bits in {4, 8, 16}; the extended (SECDED) form appends
// one overall parity bit to the SEC codeword.
//
//   SEC:    H(7,4)  H(12,8)  H(21,16)
//   SECDED: H(8,4)  H(13,8)  H(22,16)
struct HammingVariant {
    unsigned data_bits = 4;
    bool extended = false;

    static HammingVariant make(unsigned data_bits, bool extended);

    unsigned codeword_bits() const;
    // Codeword length without the extended bit (the plain SEC length).
    unsigned base_bits() const { return codeword_bits() - (extended ? 1u : 0u); }
    unsigned parity_bits() const { return codeword_bits() - data_bits; }
    double code_rate() const { return static_cast<double>(data_bits) / codeword_bits(); }

    std::string name() const;  // "H(7,4)"
    // File/wire tag: low 2 bits data width (0=4, 1=8, 2=16), bit 2 extended.
    std::uint8_t tag() const;
    static HammingVariant from_tag(std::uint8_t tag);

    bool operator==(const HammingVariant&) const = default;
};

// nullopt means no error correction. Accepts "none", "H(7,4)", "h7-4", "7-4".
std::optional<HammingVariant> parse_variant(std::string_view name);
std::string variant_name(const std::optional<HammingVariant>& v);
constexpr std::uint8_t kNoVariantTag = 0xFF;

// The six supported variants in code-rate order (strongest correction first).
const std::vector<HammingVariant>& all_variants();

// Parity bits persisted at enrollment: one packed byte per codeword,
// p1 at bit 0 upward, extended parity (if any) at bit parity_bits-1,
// unused high bits zero. Data bits are never stored.
struct HelperData {
    HammingVariant variant;
    std::vector<std::uint8_t> parity_blocks;

    std::size_t codeword_count() const { return parity_blocks.size(); }
};

// Per-block decode accounting. Exactly one outcome per codeword:
//   clean               syndrome zero (and overall parity consistent)
//   single_corrected    one position flipped, data or parity
//   double_detected     SECDED only: two errors flagged, block left as read
//   miscorrection_possible  syndrome addresses a position outside the
//                           codeword; only multi-bit errors do this, so the
//                           block is left as read
struct DecodeReport {
    BitVector corrected;
    std::size_t clean = 0;
    std::size_t single_corrected = 0;
    std::size_t double_detected = 0;
    std::size_t miscorrection_possible = 0;
    std::size_t bit_flips_applied = 0;

    std::size_t codeword_count() const {
        return clean + single_corrected + double_detected + miscorrection_possible;
    }
};

// Splits data into data_bits-sized blocks and computes each block's parity.
// Length must divide evenly; responses are never padded.
HelperData enroll_helper(const BitVector& data, HammingVariant variant);

// Reconstructs each codeword from raw data bits plus stored parity and applies
// syndrome-based SEC or SECDED in one pass. Corrections addressing parity
// positions do not alter the returned data.
DecodeReport decode(const BitVector& raw, const HelperData& helper);

struct ParityFootprint {
    std::size_t blocks = 0;
    std::size_t parity_bits = 0;
    std::size_t nvs_bytes = 0;
    double code_rate = 0.0;
};
ParityFootprint parity_footprint(HammingVariant variant, std::size_t response_bytes);

// Helper-data file: magic "PUFH", version byte, variant tag byte,
// u32 big-endian codeword count, then one parity byte per codeword.
void write_helper(std::ostream& out, const HelperData& helper);
HelperData read_helper(std::istream& in);
std::vector<std::uint8_t> helper_to_bytes(const HelperData& helper);
HelperData helper_from_bytes(const std::vector<std::uint8_t>& bytes);

namespace detail {
// Single-codeword primitives, exposed for exhaustive tests. Codeword bits are
// 1-based: parity at power-of-two positions, data filling the rest ascending,
// extended parity (if any) at position codeword_bits.
std::uint32_t encode_block(std::uint32_t data, HammingVariant variant);
std::uint32_t data_from_codeword(std::uint32_t codeword, HammingVariant variant);
std::uint8_t parity_byte_from_codeword(std::uint32_t codeword, HammingVariant variant);
}  // namespace detail

}  // namespace pufauth
