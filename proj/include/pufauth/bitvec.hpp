#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pufauth {

// Fixed-length bit string; the unit of challenge-response exchange.
// Bit i lives in word i/64 at bit position i%64. Packed-byte form puts bit
// 8j+k at bit k of byte j (LSB-first), trailing unused bits zero.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t nbits);

    // '0'/'1' characters, char position == bit index.
    static BitVector from_string(std::string_view bits);
    static BitVector from_bytes(const std::vector<std::uint8_t>& bytes, std::size_t nbits);

    std::size_t size() const { return nbits_; }
    bool empty() const { return nbits_ == 0; }

    bool get(std::size_t i) const;
    void set(std::size_t i, bool v);
    void flip(std::size_t i);

    std::size_t popcount() const;
    BitVector slice(std::size_t offset, std::size_t len) const;
    std::vector<std::uint8_t> to_bytes() const;
    std::string to_string() const;

    BitVector operator^(const BitVector& other) const;
    BitVector operator~() const;
    bool operator==(const BitVector& other) const = default;

private:
    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> words_;

    void clear_trailing();
};

// popcount(a XOR b); lengths must match.
std::size_t hamming_distance(const BitVector& a, const BitVector& b);

// hamming_distance / n, in [0,1].
double normalized_hd(const BitVector& a, const BitVector& b);

// Fractional Hamming weight, in [0,1]; rejects empty input.
double uniformity(const BitVector& r);

// Contiguous non-overlapping blocks; block_bits must divide r.size().
std::vector<BitVector> partition_response(const BitVector& r, std::size_t block_bits);

// Binary response record: u32 big-endian bit count, then packed bytes —
// the same encoding responses use on the wire. Records may be concatenated
// in one stream (dump files are exactly that).
void write_response_record(std::ostream& out, const BitVector& r);
BitVector read_response_record(std::istream& in);
// Returns false on clean EOF, throws on a truncated record.
bool try_read_response_record(std::istream& in, BitVector& out);

}  // namespace pufauth
