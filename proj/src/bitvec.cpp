#include "pufauth/bitvec.hpp"

#include <bit>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace pufauth {

namespace {
constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t nbits) { return (nbits + kWordBits - 1) / kWordBits; }
}  // namespace

BitVector::BitVector(std::size_t nbits) : nbits_(nbits), words_(word_count(nbits), 0) {}

BitVector BitVector::from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        char c = bits[i];
        if (c != '0' && c != '1') throw std::invalid_argument("BitVector: bad character in bit string");
        if (c == '1') v.set(i, true);
    }
    return v;
}

BitVector BitVector::from_bytes(const std::vector<std::uint8_t>& bytes, std::size_t nbits) {
    if (bytes.size() != (nbits + 7) / 8)
        throw std::invalid_argument("BitVector: byte count does not match bit count");
    BitVector v(nbits);
    for (std::size_t i = 0; i < nbits; ++i)
        if ((bytes[i / 8] >> (i % 8)) & 1) v.set(i, true);
    return v;
}

bool BitVector::get(std::size_t i) const {
    if (i >= nbits_) throw std::out_of_range("BitVector: index out of range");
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1;
}

void BitVector::set(std::size_t i, bool v) {
    if (i >= nbits_) throw std::out_of_range("BitVector: index out of range");
    std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
    if (v)
        words_[i / kWordBits] |= mask;
    else
        words_[i / kWordBits] &= ~mask;
}

void BitVector::flip(std::size_t i) { set(i, !get(i)); }

std::size_t BitVector::popcount() const {
    std::size_t total = 0;
    for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
}

BitVector BitVector::slice(std::size_t offset, std::size_t len) const {
    if (offset + len > nbits_) throw std::out_of_range("BitVector: slice out of range");
    BitVector out(len);
    for (std::size_t i = 0; i < len; ++i)
        if (get(offset + i)) out.set(i, true);
    return out;
}

std::vector<std::uint8_t> BitVector::to_bytes() const {
    std::vector<std::uint8_t> bytes((nbits_ + 7) / 8, 0);
    for (std::size_t i = 0; i < nbits_; ++i)
        if (get(i)) bytes[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    return bytes;
}

std::string BitVector::to_string() const {
    std::string s(nbits_, '0');
    for (std::size_t i = 0; i < nbits_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

void BitVector::clear_trailing() {
    std::size_t used = nbits_ % kWordBits;
    if (used != 0 && !words_.empty())
        words_.back() &= (std::uint64_t{1} << used) - 1;
}

BitVector BitVector::operator^(const BitVector& other) const {
    if (nbits_ != other.nbits_) throw std::invalid_argument("BitVector: length mismatch in XOR");
    BitVector out(nbits_);
    for (std::size_t w = 0; w < words_.size(); ++w) out.words_[w] = words_[w] ^ other.words_[w];
    return out;
}

BitVector BitVector::operator~() const {
    BitVector out(nbits_);
    for (std::size_t w = 0; w < words_.size(); ++w) out.words_[w] = ~words_[w];
    out.clear_trailing();
    return out;
}

std::size_t hamming_distance(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: length mismatch");
    return (a ^ b).popcount();
}

double normalized_hd(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("normalized_hd: length mismatch");
    if (a.empty()) throw std::invalid_argument("normalized_hd: empty responses");
    return static_cast<double>(hamming_distance(a, b)) / static_cast<double>(a.size());
}

double uniformity(const BitVector& r) {
    if (r.empty()) throw std::invalid_argument("uniformity: empty response");
    return static_cast<double>(r.popcount()) / static_cast<double>(r.size());
}

std::vector<BitVector> partition_response(const BitVector& r, std::size_t block_bits) {
    if (block_bits == 0 || r.size() % block_bits != 0)
        throw std::invalid_argument("partition_response: block size must divide response length");
    std::vector<BitVector> blocks;
    blocks.reserve(r.size() / block_bits);
    for (std::size_t off = 0; off < r.size(); off += block_bits)
        blocks.push_back(r.slice(off, block_bits));
    return blocks;
}

void write_response_record(std::ostream& out, const BitVector& r) {
    std::uint32_t n = static_cast<std::uint32_t>(r.size());
    std::uint8_t hdr[4] = {static_cast<std::uint8_t>(n >> 24), static_cast<std::uint8_t>(n >> 16),
                           static_cast<std::uint8_t>(n >> 8), static_cast<std::uint8_t>(n)};
    out.write(reinterpret_cast<const char*>(hdr), 4);
    auto bytes = r.to_bytes();
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write_response_record: stream write failed");
}

bool try_read_response_record(std::istream& in, BitVector& out) {
    std::uint8_t hdr[4];
    in.read(reinterpret_cast<char*>(hdr), 4);
    if (in.gcount() == 0 && in.eof()) return false;
    if (in.gcount() != 4) throw std::runtime_error("response record: truncated length prefix");
    std::uint32_t n = (static_cast<std::uint32_t>(hdr[0]) << 24) | (static_cast<std::uint32_t>(hdr[1]) << 16) |
                      (static_cast<std::uint32_t>(hdr[2]) << 8) | static_cast<std::uint32_t>(hdr[3]);
    std::vector<std::uint8_t> bytes((n + 7) / 8);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (static_cast<std::size_t>(in.gcount()) != bytes.size())
        throw std::runtime_error("response record: truncated payload");
    out = BitVector::from_bytes(bytes, n);
    return true;
}

BitVector read_response_record(std::istream& in) {
    BitVector v;
    if (!try_read_response_record(in, v)) throw std::runtime_error("response record: unexpected end of stream");
    return v;
}

}  // namespace pufauth
