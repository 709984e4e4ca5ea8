#include "pufauth/hamming.hpp"

#include <bit>
#include <cctype>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pufauth {
namespace {

bool is_pow2(unsigned x) { return x != 0 && (x & (x - 1)) == 0; }

unsigned base_bits_for(unsigned data_bits) {
    switch (data_bits) {
        case 4: return 7;
        case 8: return 12;
        case 16: return 21;
        default: throw std::invalid_argument("hamming: data_bits must be 4, 8 or 16");
    }
}

// Syndrome of a received codeword: XOR of the 1-based positions of set bits.
// Zero for every valid codeword; equals the error position for one flip.
std::uint32_t syndrome_of(std::uint32_t cw, unsigned base_bits) {
    std::uint32_t s = 0;
    for (unsigned pos = 1; pos <= base_bits; ++pos)
        if (cw >> (pos - 1) & 1u) s ^= pos;
    return s;
}

}  // namespace

HammingVariant HammingVariant::make(unsigned data_bits, bool extended) {
    base_bits_for(data_bits);  // validates
    return HammingVariant{data_bits, extended};
}

unsigned HammingVariant::codeword_bits() const {
    return base_bits_for(data_bits) + (extended ? 1u : 0u);
}

std::string HammingVariant::name() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "H(%u,%u)", codeword_bits(), data_bits);
    return buf;
}

std::uint8_t HammingVariant::tag() const {
    std::uint8_t width = data_bits == 4 ? 0 : data_bits == 8 ? 1 : 2;
    return static_cast<std::uint8_t>(width | (extended ? 0x04 : 0x00));
}

HammingVariant HammingVariant::from_tag(std::uint8_t tag) {
    if (tag & ~0x07u) throw std::invalid_argument("hamming: bad variant tag");
    unsigned width = tag & 0x03u;
    if (width == 3) throw std::invalid_argument("hamming: bad variant tag width");
    unsigned data_bits = width == 0 ? 4u : width == 1 ? 8u : 16u;
    return make(data_bits, (tag & 0x04u) != 0);
}

std::optional<HammingVariant> parse_variant(std::string_view name) {
    std::string s;
    for (char c : name)
        if (c != ' ') s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s.empty() || s == "none" || s == "off") return std::nullopt;
    if (s.front() == 'h') s.erase(0, 1);
    if (!s.empty() && s.front() == '(') s.erase(0, 1);
    if (!s.empty() && s.back() == ')') s.pop_back();
    auto sep = s.find_first_of(",-/");
    if (sep == std::string::npos) throw std::invalid_argument("hamming: unparseable variant '" + std::string(name) + "'");
    unsigned cw = 0, db = 0;
    try {
        cw = static_cast<unsigned>(std::stoul(s.substr(0, sep)));
        db = static_cast<unsigned>(std::stoul(s.substr(sep + 1)));
    } catch (const std::exception&) {
        throw std::invalid_argument("hamming: unparseable variant '" + std::string(name) + "'");
    }
    for (bool ext : {false, true}) {
        for (unsigned d : {4u, 8u, 16u}) {
            HammingVariant v = HammingVariant::make(d, ext);
            if (v.data_bits == db && v.codeword_bits() == cw) return v;
        }
    }
    throw std::invalid_argument("hamming: unknown variant '" + std::string(name) + "'");
}

std::string variant_name(const std::optional<HammingVariant>& v) {
    return v ? v->name() : "none";
}

const std::vector<HammingVariant>& all_variants() {
    static const std::vector<HammingVariant> table = {
        HammingVariant::make(4, true),   // H(8,4)
        HammingVariant::make(4, false),  // H(7,4)
        HammingVariant::make(8, true),   // H(13,8)
        HammingVariant::make(8, false),  // H(12,8)
        HammingVariant::make(16, true),  // H(22,16)
        HammingVariant::make(16, false), // H(21,16)
    };
    return table;
}

namespace detail {

std::uint32_t encode_block(std::uint32_t data, HammingVariant variant) {
    const unsigned base = variant.base_bits();
    std::uint32_t cw = 0;
    unsigned di = 0;
    for (unsigned pos = 1; pos <= base; ++pos) {
        if (is_pow2(pos)) continue;
        if (data >> di & 1u) cw |= 1u << (pos - 1);
        ++di;
    }
    for (unsigned p = 1; p <= base; p <<= 1) {
        unsigned par = 0;
        for (unsigned pos = 1; pos <= base; ++pos)
            if ((pos & p) && (cw >> (pos - 1) & 1u)) par ^= 1u;
        if (par) cw |= 1u << (p - 1);
    }
    if (variant.extended) {
        if (std::popcount(cw) & 1) cw |= 1u << base;
    }
    return cw;
}

std::uint32_t data_from_codeword(std::uint32_t codeword, HammingVariant variant) {
    const unsigned base = variant.base_bits();
    std::uint32_t data = 0;
    unsigned di = 0;
    for (unsigned pos = 1; pos <= base; ++pos) {
        if (is_pow2(pos)) continue;
        if (codeword >> (pos - 1) & 1u) data |= 1u << di;
        ++di;
    }
    return data;
}

std::uint8_t parity_byte_from_codeword(std::uint32_t codeword, HammingVariant variant) {
    const unsigned base = variant.base_bits();
    std::uint8_t byte = 0;
    unsigned pi = 0;
    for (unsigned p = 1; p <= base; p <<= 1, ++pi)
        if (codeword >> (p - 1) & 1u) byte |= static_cast<std::uint8_t>(1u << pi);
    if (variant.extended && (codeword >> base & 1u))
        byte |= static_cast<std::uint8_t>(1u << pi);
    return byte;
}

}  // namespace detail

HelperData enroll_helper(const BitVector& data, HammingVariant variant) {
    const unsigned d = variant.data_bits;
    if (data.size() % d != 0)
        throw std::invalid_argument("hamming: data length not divisible by data_bits");
    HelperData helper{variant, {}};
    helper.parity_blocks.reserve(data.size() / d);
    for (std::size_t off = 0; off < data.size(); off += d) {
        std::uint32_t block = 0;
        for (unsigned i = 0; i < d; ++i)
            if (data.get(off + i)) block |= 1u << i;
        std::uint32_t cw = detail::encode_block(block, variant);
        helper.parity_blocks.push_back(detail::parity_byte_from_codeword(cw, variant));
    }
    return helper;
}

DecodeReport decode(const BitVector& raw, const HelperData& helper) {
    const HammingVariant variant = helper.variant;
    const unsigned d = variant.data_bits;
    const unsigned base = variant.base_bits();
    if (raw.size() != helper.codeword_count() * d)
        throw std::invalid_argument("hamming: raw length does not match helper codeword count");

    DecodeReport report;
    report.corrected = raw;
    for (std::size_t b = 0; b < helper.codeword_count(); ++b) {
        const std::size_t off = b * d;

        // Rebuild the received codeword: raw data bits + enrolled parity byte.
        std::uint32_t cw = 0;
        unsigned di = 0;
        for (unsigned pos = 1; pos <= base; ++pos) {
            if (is_pow2(pos)) continue;
            if (raw.get(off + di)) cw |= 1u << (pos - 1);
            ++di;
        }
        const std::uint8_t stored = helper.parity_blocks[b];
        unsigned pi = 0;
        for (unsigned p = 1; p <= base; p <<= 1, ++pi)
            if (stored >> pi & 1u) cw |= 1u << (p - 1);
        if (variant.extended && (stored >> pi & 1u)) cw |= 1u << base;

        const std::uint32_t s = syndrome_of(cw, base);
        // flip_pos: 1-based codeword position to flip, 0 for none.
        std::uint32_t flip_pos = 0;
        if (!variant.extended) {
            if (s == 0) {
                ++report.clean;
            } else if (s <= base) {
                flip_pos = s;
                ++report.single_corrected;
            } else {
                // Syndrome addresses a position past the codeword end: only a
                // multi-bit error can do this. Leave the block as read.
                ++report.miscorrection_possible;
            }
        } else {
            const bool parity_odd = std::popcount(cw) & 1;
            if (s == 0 && !parity_odd) {
                ++report.clean;
            } else if (s == 0) {
                // The extended bit itself flipped; data is intact.
                ++report.single_corrected;
            } else if (parity_odd) {
                if (s <= base) {
                    flip_pos = s;
                    ++report.single_corrected;
                } else {
                    ++report.miscorrection_possible;
                }
            } else {
                // Nonzero syndrome with consistent overall parity: two errors.
                // Suppress the would-be miscorrection and return data as read.
                ++report.double_detected;
            }
        }

        if (flip_pos != 0 && !is_pow2(flip_pos)) {
            // Map codeword position back to its data index within the block.
            unsigned idx = 0;
            for (unsigned pos = 1; pos < flip_pos; ++pos)
                if (!is_pow2(pos)) ++idx;
            report.corrected.flip(off + idx);
            ++report.bit_flips_applied;
        }
    }
    return report;
}

ParityFootprint parity_footprint(HammingVariant variant, std::size_t response_bytes) {
    const std::size_t bits = response_bytes * 8;
    if (bits % variant.data_bits != 0)
        throw std::invalid_argument("hamming: response length not divisible by data_bits");
    ParityFootprint f;
    f.blocks = bits / variant.data_bits;
    f.parity_bits = f.blocks * variant.parity_bits();
    f.nvs_bytes = f.blocks;
    f.code_rate = variant.code_rate();
    return f;
}

namespace {
constexpr char kHelperMagic[4] = {'P', 'U', 'F', 'H'};
constexpr std::uint8_t kHelperVersion = 1;
}  // namespace

void write_helper(std::ostream& out, const HelperData& helper) {
    out.write(kHelperMagic, 4);
    out.put(static_cast<char>(kHelperVersion));
    out.put(static_cast<char>(helper.variant.tag()));
    const auto count = static_cast<std::uint32_t>(helper.codeword_count());
    char hdr[4] = {
        static_cast<char>(count >> 24), static_cast<char>(count >> 16),
        static_cast<char>(count >> 8), static_cast<char>(count)};
    out.write(hdr, 4);
    out.write(reinterpret_cast<const char*>(helper.parity_blocks.data()),
              static_cast<std::streamsize>(helper.parity_blocks.size()));
    if (!out) throw std::runtime_error("hamming: helper write failed");
}

HelperData read_helper(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::string_view(magic, 4) != std::string_view(kHelperMagic, 4))
        throw std::runtime_error("hamming: bad helper magic");
    const int version = in.get();
    if (version != kHelperVersion)
        throw std::runtime_error("hamming: unsupported helper version");
    const int tag = in.get();
    if (tag < 0) throw std::runtime_error("hamming: truncated helper header");
    HelperData helper{HammingVariant::from_tag(static_cast<std::uint8_t>(tag)), {}};
    char hdr[4];
    if (!in.read(hdr, 4)) throw std::runtime_error("hamming: truncated helper header");
    const std::uint32_t count = (static_cast<std::uint32_t>(static_cast<std::uint8_t>(hdr[0])) << 24) |
                                (static_cast<std::uint32_t>(static_cast<std::uint8_t>(hdr[1])) << 16) |
                                (static_cast<std::uint32_t>(static_cast<std::uint8_t>(hdr[2])) << 8) |
                                static_cast<std::uint32_t>(static_cast<std::uint8_t>(hdr[3]));
    helper.parity_blocks.resize(count);
    if (count > 0 &&
        !in.read(reinterpret_cast<char*>(helper.parity_blocks.data()), count))
        throw std::runtime_error("hamming: truncated helper payload");
    return helper;
}

std::vector<std::uint8_t> helper_to_bytes(const HelperData& helper) {
    std::ostringstream out(std::ios::binary);
    write_helper(out, helper);
    const std::string s = out.str();
    return {s.begin(), s.end()};
}

HelperData helper_from_bytes(const std::vector<std::uint8_t>& bytes) {
    std::istringstream in(std::string(bytes.begin(), bytes.end()), std::ios::binary);
    return read_helper(in);
}

}  // namespace pufauth
