#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <set>
#include <sstream>

#include "pufauth/hamming.hpp"

using namespace pufauth;

namespace {

// Independent parity-check oracle: a word is a valid codeword iff every
// power-of-two parity group XORs to zero (and, for SECDED, the total weight
// is even). This checks code membership without reusing the syndrome path.
bool oracle_is_codeword(std::uint32_t word, HammingVariant v) {
    const unsigned base = v.base_bits();
    for (unsigned p = 1; p <= base; p <<= 1) {
        unsigned par = 0;
        for (unsigned pos = 1; pos <= base; ++pos)
            if ((pos & p) && (word >> (pos - 1) & 1u)) par ^= 1u;
        if (par) return false;
    }
    if (v.extended && (std::popcount(word & ((1u << v.codeword_bits()) - 1)) & 1)) return false;
    return true;
}

// Data index of a codeword position (positions that are powers of two hold
// parity); returns -1 for parity positions.
int data_index_of_position(unsigned pos) {
    if ((pos & (pos - 1)) == 0) return -1;
    int idx = 0;
    for (unsigned q = 1; q < pos; ++q)
        if ((q & (q - 1)) != 0) ++idx;
    return idx;
}

BitVector data_to_bits(std::uint32_t data, unsigned nbits) {
    BitVector v(nbits);
    for (unsigned i = 0; i < nbits; ++i) v.set(i, (data >> i) & 1u);
    return v;
}

// Index of a parity position inside the packed parity byte.
int parity_byte_index(unsigned pos, HammingVariant v) {
    int pi = 0;
    for (unsigned p = 1; p <= v.base_bits(); p <<= 1, ++pi)
        if (p == pos) return pi;
    if (v.extended && pos == v.codeword_bits()) return pi;  // extended is last
    return -1;
}

}  // namespace

TEST_CASE("variant geometry") {
    CHECK(HammingVariant::make(4, false).name() == "H(7,4)");
    CHECK(HammingVariant::make(4, true).name() == "H(8,4)");
    CHECK(HammingVariant::make(8, false).name() == "H(12,8)");
    CHECK(HammingVariant::make(8, true).name() == "H(13,8)");
    CHECK(HammingVariant::make(16, false).name() == "H(21,16)");
    CHECK(HammingVariant::make(16, true).name() == "H(22,16)");
    CHECK(HammingVariant::make(4, false).parity_bits() == 3);
    CHECK(HammingVariant::make(13 - 5, true).parity_bits() == 5);
    CHECK(HammingVariant::make(16, true).parity_bits() == 6);
    CHECK(HammingVariant::make(16, false).code_rate() == doctest::Approx(16.0 / 21.0));
    CHECK_THROWS_AS(HammingVariant::make(5, false), std::invalid_argument);
}

TEST_CASE("variant tags round trip and reject garbage") {
    for (const auto& v : all_variants()) {
        CHECK(HammingVariant::from_tag(v.tag()) == v);
        CHECK(v.tag() <= 0x06);
    }
    CHECK(HammingVariant::make(4, false).tag() == 0x00);
    CHECK(HammingVariant::make(4, true).tag() == 0x04);
    CHECK(HammingVariant::make(8, false).tag() == 0x01);
    CHECK(HammingVariant::make(16, true).tag() == 0x06);
    CHECK_THROWS_AS(HammingVariant::from_tag(0x03), std::invalid_argument);
    CHECK_THROWS_AS(HammingVariant::from_tag(0x08), std::invalid_argument);
}

TEST_CASE("parse_variant accepts the documented spellings") {
    CHECK(parse_variant("none") == std::nullopt);
    CHECK(parse_variant("") == std::nullopt);
    CHECK(*parse_variant("H(7,4)") == HammingVariant::make(4, false));
    CHECK(*parse_variant("h7-4") == HammingVariant::make(4, false));
    CHECK(*parse_variant("7-4") == HammingVariant::make(4, false));
    CHECK(*parse_variant("H13-8") == HammingVariant::make(8, true));
    CHECK(*parse_variant("H(22,16)") == HammingVariant::make(16, true));
    CHECK_THROWS_AS((void)parse_variant("H(9,4)"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_variant("bogus"), std::invalid_argument);
    for (const auto& v : all_variants()) CHECK(*parse_variant(v.name()) == v);
}

TEST_CASE("golden encoding: data 1011 under H(7,4)") {
    // d=(1,0,1,1): p1 = d1^d2^d4 = 0, p2 = d1^d3^d4 = 1, p4 = d2^d3^d4 = 0.
    const auto v74 = HammingVariant::make(4, false);
    const std::uint32_t cw = detail::encode_block(0b1101, v74);
    CHECK(cw == 0x66);  // positions 1..7 read 0110011
    CHECK(detail::parity_byte_from_codeword(cw, v74) == 0x02);
    CHECK(detail::data_from_codeword(cw, v74) == 0b1101);

    const HelperData helper = enroll_helper(BitVector::from_string("1011"), v74);
    REQUIRE(helper.parity_blocks.size() == 1);
    CHECK(helper.parity_blocks[0] == 0x02);

    // Extended form: weight 4 is even, so the extra bit stays clear.
    const auto v84 = HammingVariant::make(4, true);
    const std::uint32_t cw8 = detail::encode_block(0b1101, v84);
    CHECK(cw8 == 0x66);
    CHECK(detail::parity_byte_from_codeword(cw8, v84) == 0x02);
}

TEST_CASE("every encoding satisfies the parity-check oracle") {
    for (const auto& v : all_variants()) {
        std::set<std::uint32_t> seen;
        const std::uint32_t words = 1u << v.data_bits;
        for (std::uint32_t d = 0; d < words; ++d) {
            const std::uint32_t cw = detail::encode_block(d, v);
            CHECK(oracle_is_codeword(cw, v));
            CHECK(detail::data_from_codeword(cw, v) == d);
            seen.insert(cw);
        }
        CHECK(seen.size() == words);  // injective
    }
}

TEST_CASE("code is linear with the expected minimum distance") {
    for (const auto& v : all_variants()) {
        const std::uint32_t words = 1u << v.data_bits;
        // linearity: encode(a^b) == encode(a)^encode(b) on a sample
        for (std::uint32_t a = 0; a < words; a += 7)
            for (std::uint32_t b = 0; b < words; b += 13)
                CHECK(detail::encode_block(a ^ b, v) ==
                      (detail::encode_block(a, v) ^ detail::encode_block(b, v)));
        // minimum distance == minimum nonzero codeword weight (by linearity)
        unsigned min_weight = 32;
        for (std::uint32_t d = 1; d < words; ++d)
            min_weight = std::min(min_weight,
                                  static_cast<unsigned>(std::popcount(detail::encode_block(d, v))));
        CHECK(min_weight == (v.extended ? 4u : 3u));
    }
}

TEST_CASE("single data-bit errors are corrected for every word (exhaustive)") {
    // Exhaustive for the 4- and 8-bit variants, covering SEC and SECDED.
    for (unsigned data_bits : {4u, 8u}) {
        for (bool ext : {false, true}) {
            const auto v = HammingVariant::make(data_bits, ext);
            const std::uint32_t words = 1u << data_bits;
            for (std::uint32_t d = 0; d < words; ++d) {
                const BitVector enrolled = data_to_bits(d, data_bits);
                const HelperData helper = enroll_helper(enrolled, v);
                for (unsigned i = 0; i < data_bits; ++i) {
                    BitVector raw = enrolled;
                    raw.flip(i);
                    const DecodeReport rep = decode(raw, helper);
                    CHECK(rep.corrected == enrolled);
                    CHECK(rep.single_corrected == 1);
                    CHECK(rep.clean == 0);
                    CHECK(rep.bit_flips_applied == 1);
                }
            }
        }
    }
}

TEST_CASE("single parity-bit errors leave the data intact") {
    for (const auto& v : all_variants()) {
        const std::uint32_t d = 0x5Au & ((1u << v.data_bits) - 1);
        const BitVector enrolled = data_to_bits(d, v.data_bits);
        const HelperData helper = enroll_helper(enrolled, v);
        for (unsigned pos = 1; pos <= v.codeword_bits(); ++pos) {
            const int pi = parity_byte_index(pos, v);
            if (pi < 0) continue;
            HelperData damaged = helper;
            damaged.parity_blocks[0] ^= static_cast<std::uint8_t>(1u << pi);
            const DecodeReport rep = decode(enrolled, damaged);
            CHECK(rep.corrected == enrolled);
            CHECK(rep.single_corrected == 1);
            CHECK(rep.bit_flips_applied == 0);  // correction lands on parity
        }
    }
}

TEST_CASE("SECDED flags exhaustive double errors without touching data") {
    const auto v = HammingVariant::make(4, true);
    for (std::uint32_t d = 0; d < 16; ++d) {
        const BitVector enrolled = data_to_bits(d, 4);
        const HelperData helper = enroll_helper(enrolled, v);
        for (unsigned p1 = 1; p1 <= 8; ++p1) {
            for (unsigned p2 = p1 + 1; p2 <= 8; ++p2) {
                BitVector raw = enrolled;
                HelperData damaged = helper;
                for (unsigned pos : {p1, p2}) {
                    const int di = data_index_of_position(pos);
                    const int pi = parity_byte_index(pos, v);
                    if (di >= 0 && pos <= v.base_bits())
                        raw.flip(static_cast<std::size_t>(di));
                    else
                        damaged.parity_blocks[0] ^= static_cast<std::uint8_t>(1u << pi);
                }
                const DecodeReport rep = decode(raw, damaged);
                CHECK(rep.double_detected == 1);
                CHECK(rep.bit_flips_applied == 0);
                CHECK(rep.corrected == raw);  // left exactly as read
            }
        }
    }
}

TEST_CASE("SEC double errors miscorrect into a third position") {
    const auto v = HammingVariant::make(4, false);
    const BitVector enrolled = data_to_bits(0b1101, 4);
    const HelperData helper = enroll_helper(enrolled, v);
    // Two data errors (positions 3 and 5 = data indices 0 and 1).
    BitVector raw = enrolled;
    raw.flip(0);
    raw.flip(1);
    const DecodeReport rep = decode(raw, helper);
    CHECK(rep.single_corrected == 1);  // decoder believes it fixed one flip
    CHECK(rep.corrected != enrolled);  // and lands on a wrong codeword
}

TEST_CASE("syndrome past the codeword end is reported, not applied") {
    // H(12,8): data errors at positions 5 and 10 give syndrome 15 > 12.
    const auto v = HammingVariant::make(8, false);
    const BitVector enrolled = data_to_bits(0b10110100, 8);
    const HelperData helper = enroll_helper(enrolled, v);
    BitVector raw = enrolled;
    raw.flip(static_cast<std::size_t>(data_index_of_position(5)));
    raw.flip(static_cast<std::size_t>(data_index_of_position(10)));
    const DecodeReport rep = decode(raw, helper);
    CHECK(rep.miscorrection_possible == 1);
    CHECK(rep.bit_flips_applied == 0);
    CHECK(rep.corrected == raw);
}

TEST_CASE("multi-block decode aggregates per-block outcomes") {
    const auto v = HammingVariant::make(4, true);
    const BitVector enrolled = BitVector::from_string("1011" "0000" "1111" "0101");
    const HelperData helper = enroll_helper(enrolled, v);
    REQUIRE(helper.codeword_count() == 4);
    BitVector raw = enrolled;
    raw.flip(4);             // block 1: single error
    raw.flip(8);
    raw.flip(9);             // block 2: double error
    const DecodeReport rep = decode(raw, helper);
    CHECK(rep.clean == 2);
    CHECK(rep.single_corrected == 1);
    CHECK(rep.double_detected == 1);
    CHECK(rep.codeword_count() == 4);
    // block 1 healed, block 2 left as read
    CHECK(rep.corrected.slice(4, 4) == enrolled.slice(4, 4));
    CHECK(rep.corrected.slice(8, 4) == raw.slice(8, 4));
}

TEST_CASE("length validation") {
    const auto v = HammingVariant::make(4, false);
    CHECK_THROWS_AS((void)enroll_helper(BitVector(10), v), std::invalid_argument);
    const HelperData helper = enroll_helper(BitVector(8), v);
    CHECK_THROWS_AS((void)decode(BitVector(12), helper), std::invalid_argument);
}

TEST_CASE("parity footprint accounting") {
    const ParityFootprint f = parity_footprint(HammingVariant::make(4, false), 256);
    CHECK(f.blocks == 512);
    CHECK(f.parity_bits == 1536);
    CHECK(f.nvs_bytes == 512);
    CHECK(f.code_rate == doctest::Approx(4.0 / 7.0));
    const ParityFootprint g = parity_footprint(HammingVariant::make(16, true), 256);
    CHECK(g.blocks == 128);
    CHECK(g.parity_bits == 768);
    CHECK(g.nvs_bytes == 128);
}

TEST_CASE("helper file format is stable") {
    const auto v = HammingVariant::make(4, true);
    const HelperData helper = enroll_helper(BitVector::from_string("1011101111001010"), v);
    const auto bytes = helper_to_bytes(helper);
    REQUIRE(bytes.size() == 4 + 1 + 1 + 4 + 4);
    CHECK(bytes[0] == 'P');
    CHECK(bytes[1] == 'U');
    CHECK(bytes[2] == 'F');
    CHECK(bytes[3] == 'H');
    CHECK(bytes[4] == 0x01);  // version
    CHECK(bytes[5] == 0x04);  // H(8,4) tag
    CHECK(bytes[6] == 0x00);  // count, big-endian
    CHECK(bytes[7] == 0x00);
    CHECK(bytes[8] == 0x00);
    CHECK(bytes[9] == 0x04);
    CHECK(bytes[10] == helper.parity_blocks[0]);

    const HelperData back = helper_from_bytes(bytes);
    CHECK(back.variant == helper.variant);
    CHECK(back.parity_blocks == helper.parity_blocks);

    auto corrupt = bytes;
    corrupt[0] = 'X';
    CHECK_THROWS_AS((void)helper_from_bytes(corrupt), std::runtime_error);
    auto truncated = bytes;
    truncated.pop_back();
    CHECK_THROWS_AS((void)helper_from_bytes(truncated), std::runtime_error);
}

TEST_CASE("stream round trip matches byte round trip") {
    const auto v = HammingVariant::make(8, true);
    const HelperData helper = enroll_helper(BitVector::from_string("101110111100101011110000"), v);
    std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
    write_helper(ss, helper);
    const HelperData back = read_helper(ss);
    CHECK(back.variant == helper.variant);
    CHECK(back.parity_blocks == helper.parity_blocks);
}
