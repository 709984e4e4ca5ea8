#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pufauth/bitvec.hpp"
#include "pufauth/hamming.hpp"

// Wire format: every frame is a 4-byte big-endian length (covering the type
// byte and payload), a 1-byte type, then the type-specific payload. All
// multi-byte integers are big-endian; strings are u16 length + bytes;
// responses are u32 bit count + packed bytes (LSB-first within each byte).
// The entity opens the TCP connection and sends HELLO; the verifier drives
// the rest of the session.

namespace pufauth::proto {

enum class FrameType : std::uint8_t {
    hello = 0x01,
    enroll_req = 0x02,
    enroll_resp = 0x03,
    auth_challenge = 0x04,
    auth_response = 0x05,
    auth_result = 0x06,
    error = 0x7F,
};

enum class ErrorCode : std::uint8_t {
    malformed = 1,       // bad magic, unknown frame type, truncated payload
    unknown_device = 2,  // auth against a device_id with no CRP record
    duplicate_enrollment = 3,
    stale_nonce = 4,
    invalid_config = 5,  // divisibility violation, bad parameters
    internal = 6,        // store or I/O failure on the verifier
};

constexpr std::array<std::uint8_t, 4> kHelloMagic = {'P', 'U', 'F', 'A'};
constexpr std::uint8_t kProtocolVersion = 1;
constexpr std::size_t kNonceBytes = 8;
constexpr std::size_t kMaxFrameBytes = 1u << 20;

using Nonce = std::array<std::uint8_t, kNonceBytes>;

enum class Intent : std::uint8_t { enroll = 1, auth = 2 };

struct Hello {
    std::uint8_t version = kProtocolVersion;
    Intent intent = Intent::auth;
    std::string device_id;
    // Optional challenge selector for auth; without it the verifier picks the
    // device's most recently enrolled challenge.
    bool has_selector = false;
    std::uint32_t offset = 0;
    std::uint32_t n = 0;
};

struct EnrollReq {
    std::uint32_t offset = 0;
    std::uint32_t n = 0;
    std::uint8_t votes = 1;
    std::uint8_t variant_tag = kNoVariantTag;
    bool overwrite = false;
    bool ec_at_verifier = false;
    BitVector response;  // post-MV reference
    // Present only when ec_at_verifier: the packed helper-data file image.
    std::vector<std::uint8_t> helper_blob;
};

struct EnrollResp {
    std::uint32_t stored_bits = 0;
    std::uint32_t helper_bytes = 0;  // entity-side NVS footprint, echoed for logs
};

struct AuthChallenge {
    std::uint32_t offset = 0;
    std::uint32_t n = 0;
    std::uint8_t votes = 1;
    std::uint8_t variant_tag = kNoVariantTag;
    bool ec_at_verifier = false;
    Nonce nonce{};
};

struct DecodeStats {
    std::uint32_t clean = 0;
    std::uint32_t single_corrected = 0;
    std::uint32_t double_detected = 0;
    std::uint32_t miscorrection_possible = 0;
    std::uint32_t bit_flips_applied = 0;
};

struct AuthResponse {
    Nonce nonce{};  // must echo the challenge nonce
    BitVector response;
    bool decoded_at_entity = false;
    DecodeStats stats;  // zeroed unless decoded_at_entity
};

struct AuthResult {
    bool accepted = false;
    std::uint32_t hd_bits = 0;
    std::uint32_t threshold_bits = 0;
    std::uint32_t n = 0;
    double tau = 0.0;
    DecodeStats stats;  // verifier-side decode when EC runs there
};

struct Error {
    ErrorCode code = ErrorCode::malformed;
    std::string message;
};

struct Frame {
    FrameType type;
    std::vector<std::uint8_t> payload;
};

// Payload codecs. Decoders throw std::runtime_error on truncation/garbage.
std::vector<std::uint8_t> encode(const Hello&);
std::vector<std::uint8_t> encode(const EnrollReq&);
std::vector<std::uint8_t> encode(const EnrollResp&);
std::vector<std::uint8_t> encode(const AuthChallenge&);
std::vector<std::uint8_t> encode(const AuthResponse&);
std::vector<std::uint8_t> encode(const AuthResult&);
std::vector<std::uint8_t> encode(const Error&);

Hello decode_hello(const std::vector<std::uint8_t>& payload);
EnrollReq decode_enroll_req(const std::vector<std::uint8_t>& payload);
EnrollResp decode_enroll_resp(const std::vector<std::uint8_t>& payload);
AuthChallenge decode_auth_challenge(const std::vector<std::uint8_t>& payload);
AuthResponse decode_auth_response(const std::vector<std::uint8_t>& payload);
AuthResult decode_auth_result(const std::vector<std::uint8_t>& payload);
Error decode_error(const std::vector<std::uint8_t>& payload);

// Whole-frame byte image (length + type + payload), for fixtures and capture.
std::vector<std::uint8_t> frame_bytes(const Frame& frame);

}  // namespace pufauth::proto
