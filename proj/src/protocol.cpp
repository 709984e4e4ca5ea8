#include "pufauth/protocol.hpp"

#include <cstring>
#include <stdexcept>

namespace pufauth::proto {
namespace {

class Writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u16(std::uint16_t v) {
        buf_.push_back(static_cast<std::uint8_t>(v >> 8));
        buf_.push_back(static_cast<std::uint8_t>(v));
    }
    void u32(std::uint32_t v) {
        buf_.push_back(static_cast<std::uint8_t>(v >> 24));
        buf_.push_back(static_cast<std::uint8_t>(v >> 16));
        buf_.push_back(static_cast<std::uint8_t>(v >> 8));
        buf_.push_back(static_cast<std::uint8_t>(v));
    }
    void u64(std::uint64_t v) {
        u32(static_cast<std::uint32_t>(v >> 32));
        u32(static_cast<std::uint32_t>(v));
    }
    void bytes(const std::uint8_t* data, std::size_t len) {
        buf_.insert(buf_.end(), data, data + len);
    }
    void str(const std::string& s) {
        if (s.size() > 0xFFFF) throw std::invalid_argument("proto: string too long");
        u16(static_cast<std::uint16_t>(s.size()));
        bytes(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
    }
    void blob(const std::vector<std::uint8_t>& b) {
        u32(static_cast<std::uint32_t>(b.size()));
        bytes(b.data(), b.size());
    }
    void response(const BitVector& r) {
        u32(static_cast<std::uint32_t>(r.size()));
        auto packed = r.to_bytes();
        bytes(packed.data(), packed.size());
    }
    std::vector<std::uint8_t> take() { return std::move(buf_); }

private:
    std::vector<std::uint8_t> buf_;
};

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& buf) : buf_(buf) {}

    std::uint8_t u8() { return take(1)[0]; }
    std::uint16_t u16() {
        const auto* p = take(2);
        return static_cast<std::uint16_t>((p[0] << 8) | p[1]);
    }
    std::uint32_t u32() {
        const auto* p = take(4);
        return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
               (static_cast<std::uint32_t>(p[2]) << 8) | static_cast<std::uint32_t>(p[3]);
    }
    std::uint64_t u64() {
        const std::uint64_t hi = u32();
        return (hi << 32) | u32();
    }
    std::string str() {
        const std::size_t len = u16();
        const auto* p = take(len);
        return std::string(reinterpret_cast<const char*>(p), len);
    }
    std::vector<std::uint8_t> blob() {
        const std::size_t len = u32();
        if (len > kMaxFrameBytes) throw std::runtime_error("proto: blob length exceeds frame limit");
        const auto* p = take(len);
        return std::vector<std::uint8_t>(p, p + len);
    }
    BitVector response() {
        const std::size_t bits = u32();
        if (bits > 8 * kMaxFrameBytes) throw std::runtime_error("proto: response length exceeds frame limit");
        const std::size_t len = (bits + 7) / 8;
        const auto* p = take(len);
        return BitVector::from_bytes(std::vector<std::uint8_t>(p, p + len), bits);
    }
    void expect_end() const {
        if (pos_ != buf_.size()) throw std::runtime_error("proto: trailing bytes in payload");
    }

private:
    const std::uint8_t* take(std::size_t len) {
        if (buf_.size() - pos_ < len) throw std::runtime_error("proto: truncated payload");
        const auto* p = buf_.data() + pos_;
        pos_ += len;
        return p;
    }
    const std::vector<std::uint8_t>& buf_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode(const Hello& m) {
    Writer w;
    w.bytes(kHelloMagic.data(), kHelloMagic.size());
    w.u8(m.version);
    w.u8(static_cast<std::uint8_t>(m.intent));
    w.str(m.device_id);
    w.u8(m.has_selector ? 1 : 0);
    w.u32(m.offset);
    w.u32(m.n);
    return w.take();
}

Hello decode_hello(const std::vector<std::uint8_t>& payload) {
    Reader r(payload);
    std::uint8_t magic[4];
    for (auto& b : magic) b = r.u8();
    if (std::memcmp(magic, kHelloMagic.data(), 4) != 0)
        throw std::runtime_error("proto: bad hello magic");
    Hello m;
    m.version = r.u8();
    if (m.version != kProtocolVersion) throw std::runtime_error("proto: unsupported version");
    const auto intent = r.u8();
    if (intent != 1 && intent != 2) throw std::runtime_error("proto: bad intent");
    m.intent = static_cast<Intent>(intent);
    m.device_id = r.str();
    m.has_selector = r.u8() != 0;
    m.offset = r.u32();
    m.n = r.u32();
    r.expect_end();
    return m;
}

std::vector<std::uint8_t> encode(const EnrollReq& m) {
    Writer w;
    w.u32(m.offset);
    w.u32(m.n);
    w.u8(m.votes);
    w.u8(m.variant_tag);
    w.u8(m.overwrite ? 1 : 0);
    w.u8(m.ec_at_verifier ? 1 : 0);
    w.response(m.response);
    w.blob(m.helper_blob);
    return w.take();
}

EnrollReq decode_enroll_req(const std::vector<std::uint8_t>& payload) {
    Reader r(payload);
    EnrollReq m;
    m.offset = r.u32();
    m.n = r.u32();
    m.votes = r.u8();
    m.variant_tag = r.u8();
    m.overwrite = r.u8() != 0;
    m.ec_at_verifier = r.u8() != 0;
    m.response = r.response();
    m.helper_blob = r.blob();
    r.expect_end();
    return m;
}

std::vector<std::uint8_t> encode(const EnrollResp& m) {
    Writer w;
    w.u32(m.stored_bits);
    w.u32(m.helper_bytes);
    return w.take();
}

EnrollResp decode_enroll_resp(const std::vector<std::uint8_t>& payload) {
    Reader r(payload);
    EnrollResp m;
    m.stored_bits = r.u32();
    m.helper_bytes = r.u32();
    r.expect_end();
    return m;
}

std::vector<std::uint8_t> encode(const AuthChallenge& m) {
    Writer w;
    w.u32(m.offset);
    w.u32(m.n);
    w.u8(m.votes);
    w.u8(m.variant_tag);
    w.u8(m.ec_at_verifier ? 1 : 0);
    w.bytes(m.nonce.data(), m.nonce.size());
    return w.take();
}

AuthChallenge decode_auth_challenge(const std::vector<std::uint8_t>& payload) {
    Reader r(payload);
    AuthChallenge m;
    m.offset = r.u32();
    m.n = r.u32();
    m.votes = r.u8();
    m.variant_tag = r.u8();
    m.ec_at_verifier = r.u8() != 0;
    for (auto& b : m.nonce) b = r.u8();
    r.expect_end();
    return m;
}

namespace {

void write_stats(Writer& w, const DecodeStats& s) {
    w.u32(s.clean);
    w.u32(s.single_corrected);
    w.u32(s.double_detected);
    w.u32(s.miscorrection_possible);
    w.u32(s.bit_flips_applied);
}

DecodeStats read_stats(Reader& r) {
    DecodeStats s;
    s.clean = r.u32();
    s.single_corrected = r.u32();
    s.double_detected = r.u32();
    s.miscorrection_possible = r.u32();
    s.bit_flips_applied = r.u32();
    return s;
}

}  // namespace

std::vector<std::uint8_t> encode(const AuthResponse& m) {
    Writer w;
    w.bytes(m.nonce.data(), m.nonce.size());
    w.response(m.response);
    w.u8(m.decoded_at_entity ? 1 : 0);
    write_stats(w, m.stats);
    return w.take();
}

AuthResponse decode_auth_response(const std::vector<std::uint8_t>& payload) {
    Reader r(payload);
    AuthResponse m;
    for (auto& b : m.nonce) b = r.u8();
    m.response = r.response();
    m.decoded_at_entity = r.u8() != 0;
    m.stats = read_stats(r);
    r.expect_end();
    return m;
}

std::vector<std::uint8_t> encode(const AuthResult& m) {
    Writer w;
    w.u8(m.accepted ? 1 : 0);
    w.u32(m.hd_bits);
    w.u32(m.threshold_bits);
    w.u32(m.n);
    std::uint64_t tau_bits;
    static_assert(sizeof(tau_bits) == sizeof(m.tau));
    std::memcpy(&tau_bits, &m.tau, sizeof(tau_bits));
    w.u64(tau_bits);
    write_stats(w, m.stats);
    return w.take();
}

AuthResult decode_auth_result(const std::vector<std::uint8_t>& payload) {
    Reader r(payload);
    AuthResult m;
    m.accepted = r.u8() != 0;
    m.hd_bits = r.u32();
    m.threshold_bits = r.u32();
    m.n = r.u32();
    const std::uint64_t tau_bits = r.u64();
    std::memcpy(&m.tau, &tau_bits, sizeof(m.tau));
    m.stats = read_stats(r);
    r.expect_end();
    return m;
}

std::vector<std::uint8_t> encode(const Error& m) {
    Writer w;
    w.u8(static_cast<std::uint8_t>(m.code));
    w.str(m.message);
    return w.take();
}

Error decode_error(const std::vector<std::uint8_t>& payload) {
    Reader r(payload);
    Error m;
    m.code = static_cast<ErrorCode>(r.u8());
    m.message = r.str();
    r.expect_end();
    return m;
}

std::vector<std::uint8_t> frame_bytes(const Frame& frame) {
    const std::size_t body = 1 + frame.payload.size();
    if (body > kMaxFrameBytes) throw std::invalid_argument("proto: frame exceeds limit");
    std::vector<std::uint8_t> out;
    out.reserve(4 + body);
    const auto len = static_cast<std::uint32_t>(body);
    out.push_back(static_cast<std::uint8_t>(len >> 24));
    out.push_back(static_cast<std::uint8_t>(len >> 16));
    out.push_back(static_cast<std::uint8_t>(len >> 8));
    out.push_back(static_cast<std::uint8_t>(len));
    out.push_back(static_cast<std::uint8_t>(frame.type));
    out.insert(out.end(), frame.payload.begin(), frame.payload.end());
    return out;
}

}  // namespace pufauth::proto
