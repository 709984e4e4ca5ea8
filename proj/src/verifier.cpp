#include "pufauth/verifier.hpp"

#include <cstdio>
#include <fstream>
#include <random>

#include "pufauth/calibration.hpp"

namespace pufauth {

using proto::ErrorCode;
using proto::FrameType;

Verifier::Verifier(VerifierConfig config)
    : config_(std::move(config)),
      store_(config_.store_path),
      listener_(config_.listen_host, config_.port),
      nonce_rng_(config_.nonce_seed != 0 ? config_.nonce_seed
                                         : (static_cast<std::uint64_t>(std::random_device{}()) << 32 |
                                            std::random_device{}())) {
    if (config_.policy.tau_ber < 0.0 || config_.policy.tau_ber > 1.0)
        throw std::invalid_argument("verifier: tau_ber out of [0,1]");
}

Verifier::~Verifier() { stop(); }

void Verifier::stop() {
    stopping_.store(true);
    listener_.close();
}

void Verifier::run() {
    std::vector<std::thread> workers;
    std::size_t accepted = 0;
    while (!stopping_.load() && (config_.max_sessions == 0 || accepted < config_.max_sessions)) {
        std::optional<net::TcpStream> stream;
        try {
            stream.emplace(listener_.accept());
        } catch (const std::exception&) {
            break;  // listener closed
        }
        ++accepted;
        workers.emplace_back(
            [this](net::TcpStream s) {
                try {
                    handle_session(s);
                } catch (const std::exception&) {
                    // Transport failures end the session; nothing to clean up.
                }
            },
            std::move(*stream));
    }
    for (auto& w : workers) w.join();
}

void Verifier::send_error(net::Stream& stream, ErrorCode code, const std::string& message) {
    try {
        net::write_frame(stream, {FrameType::error, proto::encode(proto::Error{code, message})});
    } catch (const std::exception&) {
        // Peer already gone; the error was best-effort.
    }
}

proto::Nonce Verifier::next_nonce() {
    std::lock_guard lock(nonce_mutex_);
    const std::uint64_t raw = nonce_rng_.next_u64();
    proto::Nonce nonce;
    for (std::size_t i = 0; i < nonce.size(); ++i)
        nonce[i] = static_cast<std::uint8_t>(raw >> (56 - 8 * i));
    return nonce;
}

void Verifier::handle_session(net::Stream& stream) {
    sessions_handled_.fetch_add(1);
    std::optional<proto::Frame> first;
    try {
        first = net::read_frame(stream);
    } catch (const std::exception& e) {
        send_error(stream, ErrorCode::malformed, e.what());
        return;
    }
    if (!first) return;  // connected and left
    if (first->type != FrameType::hello) {
        send_error(stream, ErrorCode::malformed, "expected HELLO");
        return;
    }
    proto::Hello hello;
    try {
        hello = proto::decode_hello(first->payload);
    } catch (const std::exception& e) {
        send_error(stream, ErrorCode::malformed, e.what());
        return;
    }
    if (hello.intent == proto::Intent::enroll)
        handle_enroll(stream, hello);
    else
        handle_auth(stream, hello);
}

void Verifier::handle_enroll(net::Stream& stream, const proto::Hello& hello) {
    proto::EnrollReq req;
    try {
        const auto frame = net::read_frame(stream);
        if (!frame || frame->type != FrameType::enroll_req) {
            send_error(stream, ErrorCode::malformed, "expected ENROLL_REQ");
            return;
        }
        req = proto::decode_enroll_req(frame->payload);
    } catch (const std::exception& e) {
        send_error(stream, ErrorCode::malformed, e.what());
        return;
    }

    std::optional<HammingVariant> variant;
    if (req.variant_tag != kNoVariantTag) {
        try {
            variant = HammingVariant::from_tag(req.variant_tag);
        } catch (const std::exception& e) {
            send_error(stream, ErrorCode::invalid_config, e.what());
            return;
        }
    }
    if (req.n == 0 || req.votes == 0) {
        send_error(stream, ErrorCode::invalid_config, "n and votes must be positive");
        return;
    }
    if (req.response.size() != req.n) {
        send_error(stream, ErrorCode::malformed, "response length does not match n");
        return;
    }
    if (variant && req.n % variant->data_bits != 0) {
        send_error(stream, ErrorCode::invalid_config, "n not divisible by EC data width");
        return;
    }
    if (req.ec_at_verifier && !variant) {
        send_error(stream, ErrorCode::invalid_config, "verifier-side EC requires a variant");
        return;
    }
    if (req.ec_at_verifier) {
        try {
            const HelperData helper = helper_from_bytes(req.helper_blob);
            if (helper.variant != *variant || helper.codeword_count() != req.n / variant->data_bits) {
                send_error(stream, ErrorCode::invalid_config, "helper blob inconsistent with config");
                return;
            }
        } catch (const std::exception& e) {
            send_error(stream, ErrorCode::invalid_config, e.what());
            return;
        }
    } else if (!req.helper_blob.empty()) {
        send_error(stream, ErrorCode::invalid_config, "helper data sent without verifier-side EC");
        return;
    }

    CrpRecord record;
    record.device_id = hello.device_id;
    record.offset = req.offset;
    record.n = req.n;
    record.votes = req.votes;
    record.variant = variant;
    record.ec_at_verifier = req.ec_at_verifier;
    record.enrolled_response = req.response;
    record.helper_blob = req.helper_blob;
    record.enrolled_at = iso8601_utc_now();

    bool stored = false;
    try {
        stored = store_.put(record, req.overwrite);
    } catch (const std::exception& e) {
        send_error(stream, ErrorCode::internal, e.what());
        return;
    }
    if (!stored) {
        send_error(stream, ErrorCode::duplicate_enrollment,
                   "record exists for this (device, challenge); pass overwrite to replace");
        return;
    }

    proto::EnrollResp resp;
    resp.stored_bits = req.n;
    resp.helper_bytes = variant ? req.n / variant->data_bits : 0;
    net::write_frame(stream, {FrameType::enroll_resp, proto::encode(resp)});
}

void Verifier::handle_auth(net::Stream& stream, const proto::Hello& hello) {
    std::optional<CrpRecord> record =
        hello.has_selector ? store_.find(hello.device_id, hello.offset, hello.n)
                           : store_.latest(hello.device_id);
    if (!record) {
        send_error(stream, ErrorCode::unknown_device,
                   "no enrollment for device '" + hello.device_id + "'");
        return;
    }

    proto::AuthChallenge challenge;
    challenge.offset = record->offset;
    challenge.n = record->n;
    challenge.votes = static_cast<std::uint8_t>(record->votes);
    challenge.variant_tag = record->variant ? record->variant->tag() : kNoVariantTag;
    challenge.ec_at_verifier = record->ec_at_verifier;
    challenge.nonce = next_nonce();
    net::write_frame(stream, {FrameType::auth_challenge, proto::encode(challenge)});

    proto::AuthResponse resp;
    try {
        const auto frame = net::read_frame(stream);
        if (!frame || frame->type != FrameType::auth_response) {
            send_error(stream, ErrorCode::malformed, "expected AUTH_RESPONSE");
            return;
        }
        resp = proto::decode_auth_response(frame->payload);
    } catch (const std::exception& e) {
        send_error(stream, ErrorCode::malformed, e.what());
        return;
    }

    if (resp.nonce != challenge.nonce) {
        send_error(stream, ErrorCode::stale_nonce, "nonce does not match this session's challenge");
        return;
    }
    if (resp.response.size() != record->n) {
        send_error(stream, ErrorCode::malformed, "response length does not match challenge");
        return;
    }

    proto::AuthResult result;
    result.n = record->n;
    result.tau = config_.policy.tau_ber;
    BitVector received = resp.response;
    if (record->ec_at_verifier) {
        try {
            const HelperData helper = helper_from_bytes(record->helper_blob);
            const DecodeReport report = decode(received, helper);
            received = report.corrected;
            result.stats.clean = static_cast<std::uint32_t>(report.clean);
            result.stats.single_corrected = static_cast<std::uint32_t>(report.single_corrected);
            result.stats.double_detected = static_cast<std::uint32_t>(report.double_detected);
            result.stats.miscorrection_possible =
                static_cast<std::uint32_t>(report.miscorrection_possible);
            result.stats.bit_flips_applied = static_cast<std::uint32_t>(report.bit_flips_applied);
        } catch (const std::exception& e) {
            send_error(stream, ErrorCode::internal, e.what());
            return;
        }
    } else {
        result.stats = resp.stats;
    }

    const std::size_t hd = hamming_distance(record->enrolled_response, received);
    result.hd_bits = static_cast<std::uint32_t>(hd);
    result.threshold_bits = static_cast<std::uint32_t>(tau_to_bits(result.tau, record->n));
    result.accepted = hd <= result.threshold_bits;
    net::write_frame(stream, {FrameType::auth_result, proto::encode(result)});

    audit(record->device_id, static_cast<double>(hd) / static_cast<double>(record->n),
          result.tau, result.accepted);
}

void Verifier::audit(const std::string& device_id, double measured_ber, double tau, bool accepted) {
    if (config_.audit_path.empty()) return;
    std::lock_guard lock(audit_mutex_);
    const bool fresh = !std::filesystem::exists(config_.audit_path) ||
                       std::filesystem::file_size(config_.audit_path) == 0;
    std::ofstream out(config_.audit_path, std::ios::app);
    if (!out) return;  // auditing is best-effort; the decision already went out
    if (fresh) out << "timestamp,device_id,measured_ber,tau,accepted\n";
    char line[256];
    std::snprintf(line, sizeof(line), "%s,%s,%.10g,%.10g,%d\n", iso8601_utc_now().c_str(),
                  device_id.c_str(), measured_ber, tau, accepted ? 1 : 0);
    out << line;
}

}  // namespace pufauth
