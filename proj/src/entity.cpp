#include "pufauth/entity.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>

#include "pufauth/majority.hpp"

namespace pufauth {

using proto::FrameType;

SimulatedSource::SimulatedSource(PufDevice device, std::uint64_t read_seed)
    : device_(std::move(device)), rng_(read_seed) {}

BitVector SimulatedSource::stabilized_window_read(std::uint32_t offset, std::uint32_t n,
                                                  unsigned votes) {
    if (static_cast<std::size_t>(offset) + n > device_.n_cells)
        throw std::invalid_argument("entity: challenge window past end of array");
    if (n == 0) throw std::invalid_argument("entity: empty challenge window");
    MajorityAccumulator acc(n, votes);
    for (unsigned v = 0; v < votes; ++v)
        acc.accumulate(sample_response(device_, rng_).slice(offset, n));
    return acc.finalize();
}

DumpSource::DumpSource(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("entity: cannot open dump " + path.string());
    BitVector record;
    while (try_read_response_record(in, record)) records_.push_back(record);
    if (records_.empty()) throw std::runtime_error("entity: dump holds no records: " + path.string());
    const std::size_t width = records_.front().size();
    for (const auto& r : records_)
        if (r.size() != width)
            throw std::runtime_error("entity: dump records have mixed widths: " + path.string());
}

std::size_t DumpSource::cells() const { return records_.front().size(); }

BitVector DumpSource::stabilized_window_read(std::uint32_t offset, std::uint32_t n,
                                             unsigned votes) {
    if (static_cast<std::size_t>(offset) + n > cells())
        throw std::invalid_argument("entity: challenge window past end of dump records");
    if (n == 0) throw std::invalid_argument("entity: empty challenge window");
    MajorityAccumulator acc(n, votes);
    for (unsigned v = 0; v < votes; ++v) {
        acc.accumulate(records_[next_].slice(offset, n));
        next_ = (next_ + 1) % records_.size();
    }
    return acc.finalize();
}

EntityClient::EntityClient(EntityConfig config, std::unique_ptr<PufSource> source)
    : config_(std::move(config)), source_(std::move(source)) {
    if (!source_) throw std::invalid_argument("entity: a PUF source is required");
    if (config_.device_id.empty()) throw std::invalid_argument("entity: device_id is required");
}

std::filesystem::path EntityClient::helper_path(std::uint32_t offset, std::uint32_t n) const {
    std::string id;
    for (char c : config_.device_id)
        id.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    return config_.helper_dir /
           (id + "_" + std::to_string(offset) + "_" + std::to_string(n) + ".pufh");
}

EnrollOutcome EntityClient::enroll(std::uint32_t offset, std::uint32_t n, unsigned votes,
                                   std::optional<HammingVariant> variant, bool overwrite,
                                   bool ec_at_verifier) {
    auto stream = net::TcpStream::connect(config_.host, config_.port);
    return enroll_over(stream, offset, n, votes, variant, overwrite, ec_at_verifier);
}

EnrollOutcome EntityClient::enroll_over(net::Stream& stream, std::uint32_t offset,
                                        std::uint32_t n, unsigned votes,
                                        std::optional<HammingVariant> variant, bool overwrite,
                                        bool ec_at_verifier) {
    if (variant && n % variant->data_bits != 0)
        throw std::invalid_argument("entity: n not divisible by EC data width");
    if (ec_at_verifier && !variant)
        throw std::invalid_argument("entity: verifier-side EC requires a variant");

    const BitVector reference = source_->stabilized_window_read(offset, n, votes);

    std::optional<HelperData> helper;
    if (variant) helper = enroll_helper(reference, *variant);

    proto::Hello hello;
    hello.intent = proto::Intent::enroll;
    hello.device_id = config_.device_id;
    net::write_frame(stream, {FrameType::hello, proto::encode(hello)});

    proto::EnrollReq req;
    req.offset = offset;
    req.n = n;
    req.votes = static_cast<std::uint8_t>(votes);
    req.variant_tag = variant ? variant->tag() : kNoVariantTag;
    req.overwrite = overwrite;
    req.ec_at_verifier = ec_at_verifier;
    req.response = reference;
    if (ec_at_verifier) req.helper_blob = helper_to_bytes(*helper);
    net::write_frame(stream, {FrameType::enroll_req, proto::encode(req)});

    const auto frame = net::expect_frame(stream, FrameType::enroll_resp);
    const proto::EnrollResp resp = proto::decode_enroll_resp(frame.payload);

    EnrollOutcome outcome;
    outcome.stored_bits = resp.stored_bits;
    outcome.helper_bytes = resp.helper_bytes;
    if (variant && !ec_at_verifier) {
        // Persist the helper in the entity's NVS analogue only after the
        // verifier confirmed the enrollment.
        const auto path = helper_path(offset, n);
        if (!config_.helper_dir.empty()) std::filesystem::create_directories(config_.helper_dir);
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("entity: cannot write helper " + path.string());
        write_helper(out, *helper);
        outcome.helper_path = path;
    }
    return outcome;
}

AuthOutcome EntityClient::authenticate(
    std::optional<std::pair<std::uint32_t, std::uint32_t>> selector) {
    auto stream = net::TcpStream::connect(config_.host, config_.port);
    return authenticate_over(stream, selector);
}

AuthOutcome EntityClient::authenticate_over(
    net::Stream& stream, std::optional<std::pair<std::uint32_t, std::uint32_t>> selector) {
    proto::Hello hello;
    hello.intent = proto::Intent::auth;
    hello.device_id = config_.device_id;
    if (selector) {
        hello.has_selector = true;
        hello.offset = selector->first;
        hello.n = selector->second;
    }
    net::write_frame(stream, {FrameType::hello, proto::encode(hello)});

    const auto challenge_frame = net::expect_frame(stream, FrameType::auth_challenge);
    const proto::AuthChallenge challenge = proto::decode_auth_challenge(challenge_frame.payload);

    std::optional<HammingVariant> variant;
    if (challenge.variant_tag != kNoVariantTag)
        variant = HammingVariant::from_tag(challenge.variant_tag);

    BitVector response =
        source_->stabilized_window_read(challenge.offset, challenge.n, challenge.votes);

    proto::AuthResponse resp;
    resp.nonce = challenge.nonce;
    if (variant && !challenge.ec_at_verifier) {
        const auto path = helper_path(challenge.offset, challenge.n);
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("entity: missing helper " + path.string());
        const HelperData helper = read_helper(in);
        const DecodeReport report = decode(response, helper);
        response = report.corrected;
        resp.decoded_at_entity = true;
        resp.stats.clean = static_cast<std::uint32_t>(report.clean);
        resp.stats.single_corrected = static_cast<std::uint32_t>(report.single_corrected);
        resp.stats.double_detected = static_cast<std::uint32_t>(report.double_detected);
        resp.stats.miscorrection_possible =
            static_cast<std::uint32_t>(report.miscorrection_possible);
        resp.stats.bit_flips_applied = static_cast<std::uint32_t>(report.bit_flips_applied);
    }
    resp.response = response;
    net::write_frame(stream, {FrameType::auth_response, proto::encode(resp)});

    const auto result_frame = net::expect_frame(stream, FrameType::auth_result);
    const proto::AuthResult result = proto::decode_auth_result(result_frame.payload);

    AuthOutcome outcome;
    outcome.accepted = result.accepted;
    outcome.hd_bits = result.hd_bits;
    outcome.threshold_bits = result.threshold_bits;
    outcome.n = result.n;
    outcome.tau = result.tau;
    outcome.measured_ber =
        result.n ? static_cast<double>(result.hd_bits) / static_cast<double>(result.n) : 0.0;
    outcome.decoded_at_entity = resp.decoded_at_entity;
    outcome.stats = challenge.ec_at_verifier ? result.stats : resp.stats;
    return outcome;
}

}  // namespace pufauth
