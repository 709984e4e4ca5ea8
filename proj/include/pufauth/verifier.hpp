#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "pufauth/crp_store.hpp"
#include "pufauth/net.hpp"
#include "pufauth/rng.hpp"

namespace pufauth {

struct ThresholdPolicy {
    double tau_ber = 0.05;
    std::string source = "manual";  // or "calibrated"
};

struct VerifierConfig {
    std::string listen_host = "127.0.0.1";
    std::uint16_t port = 0;  // 0 = ephemeral
    std::filesystem::path store_path;
    std::filesystem::path audit_path;  // empty = no audit log
    ThresholdPolicy policy;
    std::uint64_t nonce_seed = 0;  // 0 = seeded from std::random_device
    std::size_t max_sessions = 0;  // 0 = serve until stop()
};

class Verifier {
public:
    explicit Verifier(VerifierConfig config);
    ~Verifier();
    Verifier(const Verifier&) = delete;
    Verifier& operator=(const Verifier&) = delete;

    std::uint16_t port() const { return listener_.bound_port(); }
    CrpStore& store() { return store_; }
    const ThresholdPolicy& policy() const { return config_.policy; }

    // Accept loop; returns after max_sessions sessions or stop(). Sessions
    // run on their own threads, so slow entities don't block the listener.
    void run();
    void stop();

    // One full session over an arbitrary stream (tests drive this directly).
    void handle_session(net::Stream& stream);

    std::size_t sessions_handled() const { return sessions_handled_.load(); }

private:
    void handle_enroll(net::Stream& stream, const proto::Hello& hello);
    void handle_auth(net::Stream& stream, const proto::Hello& hello);
    void send_error(net::Stream& stream, proto::ErrorCode code, const std::string& message);
    void audit(const std::string& device_id, double measured_ber, double tau, bool accepted);
    proto::Nonce next_nonce();

    VerifierConfig config_;
    CrpStore store_;
    net::TcpListener listener_;
    Rng nonce_rng_;
    std::mutex nonce_mutex_;
    std::mutex audit_mutex_;
    std::atomic<std::size_t> sessions_handled_{0};
    std::atomic<bool> stopping_{false};
};

}  // namespace pufauth
