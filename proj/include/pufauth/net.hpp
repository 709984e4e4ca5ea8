#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>

#include "pufauth/protocol.hpp"

namespace pufauth::net {

// Byte stream a protocol session runs over. Tests wrap one to capture
// traffic; production code uses TcpStream.
class Stream {
public:
    virtual ~Stream() = default;
    // Returns bytes read, 0 on orderly EOF. Throws on transport error.
    virtual std::size_t read_some(std::uint8_t* buf, std::size_t len) = 0;
    virtual void write_all(const std::uint8_t* buf, std::size_t len) = 0;
    virtual void shutdown() {}
};

class TcpStream : public Stream {
public:
    explicit TcpStream(int fd);
    ~TcpStream() override;
    TcpStream(TcpStream&&) noexcept;
    TcpStream& operator=(TcpStream&&) noexcept;
    TcpStream(const TcpStream&) = delete;
    TcpStream& operator=(const TcpStream&) = delete;

    static TcpStream connect(const std::string& host, std::uint16_t port);

    std::size_t read_some(std::uint8_t* buf, std::size_t len) override;
    void write_all(const std::uint8_t* buf, std::size_t len) override;
    void shutdown() override;

private:
    int fd_ = -1;
};

class TcpListener {
public:
    // port 0 binds an ephemeral port; bound_port() reports the real one.
    TcpListener(const std::string& host, std::uint16_t port);
    ~TcpListener();
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    std::uint16_t bound_port() const { return port_; }
    // Blocks for the next connection. Throws std::runtime_error once closed.
    TcpStream accept();
    // Unblocks any accept() in progress; subsequent accepts throw.
    void close();

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

// Frame I/O over a Stream. read_frame returns nullopt on clean EOF before any
// byte of a frame; a frame cut short mid-way throws.
void write_frame(Stream& s, const proto::Frame& frame);
std::optional<proto::Frame> read_frame(Stream& s);

// Reads a frame and fails loudly on ERROR frames or an unexpected type.
proto::Frame expect_frame(Stream& s, proto::FrameType want);

// Thrown when the peer answers with an ERROR frame.
struct ProtocolError : std::runtime_error {
    ProtocolError(proto::ErrorCode code_, const std::string& message);
    proto::ErrorCode code;
};

}  // namespace pufauth::net
