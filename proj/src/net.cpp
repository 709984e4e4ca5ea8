#include "pufauth/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>
#include <utility>

namespace pufauth::net {
namespace {

[[noreturn]] void throw_errno(const char* what) {
    throw std::runtime_error(std::string(what) + ": " + std::strerror(errno));
}

}  // namespace

TcpStream::TcpStream(int fd) : fd_(fd) {
    if (fd < 0) throw std::invalid_argument("net: bad socket fd");
}

TcpStream::~TcpStream() {
    if (fd_ >= 0) ::close(fd_);
}

TcpStream::TcpStream(TcpStream&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}

TcpStream& TcpStream::operator=(TcpStream&& other) noexcept {
    if (this != &other) {
        if (fd_ >= 0) ::close(fd_);
        fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
}

TcpStream TcpStream::connect(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    const std::string service = std::to_string(port);
    if (int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0)
        throw std::runtime_error(std::string("net: getaddrinfo: ") + ::gai_strerror(rc));
    int fd = -1;
    int saved_errno = 0;
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) {
            saved_errno = errno;
            continue;
        }
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        saved_errno = errno;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) {
        errno = saved_errno;
        throw_errno("net: connect");
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    return TcpStream(fd);
}

std::size_t TcpStream::read_some(std::uint8_t* buf, std::size_t len) {
    for (;;) {
        const ssize_t got = ::recv(fd_, buf, len, 0);
        if (got >= 0) return static_cast<std::size_t>(got);
        if (errno == EINTR) continue;
        throw_errno("net: recv");
    }
}

void TcpStream::write_all(const std::uint8_t* buf, std::size_t len) {
    std::size_t sent = 0;
    while (sent < len) {
        const ssize_t put = ::send(fd_, buf + sent, len - sent, MSG_NOSIGNAL);
        if (put < 0) {
            if (errno == EINTR) continue;
            throw_errno("net: send");
        }
        sent += static_cast<std::size_t>(put);
    }
}

void TcpStream::shutdown() {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_WR);
}

TcpListener::TcpListener(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = AI_PASSIVE;
    addrinfo* res = nullptr;
    const std::string service = std::to_string(port);
    if (int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &res); rc != 0)
        throw std::runtime_error(std::string("net: getaddrinfo: ") + ::gai_strerror(rc));
    int saved_errno = 0;
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
        fd_ = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd_ < 0) {
            saved_errno = errno;
            continue;
        }
        int one = 1;
        ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
        if (::bind(fd_, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd_, 16) == 0) break;
        saved_errno = errno;
        ::close(fd_);
        fd_ = -1;
    }
    ::freeaddrinfo(res);
    if (fd_ < 0) {
        errno = saved_errno;
        throw_errno("net: bind/listen");
    }
    sockaddr_storage addr{};
    socklen_t alen = sizeof(addr);
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &alen) != 0) throw_errno("net: getsockname");
    if (addr.ss_family == AF_INET)
        port_ = ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
    else if (addr.ss_family == AF_INET6)
        port_ = ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port);
}

TcpListener::~TcpListener() { close(); }

TcpStream TcpListener::accept() {
    const int listen_fd = fd_;
    if (listen_fd < 0) throw std::runtime_error("net: listener closed");
    const int fd = ::accept(listen_fd, nullptr, nullptr);
    if (fd < 0) {
        if (errno == EBADF || errno == EINVAL) throw std::runtime_error("net: listener closed");
        throw_errno("net: accept");
    }
    return TcpStream(fd);
}

void TcpListener::close() {
    if (fd_ >= 0) {
        // shutdown() first so a blocked accept() wakes up with an error
        // instead of dangling on a closed descriptor number.
        ::shutdown(fd_, SHUT_RDWR);
        ::close(std::exchange(fd_, -1));
    }
}

namespace {

// Returns false on clean EOF at the first byte; throws on mid-read EOF.
bool read_exact(Stream& s, std::uint8_t* buf, std::size_t len) {
    std::size_t got = 0;
    while (got < len) {
        const std::size_t chunk = s.read_some(buf + got, len - got);
        if (chunk == 0) {
            if (got == 0) return false;
            throw std::runtime_error("net: connection closed mid-frame");
        }
        got += chunk;
    }
    return true;
}

}  // namespace

void write_frame(Stream& s, const proto::Frame& frame) {
    const auto bytes = proto::frame_bytes(frame);
    s.write_all(bytes.data(), bytes.size());
}

std::optional<proto::Frame> read_frame(Stream& s) {
    std::uint8_t hdr[4];
    if (!read_exact(s, hdr, 4)) return std::nullopt;
    const std::uint32_t len = (static_cast<std::uint32_t>(hdr[0]) << 24) |
                              (static_cast<std::uint32_t>(hdr[1]) << 16) |
                              (static_cast<std::uint32_t>(hdr[2]) << 8) |
                              static_cast<std::uint32_t>(hdr[3]);
    if (len == 0 || len > proto::kMaxFrameBytes)
        throw std::runtime_error("net: frame length out of bounds");
    proto::Frame frame;
    std::uint8_t type;
    if (!read_exact(s, &type, 1)) throw std::runtime_error("net: connection closed mid-frame");
    frame.type = static_cast<proto::FrameType>(type);
    frame.payload.resize(len - 1);
    if (len > 1 && !read_exact(s, frame.payload.data(), frame.payload.size()))
        throw std::runtime_error("net: connection closed mid-frame");
    return frame;
}

ProtocolError::ProtocolError(proto::ErrorCode code_, const std::string& message)
    : std::runtime_error("peer error " + std::to_string(static_cast<int>(code_)) + ": " + message),
      code(code_) {}

proto::Frame expect_frame(Stream& s, proto::FrameType want) {
    auto frame = read_frame(s);
    if (!frame) throw std::runtime_error("net: connection closed while awaiting frame");
    if (frame->type == proto::FrameType::error) {
        const auto err = proto::decode_error(frame->payload);
        throw ProtocolError(err.code, err.message);
    }
    if (frame->type != want) throw std::runtime_error("net: unexpected frame type");
    return *frame;
}

}  // namespace pufauth::net
