#include "foveastream/udp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

namespace foveastream {

namespace {

sockaddr_in make_addr(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw std::runtime_error("cannot parse IPv4 address: " + host);
  }
  return addr;
}

[[noreturn]] void throw_errno(const char* what) {
  throw std::runtime_error(std::string(what) + ": " + std::strerror(errno));
}

}  // namespace

UdpSender::UdpSender(const std::string& host, std::uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd_ < 0) {
    throw_errno("socket");
  }
  const sockaddr_in addr = make_addr(host, port);
  if (::connect(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) <
      0) {
    ::close(fd_);
    fd_ = -1;
    throw_errno("connect");
  }
}

UdpSender::~UdpSender() {
  if (fd_ >= 0) {
    ::close(fd_);
  }
}

void UdpSender::send(std::span<const std::uint8_t> datagram) {
  if (::send(fd_, datagram.data(), datagram.size(), 0) < 0) {
    throw_errno("send");
  }
}

UdpReceiver::UdpReceiver(const std::string& host, std::uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd_ < 0) {
    throw_errno("socket");
  }
  const int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  const sockaddr_in addr = make_addr(host, port);
  if (::bind(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) < 0) {
    ::close(fd_);
    fd_ = -1;
    throw_errno("bind");
  }
}

UdpReceiver::~UdpReceiver() {
  if (fd_ >= 0) {
    ::close(fd_);
  }
}

std::vector<std::uint8_t> UdpReceiver::receive(int timeout_ms) {
  pollfd pfd{fd_, POLLIN, 0};
  const int ready = ::poll(&pfd, 1, timeout_ms);
  if (ready < 0) {
    throw_errno("poll");
  }
  if (ready == 0) {
    return {};
  }
  std::vector<std::uint8_t> buf(2048);
  const ssize_t n = ::recv(fd_, buf.data(), buf.size(), 0);
  if (n < 0) {
    throw_errno("recv");
  }
  buf.resize(static_cast<std::size_t>(n));
  return buf;
}

}  // namespace foveastream
