#ifndef FOVEASTREAM_UDP_HPP_
#define FOVEASTREAM_UDP_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace foveastream {

// Thin POSIX UDP wrappers for the live telemetry demo. The simulator never
// uses these; it runs on channel_transmit only.

class UdpSender {
 public:
  // Resolves host:port and opens a datagram socket. Throws std::runtime_error
  // on failure.
  UdpSender(const std::string& host, std::uint16_t port);
  ~UdpSender();

  UdpSender(const UdpSender&) = delete;
  UdpSender& operator=(const UdpSender&) = delete;

  void send(std::span<const std::uint8_t> datagram);

 private:
  int fd_ = -1;
};

class UdpReceiver {
 public:
  // Binds host:port. Throws std::runtime_error on failure.
  UdpReceiver(const std::string& host, std::uint16_t port);
  ~UdpReceiver();

  UdpReceiver(const UdpReceiver&) = delete;
  UdpReceiver& operator=(const UdpReceiver&) = delete;

  // Waits up to timeout_ms for one datagram. Returns it, or an empty vector
  // on timeout.
  std::vector<std::uint8_t> receive(int timeout_ms);

 private:
  int fd_ = -1;
};

}  // namespace foveastream

#endif  // FOVEASTREAM_UDP_HPP_
