#ifndef FOVEASTREAM_TELEMETRY_HPP_
#define FOVEASTREAM_TELEMETRY_HPP_

#include <array>
#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace foveastream {

// One gaze update on the wire. Coordinates are normalized to [0, 1] so the
// sender and receiver may disagree on frame size; conversion to pixels
// happens against the receiver's GridSpec.
struct GazeMessage {
  std::uint8_t version = 1;
  std::uint8_t flags = 1;  // bit 0 = valid
  std::uint32_t seq = 0;
  std::uint64_t timestamp_us = 0;
  float x_norm = 0.0f;
  float y_norm = 0.0f;

  bool valid() const { return (flags & 0x01) != 0; }

  friend bool operator==(const GazeMessage&, const GazeMessage&) = default;
};

inline constexpr std::size_t kGazeMessageSize = 24;
inline constexpr std::uint8_t kMagic0 = 0x47;  // 'G'
inline constexpr std::uint8_t kMagic1 = 0x5A;  // 'Z'
inline constexpr std::uint8_t kProtocolVersion = 1;

class DecodeError : public std::runtime_error {
 public:
  enum class Kind {
    kBadLength,
    kBadMagic,
    kUnsupportedVersion,
    kCoordinateOutOfRange,
  };

  DecodeError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Fixed 24-byte little-endian layout:
//   offset 0  magic 0x47 0x5A
//   offset 2  version      u8
//   offset 3  flags        u8
//   offset 4  seq          u32
//   offset 8  timestamp_us u64
//   offset 16 x_norm       f32
//   offset 20 y_norm       f32
// Throws DomainError when a coordinate is outside [0, 1].
std::array<std::uint8_t, kGazeMessageSize> encode(const GazeMessage& msg);

// Inverse of encode. Throws DecodeError with the matching Kind on wrong
// length, wrong magic, unsupported version, or out-of-range coordinates.
GazeMessage decode(std::span<const std::uint8_t> bytes);

// Simulated client->server path. Latency per message is
// base_latency_ms + U(-jitter_ms, +jitter_ms), floored at zero so nothing
// arrives before it was sent; each message is independently lost with
// probability loss_prob. Fully determined by seed.
struct ChannelSpec {
  double base_latency_ms = 0.0;
  double jitter_ms = 0.0;
  double loss_prob = 0.0;
  std::uint64_t seed = 0;
};

void validate(const ChannelSpec& spec);

struct TimedMessage {
  std::int64_t send_time_us = 0;
  GazeMessage msg;
};

struct Arrival {
  std::int64_t arrival_time_us = 0;
  GazeMessage msg;
};

// Runs every message through the channel and returns the survivors sorted
// by arrival time (ties keep send order). Reordering happens naturally
// once jitter exceeds the send spacing. Send times must be non-decreasing.
std::vector<Arrival> channel_transmit(std::span<const TimedMessage> messages,
                                      const ChannelSpec& spec);

// Latest-wins gaze register: a message is accepted only when its seq is
// strictly greater than the held one, so stale or reordered arrivals are
// discarded. One writer thread may offer() while any number of readers
// read() consistent snapshots.
class LatestGazeCell {
 public:
  struct Snapshot {
    GazeMessage msg;
    std::int64_t last_update_us = 0;
  };

  // Returns true and replaces the content iff the cell is empty or
  // msg.seq > current seq. last_update_us is set to now_us on accept.
  bool offer(const GazeMessage& msg, std::int64_t now_us);

  std::optional<Snapshot> read() const;

 private:
  mutable std::mutex mu_;
  std::optional<Snapshot> state_;
};

}  // namespace foveastream

#endif  // FOVEASTREAM_TELEMETRY_HPP_
