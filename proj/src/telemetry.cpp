#include "foveastream/telemetry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "foveastream/errors.hpp"
#include "foveastream/rng.hpp"

namespace foveastream {

namespace {

void put_u32(std::uint8_t* out, std::uint32_t v) {
  out[0] = static_cast<std::uint8_t>(v);
  out[1] = static_cast<std::uint8_t>(v >> 8);
  out[2] = static_cast<std::uint8_t>(v >> 16);
  out[3] = static_cast<std::uint8_t>(v >> 24);
}

void put_u64(std::uint8_t* out, std::uint64_t v) {
  for (int k = 0; k < 8; ++k) {
    out[k] = static_cast<std::uint8_t>(v >> (8 * k));
  }
}

std::uint32_t get_u32(const std::uint8_t* in) {
  return static_cast<std::uint32_t>(in[0]) |
         static_cast<std::uint32_t>(in[1]) << 8 |
         static_cast<std::uint32_t>(in[2]) << 16 |
         static_cast<std::uint32_t>(in[3]) << 24;
}

std::uint64_t get_u64(const std::uint8_t* in) {
  std::uint64_t v = 0;
  for (int k = 7; k >= 0; --k) {
    v = v << 8 | in[k];
  }
  return v;
}

bool norm_ok(float v) { return v >= 0.0f && v <= 1.0f; }

}  // namespace

std::array<std::uint8_t, kGazeMessageSize> encode(const GazeMessage& msg) {
  if (!norm_ok(msg.x_norm) || !norm_ok(msg.y_norm)) {
    throw DomainError("normalized coordinates must be in [0, 1], got (" +
                      std::to_string(msg.x_norm) + ", " +
                      std::to_string(msg.y_norm) + ")");
  }
  std::array<std::uint8_t, kGazeMessageSize> out{};
  out[0] = kMagic0;
  out[1] = kMagic1;
  out[2] = msg.version;
  out[3] = msg.flags;
  put_u32(&out[4], msg.seq);
  put_u64(&out[8], msg.timestamp_us);
  put_u32(&out[16], std::bit_cast<std::uint32_t>(msg.x_norm));
  put_u32(&out[20], std::bit_cast<std::uint32_t>(msg.y_norm));
  return out;
}

GazeMessage decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kGazeMessageSize) {
    throw DecodeError(DecodeError::Kind::kBadLength,
                      "expected " + std::to_string(kGazeMessageSize) +
                          " bytes, got " + std::to_string(bytes.size()));
  }
  if (bytes[0] != kMagic0 || bytes[1] != kMagic1) {
    throw DecodeError(DecodeError::Kind::kBadMagic, "bad magic bytes");
  }
  if (bytes[2] != kProtocolVersion) {
    throw DecodeError(DecodeError::Kind::kUnsupportedVersion,
                      "unsupported protocol version " +
                          std::to_string(bytes[2]));
  }
  GazeMessage msg;
  msg.version = bytes[2];
  msg.flags = bytes[3];
  msg.seq = get_u32(&bytes[4]);
  msg.timestamp_us = get_u64(&bytes[8]);
  msg.x_norm = std::bit_cast<float>(get_u32(&bytes[16]));
  msg.y_norm = std::bit_cast<float>(get_u32(&bytes[20]));
  if (!norm_ok(msg.x_norm) || !norm_ok(msg.y_norm)) {
    throw DecodeError(DecodeError::Kind::kCoordinateOutOfRange,
                      "decoded coordinate outside [0, 1]");
  }
  return msg;
}

void validate(const ChannelSpec& spec) {
  if (!(spec.base_latency_ms >= 0.0) || !std::isfinite(spec.base_latency_ms)) {
    throw DomainError("base_latency_ms must be >= 0");
  }
  if (!(spec.jitter_ms >= 0.0) || !std::isfinite(spec.jitter_ms)) {
    throw DomainError("jitter_ms must be >= 0");
  }
  if (!(spec.loss_prob >= 0.0 && spec.loss_prob <= 1.0)) {
    throw DomainError("loss_prob must be in [0, 1]");
  }
}

std::vector<Arrival> channel_transmit(std::span<const TimedMessage> messages,
                                      const ChannelSpec& spec) {
  validate(spec);
  for (std::size_t k = 1; k < messages.size(); ++k) {
    if (messages[k].send_time_us < messages[k - 1].send_time_us) {
      throw DomainError("send times must be non-decreasing");
    }
  }

  Rng rng(spec.seed);
  std::vector<Arrival> arrivals;
  arrivals.reserve(messages.size());
  for (const TimedMessage& tm : messages) {
    if (rng.uniform01() < spec.loss_prob) {
      continue;
    }
    double latency_ms = spec.base_latency_ms;
    if (spec.jitter_ms > 0.0) {
      latency_ms += rng.uniform(-spec.jitter_ms, spec.jitter_ms);
    }
    const std::int64_t latency_us =
        std::max<std::int64_t>(0, std::llround(latency_ms * 1000.0));
    arrivals.push_back(Arrival{tm.send_time_us + latency_us, tm.msg});
  }
  std::stable_sort(arrivals.begin(), arrivals.end(),
                   [](const Arrival& a, const Arrival& b) {
                     return a.arrival_time_us < b.arrival_time_us;
                   });
  return arrivals;
}

bool LatestGazeCell::offer(const GazeMessage& msg, std::int64_t now_us) {
  std::lock_guard<std::mutex> lock(mu_);
  if (state_ && msg.seq <= state_->msg.seq) {
    return false;
  }
  state_ = Snapshot{msg, now_us};
  return true;
}

std::optional<LatestGazeCell::Snapshot> LatestGazeCell::read() const {
  std::lock_guard<std::mutex> lock(mu_);
  return state_;
}

}  // namespace foveastream
