#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

namespace fade10g {

// ---------------------------------------------------------------------------
// Protocol constants
// ---------------------------------------------------------------------------

inline constexpr std::uint16_t kEthertype = 0xFADE;
inline constexpr std::uint16_t kProtocolVersion = 0x0100;

inline constexpr std::uint16_t kAckKind = 0x0003;
inline constexpr std::uint16_t kNackKind = 0x0004;
inline constexpr std::uint16_t kMarkerData = 0xA5A5;
inline constexpr std::uint16_t kMarkerLastData = 0xA5A6;
inline constexpr std::uint8_t kFillerByte = 0xA5;

// High-priority commands executed by the core itself. 0x0003/0x0004 are
// taken by ACK/NACK, so command codes avoid them; user commands start at
// kUserCommandBase.
inline constexpr std::uint16_t kCmdStart = 0x0001;
inline constexpr std::uint16_t kCmdStop = 0x0002;
inline constexpr std::uint16_t kCmdReset = 0x0005;
inline constexpr std::uint16_t kUserCommandBase = 0x0100;

inline constexpr std::size_t kWordsPerPacket = 1024;
inline constexpr std::size_t kPacketDataBytes = 8192;     // 1024 x 64-bit words
inline constexpr std::size_t kLastPacketDataBytes = 8184; // 1023 words, trailer holds the count
inline constexpr std::size_t kMaxLastPacketWords = 1023;

inline constexpr std::size_t kEthHeaderBytes = 14; // dst + src + ethertype
inline constexpr std::size_t kFcsBytes = 4;
// Header + version word + FCS around the payload.
inline constexpr std::size_t kFrameOverheadBytes = kEthHeaderBytes + 2 + kFcsBytes;
inline constexpr std::size_t kMinFrameBytes = 64; // minimum Ethernet frame incl. FCS

inline constexpr std::size_t kAckPayloadBytes = 12;
inline constexpr std::size_t kCommandRequestBytes = 8;
inline constexpr std::size_t kCommandResponseFieldBytes = 12;
inline constexpr std::size_t kDataPayloadBytes = 8216;
inline constexpr std::size_t kCommandResponsePacketBytes = 14;

// ---------------------------------------------------------------------------
// MAC address
// ---------------------------------------------------------------------------

struct MacAddress {
  std::array<std::uint8_t, 6> octets{};

  friend bool operator==(const MacAddress&, const MacAddress&) = default;

  std::string to_string() const {
    char buf[18];
    std::snprintf(buf, sizeof buf, "%02x:%02x:%02x:%02x:%02x:%02x", octets[0], octets[1],
                  octets[2], octets[3], octets[4], octets[5]);
    return buf;
  }

  static std::optional<MacAddress> parse(const std::string& text) {
    MacAddress mac;
    unsigned v[6];
    char tail;
    if (std::sscanf(text.c_str(), "%2x:%2x:%2x:%2x:%2x:%2x%c", &v[0], &v[1], &v[2], &v[3], &v[4],
                    &v[5], &tail) != 6) {
      return std::nullopt;
    }
    for (int i = 0; i < 6; ++i) mac.octets[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v[i]);
    return mac;
  }
};

struct MacHash {
  std::size_t operator()(const MacAddress& mac) const {
    std::size_t h = 1469598103934665603ull;
    for (auto b : mac.octets) h = (h ^ b) * 1099511628211ull;
    return h;
  }
};

// ---------------------------------------------------------------------------
// Sequence-number types and wraparound comparison
// ---------------------------------------------------------------------------

struct PacketNumber {
  std::uint32_t value = 0;
  friend bool operator==(const PacketNumber&, const PacketNumber&) = default;
};

struct FrameSeq {
  std::uint16_t value = 0;
  friend bool operator==(const FrameSeq&, const FrameSeq&) = default;
};

struct CommandSeq {
  std::uint16_t value = 0;
  friend bool operator==(const CommandSeq&, const CommandSeq&) = default;
};

enum class Ordering { older, equal, newer };

// Serial-number comparison at modulus 2^bits: a is newer than b when
// 1 <= (a - b) mod 2^bits <= 2^(bits-1). Zero difference is reported as
// equal rather than newer.
constexpr Ordering serial_compare(std::uint64_t a, std::uint64_t b, unsigned bits) {
  const std::uint64_t mask = (bits >= 64) ? ~0ull : ((1ull << bits) - 1);
  const std::uint64_t diff = (a - b) & mask;
  if (diff == 0) return Ordering::equal;
  const std::uint64_t half = 1ull << (bits - 1);
  return diff <= half ? Ordering::newer : Ordering::older;
}

constexpr Ordering packet_newer(PacketNumber a, PacketNumber b) {
  return serial_compare(a.value, b.value, 32);
}

constexpr Ordering seq_newer(FrameSeq a, FrameSeq b) {
  return serial_compare(a.value, b.value, 16);
}

}  // namespace fade10g
