#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "fade10g/crc32.hpp"
#include "fade10g/types.hpp"

namespace fade10g {

// ---------------------------------------------------------------------------
// Payload types
// ---------------------------------------------------------------------------

struct CommandResponseField {
  std::uint16_t command_code = 0;
  CommandSeq csn{};
  std::array<std::uint8_t, 8> return_value{};

  friend bool operator==(const CommandResponseField&, const CommandResponseField&) = default;
};

// 2a) Data acknowledgment (computer -> FPGA), 12 bytes.
struct Ack {
  std::uint16_t kind = kAckKind;  // kAckKind or kNackKind
  FrameSeq seq{};
  PacketNumber packet{};
  std::uint32_t delay_echo = 0;

  friend bool operator==(const Ack&, const Ack&) = default;
};

// 2b) User command request (computer -> FPGA), 8 bytes.
struct CommandRequest {
  std::uint16_t command_code = 0;
  CommandSeq csn{};
  std::uint32_t argument = 0;

  friend bool operator==(const CommandRequest&, const CommandRequest&) = default;
};

// 2c) Standard data packet (FPGA -> computer), 8216 bytes.
struct DataPacket {
  FrameSeq seq{};
  PacketNumber packet{};
  std::uint32_t delay = 0;
  CommandResponseField cmd_response{};
  std::array<std::uint8_t, kPacketDataBytes> data{};

  friend bool operator==(const DataPacket&, const DataPacket&) = default;
};

// 2d) Last data packet (FPGA -> computer), 8216 bytes. The trailing 64-bit
// word carries the number of valid data words (0..1023).
struct LastDataPacket {
  FrameSeq seq{};
  PacketNumber packet{};
  std::uint32_t delay = 0;
  CommandResponseField cmd_response{};
  std::array<std::uint8_t, kLastPacketDataBytes> data{};
  std::uint64_t valid_words = 0;

  friend bool operator==(const LastDataPacket&, const LastDataPacket&) = default;
};

// 2e) Dedicated command response packet (FPGA -> computer), 14 bytes.
struct CommandResponsePacket {
  CommandResponseField cmd_response{};

  friend bool operator==(const CommandResponsePacket&, const CommandResponsePacket&) = default;
};

using Payload = std::variant<Ack, CommandRequest, DataPacket, LastDataPacket, CommandResponsePacket>;

struct FrameHeader {
  MacAddress destination{};
  MacAddress source{};
  std::uint16_t ethertype = kEthertype;
  std::uint16_t version = kProtocolVersion;

  friend bool operator==(const FrameHeader&, const FrameHeader&) = default;
};

struct WireFrame {
  FrameHeader header{};
  Payload payload{};

  friend bool operator==(const WireFrame&, const WireFrame&) = default;
};

inline std::size_t payload_width(const Payload& p) {
  struct Width {
    std::size_t operator()(const Ack&) const { return kAckPayloadBytes; }
    std::size_t operator()(const CommandRequest&) const { return kCommandRequestBytes; }
    std::size_t operator()(const DataPacket&) const { return kDataPayloadBytes; }
    std::size_t operator()(const LastDataPacket&) const { return kDataPayloadBytes; }
    std::size_t operator()(const CommandResponsePacket&) const { return kCommandResponsePacketBytes; }
  };
  return std::visit(Width{}, p);
}

// Total on-wire length: header + version + payload + FCS, padded with 0xA5
// filler up to the 64-byte Ethernet minimum.
inline std::size_t encoded_frame_length(const Payload& p) {
  return std::max<std::size_t>(kMinFrameBytes, kFrameOverheadBytes + payload_width(p));
}

inline bool is_valid_command_code(std::uint16_t code) {
  if (code == kCmdStart || code == kCmdStop || code == kCmdReset) return true;
  // Codes below kUserCommandBase are reserved; the data markers stay out of
  // the command space so the first payload word always identifies the frame.
  return code >= kUserCommandBase && code != kMarkerData && code != kMarkerLastData;
}

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class InvalidPayload : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class DecodeError {
  truncated,
  bad_fcs,
  bad_ethertype,
  bad_version,
  unknown_payload_marker,
};

inline const char* decode_error_name(DecodeError e) {
  switch (e) {
    case DecodeError::truncated: return "truncated";
    case DecodeError::bad_fcs: return "bad_fcs";
    case DecodeError::bad_ethertype: return "bad_ethertype";
    case DecodeError::bad_version: return "bad_version";
    case DecodeError::unknown_payload_marker: return "unknown_payload_marker";
  }
  return "?";
}

struct DecodeFailure {
  DecodeError reason;
  // Present when the Ethernet header was readable, so the caller can
  // attribute the failure to a source address (e.g. the bad-version flag).
  std::optional<FrameHeader> header;
};

using Decoded = std::variant<WireFrame, DecodeFailure>;

// ---------------------------------------------------------------------------
// Big-endian helpers
// ---------------------------------------------------------------------------

namespace wire {

inline void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline void put64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  put32(out, static_cast<std::uint32_t>(v >> 32));
  put32(out, static_cast<std::uint32_t>(v));
}

inline std::uint16_t get16(std::span<const std::uint8_t> in, std::size_t off) {
  return static_cast<std::uint16_t>((in[off] << 8) | in[off + 1]);
}

inline std::uint32_t get32(std::span<const std::uint8_t> in, std::size_t off) {
  return (static_cast<std::uint32_t>(in[off]) << 24) | (static_cast<std::uint32_t>(in[off + 1]) << 16) |
         (static_cast<std::uint32_t>(in[off + 2]) << 8) | static_cast<std::uint32_t>(in[off + 3]);
}

inline std::uint64_t get64(std::span<const std::uint8_t> in, std::size_t off) {
  return (static_cast<std::uint64_t>(get32(in, off)) << 32) | get32(in, off + 4);
}

}  // namespace wire

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

namespace detail {

inline void put_cmd_response(std::vector<std::uint8_t>& out, const CommandResponseField& f) {
  wire::put16(out, f.command_code);
  wire::put16(out, f.csn.value);
  out.insert(out.end(), f.return_value.begin(), f.return_value.end());
}

inline CommandResponseField get_cmd_response(std::span<const std::uint8_t> in, std::size_t off) {
  CommandResponseField f;
  f.command_code = wire::get16(in, off);
  f.csn.value = wire::get16(in, off + 2);
  std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(off) + 4, 8, f.return_value.begin());
  return f;
}

struct PayloadEncoder {
  std::vector<std::uint8_t>& out;

  void operator()(const Ack& a) const {
    if (a.kind != kAckKind && a.kind != kNackKind)
      throw InvalidPayload("ack kind must be 0x0003 or 0x0004");
    wire::put16(out, a.kind);
    wire::put16(out, a.seq.value);
    wire::put32(out, a.packet.value);
    wire::put32(out, a.delay_echo);
  }

  void operator()(const CommandRequest& c) const {
    if (!is_valid_command_code(c.command_code))
      throw InvalidPayload("command code outside the protocol profile");
    wire::put16(out, c.command_code);
    wire::put16(out, c.csn.value);
    wire::put32(out, c.argument);
  }

  void operator()(const DataPacket& d) const {
    wire::put16(out, kMarkerData);
    wire::put16(out, d.seq.value);
    wire::put32(out, d.packet.value);
    wire::put32(out, d.delay);
    put_cmd_response(out, d.cmd_response);
    out.insert(out.end(), d.data.begin(), d.data.end());
  }

  void operator()(const LastDataPacket& d) const {
    if (d.valid_words > kMaxLastPacketWords) throw InvalidPayload("valid_words > 1023");
    wire::put16(out, kMarkerLastData);
    wire::put16(out, d.seq.value);
    wire::put32(out, d.packet.value);
    wire::put32(out, d.delay);
    put_cmd_response(out, d.cmd_response);
    out.insert(out.end(), d.data.begin(), d.data.end());
    wire::put64(out, d.valid_words);
  }

  void operator()(const CommandResponsePacket& r) const {
    // The two leading filler bytes double as the frame-type marker on the
    // FPGA-to-computer side; length separates this from a data packet.
    out.push_back(kFillerByte);
    out.push_back(kFillerByte);
    put_cmd_response(out, r.cmd_response);
  }
};

}  // namespace detail

inline std::vector<std::uint8_t> encode_frame(const FrameHeader& header, const Payload& payload) {
  std::vector<std::uint8_t> out;
  out.reserve(encoded_frame_length(payload));
  out.insert(out.end(), header.destination.octets.begin(), header.destination.octets.end());
  out.insert(out.end(), header.source.octets.begin(), header.source.octets.end());
  wire::put16(out, header.ethertype);
  wire::put16(out, header.version);
  std::visit(detail::PayloadEncoder{out}, payload);
  while (out.size() < kMinFrameBytes - kFcsBytes) out.push_back(kFillerByte);
  wire::put32(out, compute_fcs(out));
  return out;
}

// ---------------------------------------------------------------------------
// Decoding
// ---------------------------------------------------------------------------

inline Decoded decode_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kMinFrameBytes)
    return DecodeFailure{DecodeError::truncated, std::nullopt};

  FrameHeader header;
  std::copy_n(bytes.begin(), 6, header.destination.octets.begin());
  std::copy_n(bytes.begin() + 6, 6, header.source.octets.begin());
  header.ethertype = wire::get16(bytes, 12);
  header.version = wire::get16(bytes, 14);

  const std::uint32_t fcs = wire::get32(bytes, bytes.size() - kFcsBytes);
  if (fcs != compute_fcs(bytes.first(bytes.size() - kFcsBytes)))
    return DecodeFailure{DecodeError::bad_fcs, header};
  if (header.ethertype != kEthertype)
    return DecodeFailure{DecodeError::bad_ethertype, header};
  if (header.version != kProtocolVersion)
    return DecodeFailure{DecodeError::bad_version, header};

  // Body = payload plus possible 0xA5 filler; filler content is ignored.
  const auto body = bytes.subspan(kEthHeaderBytes + 2, bytes.size() - kFrameOverheadBytes);
  const std::uint16_t word0 = wire::get16(body, 0);

  WireFrame frame;
  frame.header = header;

  switch (word0) {
    case kMarkerData: {
      if (body.size() >= kDataPayloadBytes) {
        DataPacket d;
        d.seq.value = wire::get16(body, 2);
        d.packet.value = wire::get32(body, 4);
        d.delay = wire::get32(body, 8);
        d.cmd_response = detail::get_cmd_response(body, 12);
        std::copy_n(body.begin() + 24, kPacketDataBytes, d.data.begin());
        frame.payload = std::move(d);
      } else {
        // Short frame opening with 0xA5A5 filler: dedicated command response.
        CommandResponsePacket r;
        r.cmd_response = detail::get_cmd_response(body, 2);
        frame.payload = r;
      }
      return frame;
    }
    case kMarkerLastData: {
      if (body.size() < kDataPayloadBytes)
        return DecodeFailure{DecodeError::truncated, header};
      LastDataPacket d;
      d.seq.value = wire::get16(body, 2);
      d.packet.value = wire::get32(body, 4);
      d.delay = wire::get32(body, 8);
      d.cmd_response = detail::get_cmd_response(body, 12);
      std::copy_n(body.begin() + 24, kLastPacketDataBytes, d.data.begin());
      d.valid_words = wire::get64(body, 24 + kLastPacketDataBytes);
      frame.payload = std::move(d);
      return frame;
    }
    case kAckKind:
    case kNackKind: {
      Ack a;
      a.kind = word0;
      a.seq.value = wire::get16(body, 2);
      a.packet.value = wire::get32(body, 4);
      a.delay_echo = wire::get32(body, 8);
      frame.payload = a;
      return frame;
    }
    default: {
      if (!is_valid_command_code(word0))
        return DecodeFailure{DecodeError::unknown_payload_marker, header};
      CommandRequest c;
      c.command_code = word0;
      c.csn.value = wire::get16(body, 2);
      c.argument = wire::get32(body, 4);
      frame.payload = c;
      return frame;
    }
  }
}

}  // namespace fade10g
