/**
 * @file wire.h
 * @brief Viewer protocol: JSON messages, length-prefix and WebSocket framing.
 *
 * Server to client:
 *   {"type":"frame","t":..,"res":[w,h],"origin":[x,y],"spacing":..,
 *    "heights":"<base64 float32 LE, row-major>","bodies":[{"id":..,"pos":[x,y,z],"yaw":..}]}
 * Client to server:
 *   {"type":"input","id":int,"thrust":[-1,1],"rudder":[-1,1]}
 *
 * Raw TCP clients exchange messages with a 4-byte big-endian length prefix;
 * clients that open with an HTTP upgrade get WebSocket text frames instead.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hocean/vec.h"

namespace hocean {

struct BodyState {
  int id = 0;
  Vec3 position;
  double yaw = 0.0;
};

struct FrameSnapshot {
  double t = 0.0;
  int nx = 0;
  int ny = 0;
  Vec2 origin;
  double spacing = 0.0;
  std::vector<double> heights;  ///< row-major, sent as float32
  std::vector<BodyState> bodies;
  long particles = -1;  ///< optional "particles" field, omitted when negative
};

struct DecodedFrame {
  double t = 0.0;
  int nx = 0;
  int ny = 0;
  Vec2 origin;
  double spacing = 0.0;
  std::vector<float> heights;
  std::vector<BodyState> bodies;
  long particles = -1;
};

struct InputMessage {
  int id = 0;
  double thrust = 0.0;
  double rudder = 0.0;
};

std::string base64_encode(const unsigned char* data, std::size_t size);
/// Throws IoError on malformed input.
std::vector<unsigned char> base64_decode(std::string_view text);

std::string encode_frame_message(const FrameSnapshot& frame);
/// Throws IoError on malformed input.
DecodedFrame decode_frame_message(std::string_view json);

std::string encode_input_message(const InputMessage& input);
/// nullopt (with a reason in `error`) unless the text is a well-formed input message.
std::optional<InputMessage> parse_input_message(std::string_view json, std::string* error = nullptr);

inline constexpr std::size_t kMaxMessageBytes = 64u << 20;

std::string length_prefixed(std::string_view payload);

/// Incremental reader for length-prefixed messages.
class LengthPrefixedDecoder {
 public:
  void feed(const char* data, std::size_t size) { buffer_.append(data, size); }
  /// Next complete message; throws IoError if a length exceeds kMaxMessageBytes.
  std::optional<std::string> next();

 private:
  std::string buffer_;
};

/// Sec-WebSocket-Accept value for a client key.
std::string websocket_accept(std::string_view key);

enum class WsOpcode : std::uint8_t { kContinuation = 0, kText = 1, kBinary = 2, kClose = 8, kPing = 9, kPong = 10 };

/// One unfragmented frame. Clients must mask; servers must not.
std::string websocket_frame(std::string_view payload, WsOpcode opcode = WsOpcode::kText, bool mask = false,
                            std::uint32_t mask_key = 0x12345678u);

struct WsMessage {
  WsOpcode opcode = WsOpcode::kText;
  std::string payload;
};

/// Incremental WebSocket frame reader (reassembles fragmented messages).
class WebSocketDecoder {
 public:
  void feed(const char* data, std::size_t size) { buffer_.append(data, size); }
  std::optional<WsMessage> next();

 private:
  std::string buffer_;
  std::string fragments_;
  WsOpcode fragment_opcode_ = WsOpcode::kText;
};

}  // namespace hocean
