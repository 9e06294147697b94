#include "hocean/wire.h"

#include <cmath>
#include <json.hpp>
#include <openssl/evp.h>
#include <openssl/sha.h>

#include "hocean/error.h"
#include "hocean/frame_io.h"

namespace hocean {

using nlohmann::json;

std::string base64_encode(const unsigned char* data, std::size_t size) {
  std::string out(4 * ((size + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), data, static_cast<int>(size));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<unsigned char> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw IoError("base64 length is not a multiple of 4");
  std::vector<unsigned char> out(3 * (text.size() / 4) + 1);
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) throw IoError("malformed base64");
  std::size_t len = static_cast<std::size_t>(n);
  // EVP_DecodeBlock keeps the bytes that padding stands for.
  if (!text.empty() && text.back() == '=') --len;
  if (text.size() >= 2 && text[text.size() - 2] == '=') --len;
  out.resize(len);
  return out;
}

std::string encode_frame_message(const FrameSnapshot& f) {
  if (f.heights.size() != static_cast<std::size_t>(f.nx) * static_cast<std::size_t>(f.ny)) {
    throw IoError("frame heights do not match the announced resolution");
  }
  const auto bytes = encode_float32_le(f.heights);
  json j;
  j["type"] = "frame";
  j["t"] = f.t;
  j["res"] = {f.nx, f.ny};
  j["origin"] = {f.origin.x, f.origin.y};
  j["spacing"] = f.spacing;
  j["heights"] = base64_encode(bytes.data(), bytes.size());
  json bodies = json::array();
  for (const auto& b : f.bodies) {
    bodies.push_back({{"id", b.id}, {"pos", {b.position.x, b.position.y, b.position.z}}, {"yaw", b.yaw}});
  }
  j["bodies"] = bodies;
  if (f.particles >= 0) j["particles"] = f.particles;
  return j.dump();
}

DecodedFrame decode_frame_message(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("type").get<std::string>() != "frame") throw IoError("not a frame message");
    DecodedFrame f;
    f.t = j.at("t").get<double>();
    f.nx = j.at("res").at(0).get<int>();
    f.ny = j.at("res").at(1).get<int>();
    f.origin = {j.at("origin").at(0).get<double>(), j.at("origin").at(1).get<double>()};
    f.spacing = j.at("spacing").get<double>();
    const auto bytes = base64_decode(j.at("heights").get<std::string>());
    f.heights = decode_float32_le(bytes.data(), bytes.size());
    if (f.heights.size() != static_cast<std::size_t>(f.nx) * static_cast<std::size_t>(f.ny)) {
      throw IoError("frame heights do not match the announced resolution");
    }
    for (const auto& b : j.at("bodies")) {
      BodyState s;
      s.id = b.at("id").get<int>();
      s.position = {b.at("pos").at(0).get<double>(), b.at("pos").at(1).get<double>(), b.at("pos").at(2).get<double>()};
      s.yaw = b.at("yaw").get<double>();
      f.bodies.push_back(s);
    }
    if (j.contains("particles")) f.particles = j.at("particles").get<long>();
    return f;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed frame message: ") + e.what());
  }
}

std::string encode_input_message(const InputMessage& in) {
  json j;
  j["type"] = "input";
  j["id"] = in.id;
  j["thrust"] = in.thrust;
  j["rudder"] = in.rudder;
  return j.dump();
}

std::optional<InputMessage> parse_input_message(std::string_view text, std::string* error) {
  auto fail = [&](const std::string& why) -> std::optional<InputMessage> {
    if (error != nullptr) *error = why;
    return std::nullopt;
  };
  const json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return fail("not valid JSON");
  if (!j.is_object()) return fail("message is not an object");
  if (!j.contains("type") || !j["type"].is_string() || j["type"] != "input") return fail("type must be \"input\"");
  if (!j.contains("id") || !j["id"].is_number_integer()) return fail("id must be an integer");
  for (const char* k : {"thrust", "rudder"}) {
    if (!j.contains(k) || !j[k].is_number()) return fail(std::string(k) + " must be a number");
    const double v = j[k].get<double>();
    if (!std::isfinite(v) || v < -1.0 || v > 1.0) return fail(std::string(k) + " must lie in [-1, 1]");
  }
  InputMessage m;
  m.id = j["id"].get<int>();
  m.thrust = j["thrust"].get<double>();
  m.rudder = j["rudder"].get<double>();
  return m;
}

std::string length_prefixed(std::string_view payload) {
  if (payload.size() > kMaxMessageBytes) throw IoError("message too large");
  const auto n = static_cast<std::uint32_t>(payload.size());
  std::string out;
  out.reserve(payload.size() + 4);
  out.push_back(static_cast<char>((n >> 24) & 0xffu));
  out.push_back(static_cast<char>((n >> 16) & 0xffu));
  out.push_back(static_cast<char>((n >> 8) & 0xffu));
  out.push_back(static_cast<char>(n & 0xffu));
  out.append(payload);
  return out;
}

std::optional<std::string> LengthPrefixedDecoder::next() {
  if (buffer_.size() < 4) return std::nullopt;
  const auto* p = reinterpret_cast<const unsigned char*>(buffer_.data());
  const std::size_t n = (static_cast<std::size_t>(p[0]) << 24) | (static_cast<std::size_t>(p[1]) << 16) |
                        (static_cast<std::size_t>(p[2]) << 8) | static_cast<std::size_t>(p[3]);
  if (n > kMaxMessageBytes) throw IoError("announced message length exceeds the limit");
  if (buffer_.size() < 4 + n) return std::nullopt;
  std::string msg = buffer_.substr(4, n);
  buffer_.erase(0, 4 + n);
  return msg;
}

std::string websocket_accept(std::string_view key) {
  static constexpr std::string_view kGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";
  std::string joined(key);
  joined.append(kGuid);
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(joined.data()), joined.size(), digest);
  return base64_encode(digest, sizeof digest);
}

std::string websocket_frame(std::string_view payload, WsOpcode opcode, bool mask, std::uint32_t mask_key) {
  std::string out;
  out.push_back(static_cast<char>(0x80u | static_cast<unsigned>(opcode)));
  const std::size_t n = payload.size();
  const unsigned mask_bit = mask ? 0x80u : 0u;
  if (n < 126) {
    out.push_back(static_cast<char>(mask_bit | n));
  } else if (n <= 0xffff) {
    out.push_back(static_cast<char>(mask_bit | 126u));
    out.push_back(static_cast<char>((n >> 8) & 0xffu));
    out.push_back(static_cast<char>(n & 0xffu));
  } else {
    out.push_back(static_cast<char>(mask_bit | 127u));
    for (int s = 56; s >= 0; s -= 8) out.push_back(static_cast<char>((static_cast<std::uint64_t>(n) >> s) & 0xffu));
  }
  if (!mask) {
    out.append(payload);
    return out;
  }
  const unsigned char key[4] = {static_cast<unsigned char>(mask_key >> 24), static_cast<unsigned char>(mask_key >> 16),
                                static_cast<unsigned char>(mask_key >> 8), static_cast<unsigned char>(mask_key)};
  out.append(reinterpret_cast<const char*>(key), 4);
  for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<char>(payload[i] ^ key[i % 4]));
  return out;
}

std::optional<WsMessage> WebSocketDecoder::next() {
  while (true) {
    if (buffer_.size() < 2) return std::nullopt;
    const auto* p = reinterpret_cast<const unsigned char*>(buffer_.data());
    const bool fin = (p[0] & 0x80u) != 0;
    const auto opcode = static_cast<WsOpcode>(p[0] & 0x0fu);
    const bool masked = (p[1] & 0x80u) != 0;
    std::size_t len = p[1] & 0x7fu;
    std::size_t pos = 2;
    if (len == 126) {
      if (buffer_.size() < 4) return std::nullopt;
      len = (static_cast<std::size_t>(p[2]) << 8) | p[3];
      pos = 4;
    } else if (len == 127) {
      if (buffer_.size() < 10) return std::nullopt;
      std::uint64_t v = 0;
      for (int i = 0; i < 8; ++i) v = (v << 8) | p[2 + i];
      if (v > kMaxMessageBytes) throw IoError("websocket frame exceeds the limit");
      len = static_cast<std::size_t>(v);
      pos = 10;
    }
    if (len > kMaxMessageBytes) throw IoError("websocket frame exceeds the limit");
    unsigned char key[4] = {0, 0, 0, 0};
    if (masked) {
      if (buffer_.size() < pos + 4) return std::nullopt;
      for (int i = 0; i < 4; ++i) key[i] = p[pos + i];
      pos += 4;
    }
    if (buffer_.size() < pos + len) return std::nullopt;
    std::string payload = buffer_.substr(pos, len);
    if (masked) {
      for (std::size_t i = 0; i < len; ++i) payload[i] = static_cast<char>(payload[i] ^ key[i % 4]);
    }
    buffer_.erase(0, pos + len);

    const bool control = (static_cast<unsigned>(opcode) & 0x8u) != 0;
    if (control) return WsMessage{opcode, std::move(payload)};
    if (opcode != WsOpcode::kContinuation) {
      fragments_.clear();
      fragment_opcode_ = opcode;
    }
    fragments_ += payload;
    if (fragments_.size() > kMaxMessageBytes) throw IoError("websocket message exceeds the limit");
    if (fin) {
      WsMessage m{fragment_opcode_, std::move(fragments_)};
      fragments_.clear();
      return m;
    }
  }
}

}  // namespace hocean
