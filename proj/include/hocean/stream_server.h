/**
 * @file stream_server.h
 * @brief Live state stream for the viewer.
 *
 * A background thread accepts TCP clients. The first bytes decide the
 * framing: "GET " starts a WebSocket upgrade, anything else is read as
 * length-prefixed messages. Every client receives the most recent published
 * frame (older unsent frames are dropped); input messages from any client go
 * into a single mailbox drained by the frame loop.
 */
#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "hocean/wire.h"

namespace hocean {

class StreamServer {
 public:
  StreamServer() = default;
  ~StreamServer();
  StreamServer(const StreamServer&) = delete;
  StreamServer& operator=(const StreamServer&) = delete;

  /// Binds and starts serving. Port 0 picks a free port. Returns the bound
  /// port; throws IoError when the port cannot be bound.
  int start(int port, const std::string& bind_address = "127.0.0.1");
  void stop();
  bool running() const { return running_.load(); }
  int port() const { return port_; }

  /// Replaces the latest-frame slot with an encoded message (JSON text).
  void publish(std::string message);

  /// Drains the input mailbox.
  std::vector<InputMessage> take_inputs();

  std::size_t client_count() const { return clients_.load(); }
  std::size_t rejected_messages() const { return rejected_.load(); }
  std::size_t accepted_inputs() const { return accepted_.load(); }

 private:
  void loop();

  int listen_fd_ = -1;
  int port_ = 0;
  std::thread thread_;
  std::atomic<bool> running_{false};
  std::atomic<std::size_t> clients_{0};
  std::atomic<std::size_t> rejected_{0};
  std::atomic<std::size_t> accepted_{0};

  std::mutex frame_mutex_;
  std::string latest_;
  std::uint64_t latest_seq_ = 0;

  std::mutex input_mutex_;
  std::vector<InputMessage> inputs_;
};

}  // namespace hocean
