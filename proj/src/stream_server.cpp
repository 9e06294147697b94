#include "hocean/stream_server.h"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstring>
#include <memory>

#include "hocean/error.h"

namespace hocean {

namespace {

enum class Framing { kDetect, kRaw, kHandshake, kWebSocket };

struct Client {
  int fd = -1;
  Framing framing = Framing::kDetect;
  std::string in;
  std::string out;
  std::uint64_t sent_seq = 0;
  bool closing = false;
  LengthPrefixedDecoder raw;
  WebSocketDecoder ws;
};

void set_nonblocking(int fd) {
  const int flags = fcntl(fd, F_GETFL, 0);
  fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string header_value(const std::string& request, const std::string& name) {
  const std::string lreq = lower(request);
  const std::string key = "\r\n" + lower(name) + ":";
  const auto pos = lreq.find(key);
  if (pos == std::string::npos) return {};
  auto start = pos + key.size();
  const auto end = request.find("\r\n", start);
  std::string v = request.substr(start, end - start);
  const auto b = v.find_first_not_of(" \t");
  const auto e = v.find_last_not_of(" \t");
  return b == std::string::npos ? std::string{} : v.substr(b, e - b + 1);
}

}  // namespace

StreamServer::~StreamServer() { stop(); }

int StreamServer::start(int port, const std::string& bind_address) {
  if (running_.load()) throw IoError("stream server already running");
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw IoError(std::string("socket: ") + std::strerror(errno));
  const int one = 1;
  setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (inet_pton(AF_INET, bind_address.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw IoError("invalid bind address '" + bind_address + "'");
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(listen_fd_, 8) != 0) {
    const std::string why = std::strerror(errno);
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw IoError("cannot bind port " + std::to_string(port) + ": " + why);
  }
  socklen_t len = sizeof addr;
  getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  set_nonblocking(listen_fd_);
  running_.store(true);
  thread_ = std::thread([this] { loop(); });
  return port_;
}

void StreamServer::stop() {
  if (!running_.exchange(false)) return;
  if (thread_.joinable()) thread_.join();
  if (listen_fd_ >= 0) ::close(listen_fd_);
  listen_fd_ = -1;
}

void StreamServer::publish(std::string message) {
  std::lock_guard<std::mutex> lock(frame_mutex_);
  latest_ = std::move(message);
  ++latest_seq_;
}

std::vector<InputMessage> StreamServer::take_inputs() {
  std::lock_guard<std::mutex> lock(input_mutex_);
  std::vector<InputMessage> out;
  out.swap(inputs_);
  return out;
}

void StreamServer::loop() {
  std::vector<std::unique_ptr<Client>> clients;

  auto handle_message = [this](const std::string& text) {
    if (auto msg = parse_input_message(text)) {
      std::lock_guard<std::mutex> lock(input_mutex_);
      inputs_.push_back(*msg);
      ++accepted_;
    } else {
      ++rejected_;
    }
  };

  auto process_input = [&](Client& c) {
    if (c.framing == Framing::kDetect && c.in.size() >= 4) {
      c.framing = c.in.compare(0, 4, "GET ") == 0 ? Framing::kHandshake : Framing::kRaw;
    }
    if (c.framing == Framing::kHandshake) {
      const auto end = c.in.find("\r\n\r\n");
      if (end == std::string::npos) {
        if (c.in.size() > 16384) c.closing = true;
        return;
      }
      const std::string request = c.in.substr(0, end + 2);
      c.in.erase(0, end + 4);
      const std::string key = header_value(request, "Sec-WebSocket-Key");
      if (key.empty()) {
        c.out += "HTTP/1.1 400 Bad Request\r\nContent-Length: 0\r\nConnection: close\r\n\r\n";
        c.closing = true;
        return;
      }
      c.out += "HTTP/1.1 101 Switching Protocols\r\nUpgrade: websocket\r\nConnection: Upgrade\r\n"
               "Sec-WebSocket-Accept: " + websocket_accept(key) + "\r\n\r\n";
      c.framing = Framing::kWebSocket;
    }
    try {
      if (c.framing == Framing::kRaw) {
        c.raw.feed(c.in.data(), c.in.size());
        c.in.clear();
        while (auto m = c.raw.next()) handle_message(*m);
      } else if (c.framing == Framing::kWebSocket) {
        c.ws.feed(c.in.data(), c.in.size());
        c.in.clear();
        while (auto m = c.ws.next()) {
          if (m->opcode == WsOpcode::kClose) {
            c.out += websocket_frame("", WsOpcode::kClose);
            c.closing = true;
          } else if (m->opcode == WsOpcode::kPing) {
            c.out += websocket_frame(m->payload, WsOpcode::kPong);
          } else if (m->opcode == WsOpcode::kText || m->opcode == WsOpcode::kBinary) {
            handle_message(m->payload);
          }
        }
      }
    } catch (const IoError&) {
      ++rejected_;
      c.closing = true;
    }
  };

  while (running_.load()) {
    std::vector<pollfd> fds;
    fds.push_back({listen_fd_, POLLIN, 0});
    for (const auto& c : clients) {
      short ev = POLLIN;
      if (!c->out.empty()) ev |= POLLOUT;
      fds.push_back({c->fd, ev, 0});
    }
    ::poll(fds.data(), fds.size(), 10);

    if ((fds[0].revents & POLLIN) != 0) {
      while (true) {
        const int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) break;
        set_nonblocking(fd);
        const int one = 1;
        setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        auto c = std::make_unique<Client>();
        c->fd = fd;
        clients.push_back(std::move(c));
      }
    }

    for (std::size_t i = 0; i < clients.size(); ++i) {
      Client& c = *clients[i];
      const short rev = i + 1 < fds.size() ? fds[i + 1].revents : 0;
      if ((rev & (POLLIN | POLLHUP | POLLERR)) != 0) {
        char buf[65536];
        while (true) {
          const ssize_t n = ::recv(c.fd, buf, sizeof buf, 0);
          if (n > 0) {
            c.in.append(buf, static_cast<std::size_t>(n));
            continue;
          }
          if (n == 0 || (errno != EAGAIN && errno != EWOULDBLOCK)) c.closing = true;
          break;
        }
        process_input(c);
      }
    }

    std::string frame;
    std::uint64_t seq = 0;
    {
      std::lock_guard<std::mutex> lock(frame_mutex_);
      seq = latest_seq_;
      if (std::any_of(clients.begin(), clients.end(), [&](const auto& c) {
            return c->sent_seq < seq && c->out.empty() &&
                   (c->framing == Framing::kRaw || c->framing == Framing::kWebSocket);
          })) {
        frame = latest_;
      }
    }
    for (auto& cp : clients) {
      Client& c = *cp;
      const bool ready = c.framing == Framing::kRaw || c.framing == Framing::kWebSocket;
      if (ready && !frame.empty() && c.sent_seq < seq && c.out.empty() && !c.closing) {
        c.out = c.framing == Framing::kRaw ? length_prefixed(frame) : websocket_frame(frame);
        c.sent_seq = seq;
      }
      while (!c.out.empty()) {
        const ssize_t n = ::send(c.fd, c.out.data(), c.out.size(), MSG_NOSIGNAL);
        if (n > 0) {
          c.out.erase(0, static_cast<std::size_t>(n));
          continue;
        }
        if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK) {
          c.out.clear();
          c.closing = true;
        }
        break;
      }
    }

    for (auto it = clients.begin(); it != clients.end();) {
      if ((*it)->closing && (*it)->out.empty()) {
        ::close((*it)->fd);
        it = clients.erase(it);
      } else {
        ++it;
      }
    }
    clients_.store(clients.size());
  }
  for (auto& c : clients) ::close(c->fd);
  clients_.store(0);
}

}  // namespace hocean
