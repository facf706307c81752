/* Copyright 2026 The lkt Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// TCP transport for sessions: newline-delimited JSON frames, one session per
// connection, one thread per connection.

#ifndef LKT_SERVE_HPP
#define LKT_SERVE_HPP

#include <atomic>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include <boost/asio.hpp>
#include <nlohmann/json.hpp>

#include "lkt/session.hpp"

namespace lkt {

namespace asio = boost::asio;
using asio::ip::tcp;

class Server {
 public:
  using Factory = std::function<Session()>;

  // Port 0 picks a free port.
  Server(Factory factory, unsigned short port, const std::string& host = "127.0.0.1")
      : factory_(std::move(factory)), acceptor_(io_, tcp::endpoint(asio::ip::make_address(host), port)) {}

  ~Server() { stop(); }

  unsigned short port() const { return acceptor_.local_endpoint().port(); }

  // Accepts connections until stop().
  void run() {
    for (;;) {
      auto sock = std::make_shared<tcp::socket>(io_);
      boost::system::error_code ec;
      acceptor_.accept(*sock, ec);
      if (stopping_) return;
      if (ec) continue;
      std::lock_guard lock(mu_);
      sockets_.push_back(sock);
      workers_.emplace_back([this, sock] { serve(*sock); });
    }
  }

  void start() {
    runner_ = std::thread([this] { run(); });
  }

  void stop() {
    if (stopping_.exchange(true)) return;
    boost::system::error_code ec;
    // Wake a blocked accept with a throwaway connection.
    {
      tcp::socket poke(io_);
      poke.connect(acceptor_.local_endpoint(), ec);
    }
    if (runner_.joinable()) runner_.join();
    acceptor_.close(ec);
    std::lock_guard lock(mu_);
    for (auto& s : sockets_) s->shutdown(tcp::socket::shutdown_both, ec);
    for (auto& t : workers_)
      if (t.joinable()) t.join();
  }

 private:
  void serve(tcp::socket& sock) {
    boost::system::error_code ec;
    Session session = factory_();
    auto send = [&](const std::vector<nlohmann::json>& frames) {
      for (const auto& f : frames) {
        std::string line = f.dump() + "\n";
        asio::write(sock, asio::buffer(line), ec);
      }
    };
    send(session.start());
    asio::streambuf buf;
    while (!ec) {
      size_t n = asio::read_until(sock, buf, '\n', ec);
      if (ec) break;
      std::string line(asio::buffers_begin(buf.data()), asio::buffers_begin(buf.data()) + n);
      buf.consume(n);
      while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
      if (line.empty()) continue;
      auto msg = nlohmann::json::parse(line, nullptr, false);
      if (msg.is_discarded()) send({{{"type", "illegal"}, {"reason", "frame is not valid JSON"}}});
      else send(session.handle(msg));
    }
    sock.close(ec);
  }

  Factory factory_;
  asio::io_context io_;
  tcp::acceptor acceptor_;
  std::atomic<bool> stopping_{false};
  std::thread runner_;
  std::mutex mu_;
  std::list<std::shared_ptr<tcp::socket>> sockets_;
  std::list<std::thread> workers_;
};

// Blocking line-oriented client, for scripts and tests.
class FrameClient {
 public:
  FrameClient(const std::string& host, unsigned short port) : sock_(io_) {
    sock_.connect(tcp::endpoint(asio::ip::make_address(host), port));
  }

  nlohmann::json receive() {
    size_t n = asio::read_until(sock_, buf_, '\n');
    std::string line(asio::buffers_begin(buf_.data()), asio::buffers_begin(buf_.data()) + n);
    buf_.consume(n);
    return nlohmann::json::parse(line);
  }

  void send(const nlohmann::json& frame) {
    std::string line = frame.dump() + "\n";
    asio::write(sock_, asio::buffer(line));
  }

  void send_raw(const std::string& line) { asio::write(sock_, asio::buffer(line + "\n")); }

 private:
  asio::io_context io_;
  tcp::socket sock_;
  asio::streambuf buf_;
};

}  // namespace lkt

#endif  // LKT_SERVE_HPP
