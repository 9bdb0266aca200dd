#include "pedsafe/ws_transport.hpp"

#include <atomic>
#include <condition_variable>
#include <deque>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace pedsafe::server {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

namespace {

constexpr std::size_t kMaxQueuedFrames = 1024;

class WsSession : public Connection, public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket socket, Relay& relay)
      : ws_(std::move(socket)), strand_(ws_.get_executor()), relay_(relay) {}

  void start() { read_request(); }

  bool send(std::string_view text) override {
    if (closed_) return false;
    net::post(strand_, [self = shared_from_this(), msg = std::string(text)]() mutable {
      self->enqueue(std::move(msg));
    });
    return true;
  }

  void close() override {
    if (closed_.exchange(true)) return;
    net::post(strand_, [self = shared_from_this()] {
      self->ws_.async_close(websocket::close_code::normal, [self](beast::error_code) {});
    });
  }

 private:
  void read_request() {
    http::async_read(ws_.next_layer(), buffer_, request_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) {
                       self->on_request(ec);
                     });
  }

  void on_request(beast::error_code ec) {
    if (ec) return;
    if (!websocket::is_upgrade(request_) || request_.target() != kStreamPath) {
      auto res = std::make_shared<http::response<http::string_body>>(http::status::not_found,
                                                                     request_.version());
      res->set(http::field::content_type, "text/plain");
      res->body() = "websocket endpoint is " + std::string(kStreamPath) + "\n";
      res->prepare_payload();
      res->keep_alive(false);
      http::async_write(ws_.next_layer(), *res,
                        [self = shared_from_this(), res](beast::error_code, std::size_t) {
                          beast::error_code ignored;
                          self->ws_.next_layer().shutdown(tcp::socket::shutdown_both, ignored);
                        });
      return;
    }
    ws_.text(true);
    ws_.async_accept(request_, [self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->read_frame();
    });
  }

  void read_frame() {
    ws_.async_read(frame_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->closed_ = true;
        self->relay_.disconnect(self);
        return;
      }
      self->relay_.submit(self, beast::buffers_to_string(self->frame_.data()));
      self->frame_.consume(self->frame_.size());
      self->read_frame();
    });
  }

  void enqueue(std::string msg) {
    if (outbox_.size() >= kMaxQueuedFrames) {
      closed_ = true;
      return;
    }
    outbox_.push_back(std::move(msg));
    if (outbox_.size() == 1) write_next();
  }

  void write_next() {
    ws_.async_write(net::buffer(outbox_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec) {
                        self->closed_ = true;
                        return;
                      }
                      self->outbox_.pop_front();
                      if (!self->outbox_.empty()) self->write_next();
                    });
  }

  websocket::stream<tcp::socket> ws_;
  net::strand<net::any_io_executor> strand_;
  Relay& relay_;
  beast::flat_buffer buffer_;
  beast::flat_buffer frame_;
  http::request<http::string_body> request_;
  std::deque<std::string> outbox_;
  std::atomic<bool> closed_{false};
};

}  // namespace

struct WsServer::Impl {
  Impl(Relay& r, ServeOptions o)
      : relay(r), options(std::move(o)), acceptor(ioc), timer(ioc), epoch(std::chrono::steady_clock::now()) {
    if (!(options.tick_hz > 0.0)) throw std::invalid_argument("tick rate must be positive");
    const tcp::endpoint endpoint(net::ip::make_address(options.bind), options.port);
    acceptor.open(endpoint.protocol());
    acceptor.set_option(net::socket_base::reuse_address(true));
    acceptor.bind(endpoint);
    acceptor.listen();
  }

  void accept() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<WsSession>(std::move(socket), relay)->start();
      accept();
    });
  }

  void schedule_tick() {
    const auto period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / options.tick_hz));
    next_tick += period;
    timer.expires_at(next_tick);
    timer.async_wait([this](beast::error_code ec) {
      if (ec) return;
      const auto now = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - epoch)
                           .count();
      const TickReport report = relay.tick(now);
      for (const auto& reason : report.rejected) std::cerr << "rejected: " << reason << "\n";
      for (const auto& id : report.evicted) std::cerr << "evicted: " << id << "\n";
      schedule_tick();
    });
  }

  void run() {
    next_tick = std::chrono::steady_clock::now();
    accept();
    schedule_tick();
    ioc.run();
  }

  Relay& relay;
  ServeOptions options;
  net::io_context ioc{1};
  tcp::acceptor acceptor;
  net::steady_timer timer;
  std::chrono::steady_clock::time_point epoch;
  std::chrono::steady_clock::time_point next_tick;
  std::thread thread;
};

WsServer::WsServer(Relay& relay, ServeOptions options)
    : impl_(std::make_unique<Impl>(relay, std::move(options))) {}

WsServer::~WsServer() { stop(); }

unsigned short WsServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void WsServer::run() { impl_->run(); }

void WsServer::start() {
  impl_->thread = std::thread([this] { impl_->run(); });
}

void WsServer::stop() {
  impl_->ioc.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
  // Sessions must not outlive the io_context they were created on.
  impl_->relay.drop_all_sessions();
}

struct WsClient::Impl : std::enable_shared_from_this<WsClient::Impl> {
  net::io_context ioc{1};
  websocket::stream<tcp::socket> ws{ioc};
  beast::flat_buffer frame;
  std::deque<std::string> outbox;
  std::mutex mutex;
  std::condition_variable cv;
  std::deque<std::string> inbox;
  std::atomic<bool> open{false};
  std::thread thread;

  void read_frame() {
    ws.async_read(frame, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->open = false;
        self->cv.notify_all();
        return;
      }
      {
        std::lock_guard lock(self->mutex);
        self->inbox.push_back(beast::buffers_to_string(self->frame.data()));
      }
      self->frame.consume(self->frame.size());
      self->cv.notify_all();
      self->read_frame();
    });
  }

  void write_next() {
    ws.async_write(net::buffer(outbox.front()),
                   [self = shared_from_this()](beast::error_code ec, std::size_t) {
                     if (ec) {
                       self->open = false;
                       return;
                     }
                     self->outbox.pop_front();
                     if (!self->outbox.empty()) self->write_next();
                   });
  }
};

WsClient::WsClient(const std::string& host, unsigned short port, const std::string& path)
    : impl_(std::make_shared<Impl>()) {
  try {
    tcp::resolver resolver(impl_->ioc);
    const auto results = resolver.resolve(host, std::to_string(port));
    net::connect(impl_->ws.next_layer(), results);
    impl_->ws.handshake(host + ":" + std::to_string(port), path);
  } catch (const boost::system::system_error& e) {
    throw std::runtime_error("websocket connect to " + host + ":" + std::to_string(port) + path +
                             " failed: " + e.what());
  }
  impl_->ws.text(true);
  impl_->open = true;
  impl_->read_frame();
  impl_->thread = std::thread([impl = impl_] { impl->ioc.run(); });
}

WsClient::~WsClient() {
  close();
  if (impl_->thread.joinable()) impl_->thread.join();
}

void WsClient::send(std::string text) {
  if (!impl_->thread.joinable()) return;  // closed
  net::post(impl_->ioc, [impl = impl_, msg = std::move(text)]() mutable {
    if (!impl->open) return;
    impl->outbox.push_back(std::move(msg));
    if (impl->outbox.size() == 1) impl->write_next();
  });
}

std::optional<std::string> WsClient::receive(std::chrono::milliseconds timeout) {
  std::unique_lock lock(impl_->mutex);
  impl_->cv.wait_for(lock, timeout, [&] { return !impl_->inbox.empty() || !impl_->open; });
  if (impl_->inbox.empty()) return std::nullopt;
  std::string text = std::move(impl_->inbox.front());
  impl_->inbox.pop_front();
  return text;
}

std::vector<std::string> WsClient::drain() {
  std::lock_guard lock(impl_->mutex);
  std::vector<std::string> out(std::make_move_iterator(impl_->inbox.begin()),
                               std::make_move_iterator(impl_->inbox.end()));
  impl_->inbox.clear();
  return out;
}

bool WsClient::connected() const { return impl_->open; }

void WsClient::close() {
  if (!impl_->thread.joinable()) return;
  net::post(impl_->ioc, [impl = impl_] {
    if (!impl->ws.is_open()) {
      impl->ioc.stop();
      return;
    }
    impl->ws.async_close(websocket::close_code::normal, [impl](beast::error_code) {
      impl->open = false;
      impl->ioc.stop();
    });
  });
  impl_->thread.join();
  // Pending handlers hold the impl; abort and run them so the cycle breaks.
  impl_->open = false;
  beast::error_code ignored;
  beast::get_lowest_layer(impl_->ws).close(ignored);
  impl_->ioc.restart();
  impl_->ioc.run();
}

WsUrl parse_ws_url(const std::string& url) {
  const std::string scheme = "ws://";
  if (url.rfind(scheme, 0) != 0) throw std::invalid_argument("expected ws:// URL: " + url);
  std::string rest = url.substr(scheme.size());
  WsUrl out;
  const auto slash = rest.find('/');
  if (slash != std::string::npos) {
    out.path = rest.substr(slash);
    rest = rest.substr(0, slash);
  }
  const auto colon = rest.rfind(':');
  if (colon != std::string::npos) {
    const int port = std::stoi(rest.substr(colon + 1));
    if (port <= 0 || port > 65535) throw std::invalid_argument("bad port in " + url);
    out.port = static_cast<unsigned short>(port);
    rest = rest.substr(0, colon);
  }
  if (rest.empty()) throw std::invalid_argument("missing host in " + url);
  out.host = rest;
  return out;
}

}  // namespace pedsafe::server
