#include "fuguescope/service/server.hpp"

#include <atomic>
#include <cstdlib>
#include <optional>
#include <deque>
#include <iostream>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "fuguescope/error.hpp"

namespace fuguescope::service {
namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

class Session : public std::enable_shared_from_this<Session> {
 public:
  Session(tcp::socket socket, Broadcaster& broadcaster, const Server::CommandHandler& on_command,
          const CommandBounds& bounds, std::atomic<int>& live)
      : ws_(std::move(socket)), broadcaster_(broadcaster), on_command_(on_command), bounds_(bounds), live_(live) {
    ++live_;
  }

  ~Session() {
    if (sub_) broadcaster_.unsubscribe(sub_);
    --live_;
  }

  void run() {
    http::async_read(ws_.next_layer(), buffer_, req_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_request(ec); });
  }

 private:
  void on_request(beast::error_code ec) {
    if (ec) return;
    const std::string target(req_.target());
    if (target == "/control") {
      control_ = true;
    } else if (target != "/stream") {
      reject(http::status::not_found, "unknown endpoint " + target);
      return;
    }
    if (!websocket::is_upgrade(req_)) {
      reject(http::status::upgrade_required, "websocket upgrade required");
      return;
    }
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.text(true);
    ws_.async_accept(req_, [self = shared_from_this()](beast::error_code e) { self->on_accept(e); });
  }

  void reject(http::status status, const std::string& body) {
    auto res = std::make_shared<http::response<http::string_body>>(status, req_.version());
    res->set(http::field::content_type, "text/plain");
    res->body() = body + "\n";
    res->keep_alive(false);
    res->prepare_payload();
    http::async_write(ws_.next_layer(), *res, [self = shared_from_this(), res](beast::error_code, std::size_t) {
      beast::error_code ignored;
      self->ws_.next_layer().socket().shutdown(tcp::socket::shutdown_both, ignored);
    });
  }

  void on_accept(beast::error_code ec) {
    if (ec) return;
    sub_ = broadcaster_.subscribe();
    std::weak_ptr<Session> weak = shared_from_this();
    auto executor = ws_.get_executor();
    sub_->set_notify([weak, executor] {
      asio::post(executor, [weak] {
        if (auto self = weak.lock()) self->pump();
      });
    });
    pump();
    do_read();
  }

  void do_read() {
    ws_.async_read(in_, [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_read(ec); });
  }

  void on_read(beast::error_code ec) {
    if (ec) {
      closing_ = true;
      if (sub_) sub_->close();
      return;
    }
    const std::string text = beast::buffers_to_string(in_.data());
    in_.consume(in_.size());
    if (control_) handle_command(text);
    do_read();
  }

  void handle_command(const std::string& text) {
    ControlCommand cmd;
    try {
      cmd = parse_command(text, bounds_);
    } catch (const CommandError& e) {
      enqueue(e.request_id().empty() ? make_error(e.what()) : make_nack(e.request_id(), e.what()));
      return;
    }
    std::weak_ptr<Session> weak = shared_from_this();
    auto executor = ws_.get_executor();
    Reply reply = [weak, executor](const nlohmann::json& j) {
      asio::post(executor, [weak, j] {
        if (auto self = weak.lock()) self->enqueue(j);
      });
    };
    if (on_command_) {
      on_command_(std::move(cmd), std::move(reply));
    } else {
      reply(make_nack(cmd.request_id, "no engine attached"));
    }
  }

  void enqueue(const nlohmann::json& j) {
    outbox_.push_back(std::make_shared<const std::string>(j.dump() + "\n"));
    do_write();
  }

  void pump() {
    if (!sub_) return;
    while (auto batch = sub_->try_pop()) outbox_.push_back(std::move(*batch));
    if (sub_->closed() && !closing_) {
      if (sub_->overflowed()) {
        std::cerr << "fuguescope: dropping slow client (queue overflow)\n";
        outbox_.clear();
        close(websocket::close_code::policy_error, "client too slow");
        return;
      }
      end_after_flush_ = true;
    }
    do_write();
  }

  void do_write() {
    if (writing_ || closing_) return;
    if (outbox_.empty()) {
      if (end_after_flush_) close(websocket::close_code::normal, "end of stream");
      return;
    }
    writing_ = true;
    Batch next = outbox_.front();
    ws_.async_write(asio::buffer(*next), [self = shared_from_this(), next](beast::error_code ec, std::size_t) {
      self->writing_ = false;
      if (ec) {
        self->closing_ = true;
        return;
      }
      self->outbox_.pop_front();
      self->do_write();
    });
  }

  void close(websocket::close_code code, const char* reason) {
    if (closing_) return;
    closing_ = true;
    ws_.async_close(websocket::close_reason(code, reason), [self = shared_from_this()](beast::error_code) {});
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  beast::flat_buffer in_;
  http::request<http::string_body> req_;
  Broadcaster& broadcaster_;
  const Server::CommandHandler& on_command_;
  const CommandBounds& bounds_;
  std::atomic<int>& live_;
  std::shared_ptr<Subscription> sub_;
  std::deque<Batch> outbox_;
  bool control_ = false;
  bool writing_ = false;
  bool closing_ = false;
  bool end_after_flush_ = false;
};

}  // namespace

BindAddress parse_bind(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size()) {
    throw ConfigError("bind address '" + std::string(text) + "' must be host:port");
  }
  BindAddress out;
  out.host = std::string(text.substr(0, colon));
  const std::string port(text.substr(colon + 1));
  try {
    std::size_t used = 0;
    const long p = std::stol(port, &used);
    if (used != port.size() || p < 0 || p > 65535) throw std::out_of_range("port");
    out.port = static_cast<unsigned short>(p);
  } catch (const std::exception&) {
    throw ConfigError("bind address '" + std::string(text) + "': invalid port '" + port + "'");
  }
  return out;
}

std::string resolve_bind(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv(kBindEnvVar.data()); env && *env) return env;
  return std::string(kDefaultBind);
}

struct Server::Impl {
  Impl(Broadcaster& b, CommandHandler h, CommandBounds bounds)
      : broadcaster(b), on_command(std::move(h)), bounds(bounds), acceptor(io) {}

  void accept() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<Session>(std::move(socket), broadcaster, on_command, bounds, live)->run();
      accept();
    });
  }

  Broadcaster& broadcaster;
  CommandHandler on_command;
  CommandBounds bounds;
  std::atomic<int> live{0};
  asio::io_context io;
  tcp::acceptor acceptor;
  std::optional<asio::executor_work_guard<asio::io_context::executor_type>> work;
  std::thread thread;
  unsigned short port = 0;
};

Server::Server(Broadcaster& broadcaster, CommandHandler on_command, CommandBounds bounds)
    : impl_(std::make_unique<Impl>(broadcaster, std::move(on_command), bounds)) {}

Server::~Server() { stop(); }

void Server::start(const BindAddress& bind) {
  const std::string where = bind.host + ":" + std::to_string(bind.port);
  try {
    tcp::resolver resolver(impl_->io);
    const auto results = resolver.resolve(bind.host, std::to_string(bind.port));
    if (results.empty()) throw RuntimeError("cannot resolve " + where);
    const tcp::endpoint endpoint = *results.begin();
    impl_->acceptor.open(endpoint.protocol());
    impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
    impl_->acceptor.bind(endpoint);
    impl_->acceptor.listen(asio::socket_base::max_listen_connections);
    impl_->port = impl_->acceptor.local_endpoint().port();
  } catch (const boost::system::system_error& e) {
    throw RuntimeError("bind failure on " + where + ": " + e.code().message());
  }
  impl_->accept();
  impl_->work.emplace(impl_->io.get_executor());
  impl_->thread = std::thread([this] { impl_->io.run(); });
}

void Server::stop() {
  if (!impl_ || !impl_->thread.joinable()) return;
  asio::post(impl_->io, [this] {
    beast::error_code ignored;
    impl_->acceptor.close(ignored);
  });
  impl_->work.reset();
  // Give sessions a moment to flush closing frames, then stop.
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(500);
  while (impl_->live.load() > 0 && std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  impl_->io.stop();
  impl_->thread.join();
}

unsigned short Server::port() const { return impl_->port; }

}  // namespace fuguescope::service
