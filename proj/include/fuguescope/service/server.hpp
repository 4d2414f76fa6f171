#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "fuguescope/service/broadcaster.hpp"
#include "fuguescope/service/command.hpp"

namespace fuguescope::service {

inline constexpr std::string_view kDefaultBind = "127.0.0.1:8765";
inline constexpr std::string_view kBindEnvVar = "FUGUESCOPE_BIND";

struct BindAddress {
  std::string host;
  unsigned short port = 0;
};

// "host:port"; throws ConfigError.
BindAddress parse_bind(std::string_view text);
// An explicit flag wins, then FUGUESCOPE_BIND, then kDefaultBind.
std::string resolve_bind(const std::string& flag_value);

// WebSocket endpoints on one io_context thread:
//   /stream   NDJSON batches, snapshot first; client text is ignored.
//   /control  the same stream plus commands in, ack/nack/error out.
class Server {
 public:
  using CommandHandler = std::function<void(ControlCommand, Reply)>;

  Server(Broadcaster& broadcaster, CommandHandler on_command, CommandBounds bounds = {});
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts serving. Throws RuntimeError on bind failure.
  void start(const BindAddress& bind);
  void stop();
  unsigned short port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fuguescope::service
