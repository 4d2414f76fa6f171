#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <vector>

#include "fuguescope/service/message.hpp"

namespace fuguescope::service {

// Message log: one header line {"v":1,"kind":"header","config":{...}}
// followed by one message per line.
class Recorder {
 public:
  // Throws RuntimeError when the path cannot be written.
  Recorder(const std::filesystem::path& path, const nlohmann::json& config);

  void write(const std::vector<DrawMessage>& batch);
  void flush();

 private:
  std::mutex mu_;
  std::ofstream out_;
  std::filesystem::path path_;
};

struct MessageLog {
  nlohmann::json config;
  std::vector<DrawMessage> messages;
  bool truncated = false;  // last line was incomplete and skipped
};

// Throws RuntimeError for unreadable files, a missing header or a schema
// version mismatch. An incomplete final line ends the log cleanly.
MessageLog read_log(const std::filesystem::path& path);

// Replays a log through `sink` in order. Pacing follows the recorded
// wall_time gaps divided by speed; speed <= 0 replays unpaced.
std::size_t replay(const MessageLog& log, double speed,
                   const std::function<void(const DrawMessage&)>& sink);

}  // namespace fuguescope::service
