#include "fuguescope/service/recorder.hpp"

#include <chrono>
#include <thread>

#include "fuguescope/error.hpp"

namespace fuguescope::service {

Recorder::Recorder(const std::filesystem::path& path, const nlohmann::json& config)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
  if (!out_) throw RuntimeError(path.string() + ": cannot open record file for writing");
  const nlohmann::json header{{"v", kSchemaVersion}, {"kind", "header"}, {"config", config}};
  out_ << header.dump() << '\n';
  out_.flush();
}

void Recorder::write(const std::vector<DrawMessage>& batch) {
  std::lock_guard lock(mu_);
  for (const DrawMessage& m : batch) out_ << encode(m) << '\n';
  out_.flush();
  if (!out_) throw RuntimeError(path_.string() + ": write failed");
}

void Recorder::flush() {
  std::lock_guard lock(mu_);
  out_.flush();
}

MessageLog read_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeError(path.string() + ": cannot open message log");
  const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  MessageLog log;
  std::size_t pos = 0;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    const std::size_t nl = content.find('\n', pos);
    const bool complete = nl != std::string::npos;
    const std::string_view line(content.data() + pos, (complete ? nl : content.size()) - pos);
    pos = complete ? nl + 1 : content.size();
    ++line_no;
    if (line.empty()) continue;

    if (!header_seen) {
      nlohmann::json h;
      try {
        h = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception&) {
        throw RuntimeError(path.string() + ": missing or malformed header line");
      }
      if (!h.is_object() || h.value("kind", std::string()) != "header") {
        throw RuntimeError(path.string() + ": missing header line");
      }
      if (!h.contains("v") || !h["v"].is_number_integer() || h["v"].get<int>() != kSchemaVersion) {
        throw RuntimeError(path.string() + ": schema version mismatch (expected " +
                           std::to_string(kSchemaVersion) + ")");
      }
      log.config = h.value("config", nlohmann::json::object());
      header_seen = true;
      continue;
    }

    try {
      log.messages.push_back(decode(line));
    } catch (const std::invalid_argument& e) {
      if (!complete) {
        log.truncated = true;
        break;
      }
      throw RuntimeError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!header_seen) throw RuntimeError(path.string() + ": empty message log");
  return log;
}

std::size_t replay(const MessageLog& log, double speed,
                   const std::function<void(const DrawMessage&)>& sink) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const double t0 = log.messages.empty() ? 0.0 : log.messages.front().wall_time;
  for (const DrawMessage& m : log.messages) {
    if (speed > 0.0) {
      const double offset = (m.wall_time - t0) / speed;
      if (offset > 0.0) {
        std::this_thread::sleep_until(start + std::chrono::duration_cast<clock::duration>(
                                                  std::chrono::duration<double>(offset)));
      }
    }
    sink(m);
  }
  return log.messages.size();
}

}  // namespace fuguescope::service
