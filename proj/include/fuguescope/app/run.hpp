#pragma once

#include <atomic>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fuguescope::app {

enum class Mode { kLive, kFile, kEvaluate, kBuildReference };

std::string_view to_string(Mode m);
// Throws ConfigError.
Mode parse_mode(std::string_view name);

struct RunConfig {
  Mode mode = Mode::kFile;
  std::vector<std::filesystem::path> audio;  // four mono files or one 4-channel file
  std::string device = "default";            // live mode
  std::optional<std::filesystem::path> segments;
  std::optional<std::filesystem::path> tonal;
  std::optional<std::filesystem::path> beats;
  // Cache file, or a reference recording (.wav) built on the fly with beats.
  std::optional<std::filesystem::path> reference;
  std::string bind;  // empty: FUGUESCOPE_BIND, then the default
  bool serve = true;
  double tempo_seed = 0.5;
  bool paced = false;
  double sample_rate = 44100.0;
  std::vector<double> stretch;  // evaluate mode
  std::optional<std::filesystem::path> record;
  std::optional<std::filesystem::path> replay;
  double speed = 1.0;  // replay pacing; <= 0 unpaced
  bool to_stdout = false;  // also write the message stream to stdout

  // Throws ConfigError naming the missing field for the mode.
  void validate() const;
};

// Splits "0.5,1.25" into factors. An empty string gives an empty list.
// Throws ConfigError.
std::vector<double> parse_factors(std::string_view text);

// Runs one mode to completion. Returns 0 on success, 2 on configuration
// errors, 3 on runtime errors; diagnostics go to err.
int run(const RunConfig& config, std::ostream& out, std::ostream& err,
        const std::atomic<bool>* stop = nullptr);

}  // namespace fuguescope::app
