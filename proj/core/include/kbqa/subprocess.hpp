#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace kbqa {

/// A child process started with `/bin/sh -c command`, spoken to one line at a
/// time over its stdin/stdout. Not thread-safe.
class LineProcess {
 public:
  explicit LineProcess(std::string command);
  ~LineProcess();
  LineProcess(const LineProcess&) = delete;
  LineProcess& operator=(const LineProcess&) = delete;

  /// Writes `line` plus a newline. Throws ScorerError if the child is gone.
  void write_line(std::string_view line);

  /// Reads one line (without the newline). Throws ScorerError on timeout or
  /// end of stream.
  std::string read_line(std::chrono::milliseconds timeout);

  const std::string& command() const noexcept { return command_; }

 private:
  std::string command_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

}  // namespace kbqa
