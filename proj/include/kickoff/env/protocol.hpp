#pragma once

#include <atomic>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "kickoff/env/env.hpp"

namespace kickoff {

/// Error codes of the wire protocol.
namespace wire {
inline constexpr std::string_view kNoEpisode = "no_episode";
inline constexpr std::string_view kEpisodeDone = "episode_done";
inline constexpr std::string_view kBadAction = "bad_action";
inline constexpr std::string_view kParseError = "parse_error";
inline constexpr std::string_view kUnsatisfiable = "unsatisfiable";
/// Unknown command or missing / mistyped request field.
inline constexpr std::string_view kBadRequest = "bad_request";
/// The scenario failed while sampling or running (evaluation errors).
inline constexpr std::string_view kScenarioError = "scenario_error";
}  // namespace wire

/// Largest accepted request line.
inline constexpr std::size_t kMaxFrameBytes = 8u << 20;

/// One client's protocol state: at most one episode in flight.
class ProtocolSession {
 public:
  explicit ProtocolSession(EpisodeConfig defaults = {});

  struct Reply {
    std::string line;  // without the trailing newline; empty when nothing is sent
    bool close = false;
  };

  /// Handles one request line. A frame that is not a JSON object closes the
  /// session without a reply; protocol errors are answered and the session
  /// continues.
  Reply handle(std::string_view line);

  bool in_episode() const { return env_ && env_->in_episode(); }

 private:
  std::string reset(const void* request);
  std::string step(const void* request);
  std::shared_ptr<const CompiledScenario> scenario(const std::string& source);

  EpisodeConfig defaults_;
  std::map<std::string, std::shared_ptr<const CompiledScenario>, std::less<>> cache_;
  std::optional<Environment> env_;
};

/// Serves one session over a line stream until close or end of input.
void serve_stream(std::istream& in, std::ostream& out, const EpisodeConfig& defaults = {});

/// Thread-per-connection TCP server of independent sessions.
class TcpServer {
 public:
  /// `address` is "port", ":port" or "host:port"; port 0 picks a free port.
  TcpServer(const std::string& address, EpisodeConfig defaults = {});
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  int port() const { return port_; }
  /// Accepts until stop() is called.
  void run();
  void stop();

 private:
  int fd_ = -1;
  int port_ = 0;
  EpisodeConfig defaults_;
  std::atomic<bool> stopping_{false};
};

}  // namespace kickoff
