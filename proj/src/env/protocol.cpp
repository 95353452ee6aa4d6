#include "kickoff/env/protocol.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <istream>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "kickoff/lang/lexer.hpp"
#include "kickoff/lang/parser.hpp"
#include "kickoff/lang/validate.hpp"

namespace kickoff {

using nlohmann::json;

namespace {

std::string error_reply(std::string_view code, const std::string& msg) {
  return json{{"ok", false}, {"err", code}, {"msg", msg}}.dump();
}

json controlled_json(const std::vector<PlayerId>& ids) {
  if (ids.size() == 1) return ids.front();
  return ids;
}

json info_json(const WorldState& w, const std::vector<PlayerId>& controlled) {
  return json{{"tick", w.tick}, {"score", {w.score.left, w.score.right}}, {"controlled", controlled_json(controlled)}};
}

std::string obs_b64(const SmmTensor& t) { return base64_encode(t.bytes()); }

}  // namespace

ProtocolSession::ProtocolSession(EpisodeConfig defaults) : defaults_(std::move(defaults)) {}

std::shared_ptr<const CompiledScenario> ProtocolSession::scenario(const std::string& source) {
  if (auto it = cache_.find(source); it != cache_.end()) return it->second;
  auto s = load_scenario(source);
  cache_.emplace(source, s);
  return s;
}

ProtocolSession::Reply ProtocolSession::handle(std::string_view line) {
  json req;
  try {
    req = json::parse(line);
  } catch (const json::exception&) {
    return {{}, true};
  }
  if (!req.is_object()) return {{}, true};
  const auto cmd = req.find("cmd");
  if (cmd == req.end() || !cmd->is_string()) return {error_reply(wire::kBadRequest, "missing \"cmd\""), false};
  const std::string name = *cmd;
  if (name == "reset") return {reset(&req), false};
  if (name == "step") return {step(&req), false};
  if (name == "close") {
    env_.reset();
    return {json{{"ok", true}}.dump(), true};
  }
  return {error_reply(wire::kBadRequest, "unknown command '" + name + "'"), false};
}

std::string ProtocolSession::reset(const void* request) {
  const json& req = *static_cast<const json*>(request);
  EpisodeConfig cfg = defaults_;
  std::uint64_t episode = 0;
  std::string source;
  try {
    source = req.at("scenario").get<std::string>();
    if (req.contains("seed")) cfg.master_seed = req.at("seed").get<std::uint64_t>();
    if (req.contains("episode")) episode = req.at("episode").get<std::uint64_t>();
    if (req.contains("reward_mode")) {
      const auto m = reward_mode_from_name(req.at("reward_mode").get<std::string>());
      if (!m) return error_reply(wire::kBadRequest, "reward_mode must be \"scoring\" or \"scoring+monitors\"");
      cfg.reward_mode = *m;
    }
  } catch (const json::exception& e) {
    return error_reply(wire::kBadRequest, std::string("malformed reset: ") + e.what());
  }
  env_.reset();
  try {
    env_.emplace(scenario(source), cfg);
    const SmmTensor& obs = env_->reset(episode);
    return json{{"ok", true}, {"obs", obs_b64(obs)}, {"info", info_json(env_->world(), env_->controlled())}}.dump();
  } catch (const lang::LexError& e) {
    env_.reset();
    return error_reply(wire::kParseError, e.what());
  } catch (const lang::ParseError& e) {
    env_.reset();
    return error_reply(wire::kParseError, e.what());
  } catch (const lang::ValidationError& e) {
    env_.reset();
    return error_reply(wire::kParseError, e.what());
  } catch (const Unsatisfiable& e) {
    env_.reset();
    return error_reply(wire::kUnsatisfiable, e.what());
  } catch (const Error& e) {
    env_.reset();
    return error_reply(wire::kScenarioError, e.what());
  }
}

std::string ProtocolSession::step(const void* request) {
  const json& req = *static_cast<const json*>(request);
  if (!env_ || !env_->in_episode()) return error_reply(wire::kNoEpisode, "step before reset");
  if (env_->done()) return error_reply(wire::kEpisodeDone, "episode is done; send reset");
  std::vector<int> actions;
  const auto it = req.find("actions");
  if (it == req.end() || !it->is_array()) return error_reply(wire::kBadAction, "\"actions\" must be a list of codes");
  for (const auto& a : *it) {
    if (!a.is_number_integer()) return error_reply(wire::kBadAction, "action codes must be integers 0..15");
    const auto v = a.get<std::int64_t>();
    if (v < 0 || v >= kActionCount) return error_reply(wire::kBadAction, "action code " + std::to_string(v) + " is outside 0..15");
    actions.push_back(static_cast<int>(v));
  }
  try {
    const StepResult r = env_->step(actions);
    json info = info_json(env_->world(), r.info.controlled);
    if (r.info.cause) info["cause"] = cause_name(r.info.cause->kind);
    return json{{"ok", true}, {"obs", obs_b64(r.obs)}, {"reward", r.reward}, {"done", r.done}, {"info", info}}.dump();
  } catch (const BadActionCode& e) {
    return error_reply(wire::kBadAction, e.what());
  } catch (const Error& e) {
    return error_reply(wire::kScenarioError, e.what());
  }
}

void serve_stream(std::istream& in, std::ostream& out, const EpisodeConfig& defaults) {
  ProtocolSession session(defaults);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto reply = session.handle(line);
    if (!reply.line.empty()) out << reply.line << '\n' << std::flush;
    if (reply.close) return;
  }
}

namespace {

bool send_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

void serve_connection(int fd, EpisodeConfig defaults) {
  ProtocolSession session(std::move(defaults));
  std::string buf;
  char chunk[65536];
  bool open = true;
  while (open) {
    const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    buf.append(chunk, static_cast<std::size_t>(n));
    std::size_t start = 0;
    for (std::size_t nl; open && (nl = buf.find('\n', start)) != std::string::npos; start = nl + 1) {
      std::string_view line(buf.data() + start, nl - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty()) continue;
      const auto reply = session.handle(line);
      if (!reply.line.empty() && !send_all(fd, reply.line + "\n")) open = false;
      if (reply.close) open = false;
    }
    buf.erase(0, start);
    if (buf.size() > kMaxFrameBytes) break;
  }
  ::close(fd);
}

}  // namespace

TcpServer::TcpServer(const std::string& address, EpisodeConfig defaults)
    : defaults_(std::move(defaults)) {
  std::string host = "127.0.0.1";
  std::string port = address;
  if (const auto colon = address.rfind(':'); colon != std::string::npos) {
    host = address.substr(0, colon);
    port = address.substr(colon + 1);
    if (host.empty()) host = "0.0.0.0";
  }
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  if (const int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &res); rc != 0) {
    throw Error("cannot resolve listen address '" + address + "': " + gai_strerror(rc));
  }
  fd_ = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  if (fd_ < 0) {
    ::freeaddrinfo(res);
    throw Error(std::string("socket: ") + std::strerror(errno));
  }
  const int yes = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  if (::bind(fd_, res->ai_addr, res->ai_addrlen) != 0 || ::listen(fd_, 64) != 0) {
    const std::string msg = std::strerror(errno);
    ::freeaddrinfo(res);
    ::close(fd_);
    throw Error("cannot listen on '" + address + "': " + msg);
  }
  ::freeaddrinfo(res);
  sockaddr_in bound{};
  socklen_t len = sizeof bound;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
}

TcpServer::~TcpServer() {
  stop();
  if (fd_ >= 0) ::close(fd_);
}

void TcpServer::run() {
  while (!stopping_) {
    const int client = ::accept(fd_, nullptr, nullptr);
    if (client < 0) {
      if (errno == EINTR) continue;
      if (stopping_) break;
      continue;
    }
    if (stopping_) {
      ::close(client);
      break;
    }
    std::thread(serve_connection, client, defaults_).detach();
  }
}

void TcpServer::stop() {
  if (stopping_.exchange(true)) return;
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

}  // namespace kickoff
