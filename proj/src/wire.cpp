#include "dgen/wire.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>

#include <netdb.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/un.h>
#include <sys/wait.h>
#include <unistd.h>

#include "dgen/error.hpp"

namespace dgen::wire {

using json = nlohmann::json;

json encode_query(long id, const PredictorQuery& q) {
  return json{{"id", id}, {"tokens", q.tokens}, {"positions", q.positions}, {"top_k", q.top_k}};
}

PredictorQuery decode_query(const json& j) {
  PredictorQuery q;
  try {
    q.tokens = j.at("tokens").get<TokenSeq>();
    q.positions = j.at("positions").get<std::vector<std::size_t>>();
    q.top_k = j.value("top_k", std::size_t{1});
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed predict request: ") + e.what());
  }
  return q;
}

json encode_reply(long id, const PredictorReply& r) {
  json preds = json::array();
  for (const auto& p : r.predictions) {
    json cands = json::array();
    for (const auto& c : p.candidates) cands.push_back({{"token", c.token}, {"p", c.p}});
    preds.push_back({{"position", p.position}, {"candidates", std::move(cands)}});
  }
  return json{{"id", id}, {"predictions", std::move(preds)}};
}

PredictorReply decode_reply(const json& j) {
  if (auto it = j.find("error"); it != j.end()) throw TransportError("predictor error: " + it->dump());
  PredictorReply r;
  try {
    for (const auto& p : j.at("predictions")) {
      PositionPrediction pp;
      pp.position = p.at("position").get<std::size_t>();
      for (const auto& c : p.at("candidates")) pp.candidates.push_back({c.at("token").get<std::string>(), c.at("p").get<double>()});
      r.predictions.push_back(std::move(pp));
    }
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed predictor reply: ") + e.what());
  }
  return r;
}

FdChannel::FdChannel(int read_fd, int write_fd, bool owned) : read_fd_(read_fd), write_fd_(write_fd), owned_(owned) {}

FdChannel::~FdChannel() {
  if (!owned_) return;
  ::close(write_fd_);
  if (read_fd_ != write_fd_) ::close(read_fd_);
}

void FdChannel::send_line(std::string_view line) {
  std::string buf(line);
  buf.push_back('\n');
  std::size_t off = 0;
  while (off < buf.size()) {
    const ssize_t n = ::write(write_fd_, buf.data() + off, buf.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(std::string("write failed: ") + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

bool FdChannel::receive_line(std::string& line) {
  while (true) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return true;
    }
    char chunk[4096];
    const ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(std::string("read failed: ") + std::strerror(errno));
    }
    if (n == 0) {
      if (buffer_.empty()) return false;
      line = std::move(buffer_);
      buffer_.clear();
      return true;
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

namespace {

// Child process speaking the protocol on its stdio.
class ProcessChannel final : public LineChannel {
 public:
  explicit ProcessChannel(const std::string& command) {
    int to_child[2];
    int from_child[2];
    if (::pipe(to_child) != 0 || ::pipe(from_child) != 0)
      throw TransportError(std::string("pipe failed: ") + std::strerror(errno));
    pid_ = ::fork();
    if (pid_ < 0) throw TransportError(std::string("fork failed: ") + std::strerror(errno));
    if (pid_ == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::close(to_child[0]);
      ::close(to_child[1]);
      ::close(from_child[0]);
      ::close(from_child[1]);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    channel_ = std::make_unique<FdChannel>(from_child[0], to_child[1], true);
  }

  ~ProcessChannel() override {
    channel_.reset();  // closing stdin lets the child exit
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }

  void send_line(std::string_view line) override { channel_->send_line(line); }
  bool receive_line(std::string& line) override { return channel_->receive_line(line); }

 private:
  pid_t pid_ = -1;
  std::unique_ptr<FdChannel> channel_;
};

int connect_tcp(const std::string& host, const std::string& port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &res); rc != 0)
    throw TransportError("cannot resolve " + host + ":" + port + ": " + ::gai_strerror(rc));
  int fd = -1;
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) throw TransportError("cannot connect to " + host + ":" + port);
  return fd;
}

int connect_unix(const std::string& path) {
  sockaddr_un addr{};
  if (path.size() >= sizeof addr.sun_path) throw TransportError("unix socket path too long: " + path);
  addr.sun_family = AF_UNIX;
  std::memcpy(addr.sun_path, path.c_str(), path.size() + 1);
  const int fd = ::socket(AF_UNIX, SOCK_STREAM, 0);
  if (fd < 0) throw TransportError(std::string("socket failed: ") + std::strerror(errno));
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    ::close(fd);
    throw TransportError("cannot connect to unix socket " + path + ": " + std::strerror(errno));
  }
  return fd;
}

}  // namespace

std::unique_ptr<LineChannel> connect(std::string_view address) {
  // a dead peer must surface as a write error, not kill the process
  std::signal(SIGPIPE, SIG_IGN);
  const auto colon = address.find(':');
  if (colon == std::string_view::npos) throw TransportError("bad predictor address '" + std::string(address) + "'");
  const std::string scheme(address.substr(0, colon));
  const std::string rest(address.substr(colon + 1));
  if (scheme == "exec") return std::make_unique<ProcessChannel>(rest);
  if (scheme == "unix") {
    const int fd = connect_unix(rest);
    return std::make_unique<FdChannel>(fd, fd, true);
  }
  if (scheme == "tcp") {
    const auto pc = rest.rfind(':');
    if (pc == std::string::npos) throw TransportError("tcp address needs HOST:PORT");
    const int fd = connect_tcp(rest.substr(0, pc), rest.substr(pc + 1));
    return std::make_unique<FdChannel>(fd, fd, true);
  }
  throw TransportError("unknown predictor scheme '" + scheme + "'");
}

json RemotePredictor::round_trip(json request) const {
  const long id = next_id_++;
  request["id"] = id;
  channel_->send_line(request.dump());
  std::string line;
  if (!channel_->receive_line(line)) throw TransportError("predictor closed the connection");
  json reply;
  try {
    reply = json::parse(line);
  } catch (const json::parse_error& e) {
    throw TransportError(std::string("unreadable predictor reply: ") + e.what());
  }
  if (auto it = reply.find("error"); it != reply.end()) throw TransportError("predictor error: " + it->dump());
  if (!reply.contains("id") || reply["id"] != id) throw TransportError("predictor reply id mismatch");
  return reply;
}

PredictorReply RemotePredictor::predict(const PredictorQuery& query) {
  query.validate();
  PredictorReply r = decode_reply(round_trip(encode_query(0, query)));
  r.validate(query);
  return r;
}

TokenSeq RemotePredictor::tokenize(std::string_view text) const {
  const json reply = round_trip(json{{"op", "tokenize"}, {"text", text}});
  try {
    return reply.at("tokens").get<TokenSeq>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed tokenize reply: ") + e.what());
  }
}

std::string RemotePredictor::detokenize(std::span<const Token> tokens) const {
  const json reply = round_trip(json{{"op", "detokenize"}, {"tokens", TokenSeq(tokens.begin(), tokens.end())}});
  try {
    return reply.at("text").get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed detokenize reply: ") + e.what());
  }
}

void serve(LineChannel& channel, Predictor& predictor, const Tokenizer& tokenizer) {
  std::string line;
  while (channel.receive_line(line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json id = nullptr;
    json reply;
    try {
      const json req = json::parse(line);
      if (!req.is_object()) throw ParseError("request must be a JSON object");
      if (auto it = req.find("id"); it != req.end()) id = *it;
      const std::string op = req.value("op", std::string("predict"));
      if (op == "tokenize") {
        reply = json{{"id", id}, {"tokens", tokenizer.tokenize(req.at("text").get<std::string>())}};
      } else if (op == "detokenize") {
        const auto toks = req.at("tokens").get<TokenSeq>();
        reply = json{{"id", id}, {"text", tokenizer.detokenize(toks)}};
      } else if (op == "predict") {
        const PredictorQuery q = decode_query(req);
        q.validate();
        reply = encode_reply(0, predictor.predict(q));
        reply["id"] = id;
      } else {
        throw ParseError("unknown op '" + op + "'");
      }
    } catch (const std::exception& e) {
      reply = json{{"id", id}, {"error", e.what()}};
    }
    channel.send_line(reply.dump());
  }
}

}  // namespace dgen::wire
