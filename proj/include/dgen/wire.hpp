#pragma once

#include <memory>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "dgen/predictor.hpp"
#include "dgen/tokens.hpp"

// Newline-delimited JSON protocol between the generation controllers and a
// model service.
//
//   predict     {"id":N,"tokens":[..],"positions":[..],"top_k":K}
//            -> {"id":N,"predictions":[{"position":P,"candidates":[{"token":T,"p":X},..]},..]}
//   tokenize    {"id":N,"op":"tokenize","text":S}       -> {"id":N,"tokens":[..]}
//   detokenize  {"id":N,"op":"detokenize","tokens":[..]} -> {"id":N,"text":S}
//   failure     -> {"id":N,"error":MESSAGE}   (id null when the request was unreadable)
namespace dgen::wire {

inline constexpr std::string_view kSchema = "dgen.predictor/1";

nlohmann::json encode_query(long id, const PredictorQuery& q);
PredictorQuery decode_query(const nlohmann::json& j);
nlohmann::json encode_reply(long id, const PredictorReply& r);
PredictorReply decode_reply(const nlohmann::json& j);

// Bidirectional line transport.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual void send_line(std::string_view line) = 0;
  // False at end of stream.
  virtual bool receive_line(std::string& line) = 0;
};

// Over a pair of file descriptors; closes them on destruction when owned.
class FdChannel : public LineChannel {
 public:
  FdChannel(int read_fd, int write_fd, bool owned);
  ~FdChannel() override;
  FdChannel(const FdChannel&) = delete;
  FdChannel& operator=(const FdChannel&) = delete;

  void send_line(std::string_view line) override;
  bool receive_line(std::string& line) override;

 private:
  int read_fd_;
  int write_fd_;
  bool owned_;
  std::string buffer_;
};

// "tcp:HOST:PORT", "unix:PATH" or "exec:COMMAND" (spawned through /bin/sh,
// spoken to over its stdin/stdout).
std::unique_ptr<LineChannel> connect(std::string_view address);

// Client side: a Predictor and Tokenizer backed by a remote service.
class RemotePredictor final : public Predictor, public Tokenizer {
 public:
  explicit RemotePredictor(std::unique_ptr<LineChannel> channel) : channel_(std::move(channel)) {}

  PredictorReply predict(const PredictorQuery& query) override;
  TokenSeq tokenize(std::string_view text) const override;
  std::string detokenize(std::span<const Token> tokens) const override;

 private:
  nlohmann::json round_trip(nlohmann::json request) const;

  std::unique_ptr<LineChannel> channel_;
  mutable long next_id_ = 1;
};

// Server side: answers requests until end of stream. Per-request failures
// become error replies; the loop keeps serving.
void serve(LineChannel& channel, Predictor& predictor, const Tokenizer& tokenizer);

}  // namespace dgen::wire
