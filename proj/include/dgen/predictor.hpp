#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dgen/tokens.hpp"

namespace dgen {

struct Candidate {
  Token token;
  double p = 0.0;

  bool operator==(const Candidate&) const = default;
};

struct PositionPrediction {
  std::size_t position = 0;
  std::vector<Candidate> candidates;  // descending p

  bool operator==(const PositionPrediction&) const = default;
};

// One forward pass: score the listed [MASK] positions of `tokens`.
struct PredictorQuery {
  TokenSeq tokens;
  std::vector<std::size_t> positions;
  std::size_t top_k = 1;

  // Throws ValidationError unless every position holds [MASK].
  void validate() const;
  bool operator==(const PredictorQuery&) const = default;
};

struct PredictorReply {
  std::vector<PositionPrediction> predictions;

  // Throws TransportError when the reply does not answer exactly the
  // queried positions with non-empty, sorted, [0,1]-valued candidates.
  void validate(const PredictorQuery& q) const;
  const PositionPrediction& at(std::size_t position) const;
  bool operator==(const PredictorReply&) const = default;
};

// A masked-LM forward pass. Replies must be a pure function of the query.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual PredictorReply predict(const PredictorQuery& query) = 0;
};

// Stable hash of a token sequence (16 hex digits), used to key scripted
// replies.
std::string fingerprint(const TokenSeq& tokens);

// Candidate lists per position; position -1 applies to any position
// without its own entry.
using PositionScript = std::map<long, std::vector<Candidate>>;

inline constexpr long kAnyPosition = -1;

// Deterministic test double. Replies come from the entry keyed by the
// query's fingerprint, else from the default entry; queries are recorded.
class MockPredictor final : public Predictor {
 public:
  MockPredictor() = default;

  void script(const std::string& context_fingerprint, PositionScript entry);
  void script(const TokenSeq& context, PositionScript entry) { script(fingerprint(context), std::move(entry)); }
  void set_default(PositionScript entry);

  // {"default": {"*": [{"token":..,"p":..}], "7": [...]},
  //  "contexts": [{"tokens": [...]} | {"fingerprint": ".."}, "predictions": {...}]}
  static MockPredictor from_json(const nlohmann::json& j);
  static MockPredictor from_file(const std::filesystem::path& path);

  PredictorReply predict(const PredictorQuery& query) override;

  const std::vector<PredictorQuery>& log() const { return log_; }
  void clear_log() { log_.clear(); }

 private:
  std::map<std::string, PositionScript> by_context_;
  std::optional<PositionScript> default_;
  std::vector<PredictorQuery> log_;
};

}  // namespace dgen
