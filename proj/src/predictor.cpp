#include "dgen/predictor.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "dgen/error.hpp"

namespace dgen {

using json = nlohmann::json;

void PredictorQuery::validate() const {
  if (positions.empty()) throw ValidationError("predictor query without positions");
  for (auto p : positions)
    if (p >= tokens.size() || tokens[p] != kMask)
      throw ValidationError("predictor query position " + std::to_string(p) + " does not hold [MASK]");
}

void PredictorReply::validate(const PredictorQuery& q) const {
  if (predictions.size() != q.positions.size())
    throw TransportError("predictor answered " + std::to_string(predictions.size()) + " positions, expected " +
                         std::to_string(q.positions.size()));
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto& pp = predictions[i];
    if (pp.position != q.positions[i]) throw TransportError("predictor answered positions out of order");
    if (pp.candidates.empty())
      throw TransportError("predictor returned no candidates for position " + std::to_string(pp.position));
    for (std::size_t c = 0; c < pp.candidates.size(); ++c) {
      const double p = pp.candidates[c].p;
      if (!(p >= 0.0 && p <= 1.0)) throw TransportError("predictor probability outside [0, 1]");
      if (c > 0 && pp.candidates[c - 1].p < p) throw TransportError("predictor candidates not sorted by probability");
    }
  }
}

const PositionPrediction& PredictorReply::at(std::size_t position) const {
  for (const auto& p : predictions)
    if (p.position == position) return p;
  throw TransportError("reply has no prediction for position " + std::to_string(position));
}

std::string fingerprint(const TokenSeq& tokens) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001B3ULL;
  };
  for (const auto& t : tokens) {
    for (unsigned char c : t) mix(c);
    mix(0x1F);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

PositionScript sorted(PositionScript entry) {
  for (auto& [pos, cands] : entry)
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.p > b.p; });
  return entry;
}

}  // namespace

void MockPredictor::script(const std::string& context_fingerprint, PositionScript entry) {
  by_context_[context_fingerprint] = sorted(std::move(entry));
}

void MockPredictor::set_default(PositionScript entry) { default_ = sorted(std::move(entry)); }

namespace {

PositionScript script_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("mock script: predictions must be an object keyed by position");
  PositionScript out;
  for (const auto& [key, list] : j.items()) {
    long pos = kAnyPosition;
    if (key != "*") {
      try {
        pos = std::stol(key);
      } catch (const std::exception&) {
        throw ParseError("mock script: bad position key '" + key + "'");
      }
    }
    std::vector<Candidate> cands;
    for (const auto& c : list) cands.push_back({c.at("token").get<std::string>(), c.at("p").get<double>()});
    out[pos] = std::move(cands);
  }
  return out;
}

}  // namespace

MockPredictor MockPredictor::from_json(const json& j) {
  MockPredictor m;
  try {
    if (auto it = j.find("default"); it != j.end()) m.set_default(script_from_json(*it));
    if (auto it = j.find("contexts"); it != j.end()) {
      for (const auto& c : *it) {
        std::string fp;
        if (c.contains("fingerprint")) {
          fp = c.at("fingerprint").get<std::string>();
        } else {
          fp = fingerprint(c.at("tokens").get<TokenSeq>());
        }
        m.script(fp, script_from_json(c.at("predictions")));
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("mock script: ") + e.what());
  }
  return m;
}

MockPredictor MockPredictor::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mock script " + path.string());
  try {
    return from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ParseError("mock script " + path.string() + ": " + e.what());
  }
}

PredictorReply MockPredictor::predict(const PredictorQuery& query) {
  query.validate();
  log_.push_back(query);
  const PositionScript* entry = nullptr;
  if (auto it = by_context_.find(fingerprint(query.tokens)); it != by_context_.end()) {
    entry = &it->second;
  } else if (default_) {
    entry = &*default_;
  } else {
    throw TransportError("mock predictor: unscripted query " + fingerprint(query.tokens) + " and no default");
  }
  PredictorReply reply;
  for (auto pos : query.positions) {
    auto it = entry->find(static_cast<long>(pos));
    if (it == entry->end()) it = entry->find(kAnyPosition);
    if (it == entry->end())
      throw TransportError("mock predictor: no script for position " + std::to_string(pos));
    PositionPrediction pp{pos, it->second};
    if (query.top_k > 0 && pp.candidates.size() > query.top_k) pp.candidates.resize(query.top_k);
    reply.predictions.push_back(std::move(pp));
  }
  return reply;
}

}  // namespace dgen
