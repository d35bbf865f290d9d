#include <sys/socket.h>
#include <sys/un.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <thread>

#include "doctest.h"
#include "dgen/error.hpp"
#include "dgen/wire.hpp"
#include "fixtures.hpp"

using namespace dgen;

namespace {

PredictorQuery query(TokenSeq t, std::vector<std::size_t> pos, std::size_t k = 1) {
  PredictorQuery q;
  q.tokens = std::move(t);
  q.positions = std::move(pos);
  q.top_k = k;
  return q;
}

MockPredictor scripted() {
  MockPredictor m;
  m.set_default({{kAnyPosition, {{"a", 0.2}, {"b", 0.7}}}, {2, {{"c", 1.0}}}});
  m.script(TokenSeq{"x", kMask}, {{1, {{"y", 0.4}}}});
  return m;
}

}  // namespace

TEST_CASE("mock predictor answers from its script") {
  MockPredictor m = scripted();
  const auto r = m.predict(query({"u", kMask, kMask}, {1, 2}, 2));
  REQUIRE(r.predictions.size() == 2);
  CHECK(r.at(1).candidates == std::vector<Candidate>{{"b", 0.7}, {"a", 0.2}});
  CHECK(r.at(2).candidates == std::vector<Candidate>{{"c", 1.0}});
  CHECK(m.predict(query({"u", kMask}, {1}, 1)).at(1).candidates.size() == 1);
  CHECK(m.predict(query({"x", kMask}, {1})).at(1).candidates.front().token == "y");
  CHECK(m.log().size() == 3);
  CHECK_THROWS_AS(m.predict(query({"u", "v"}, {1})), ValidationError);
  CHECK_THROWS_AS(MockPredictor().predict(query({kMask}, {0})), TransportError);
}

TEST_CASE("mock script files") {
  MockPredictor m = MockPredictor::from_file(fixture::data("mock_script.json"));
  CHECK(m.predict(query({kCls, "x", kSep, kMask}, {3})).at(3).candidates.front().token == kSep);
  CHECK(m.predict(query({kCls, "y", kSep, kMask}, {3}, 3)).at(3).candidates.front().token == "ord");
  CHECK_THROWS_AS(MockPredictor::from_json(nlohmann::json::parse(R"({"default":{"x1":[]}})")), ParseError);
  CHECK(fingerprint({"a", "b"}) != fingerprint({"ab"}));
  CHECK(fingerprint({"a", "b"}).size() == 16);
}

TEST_CASE("reply validation") {
  const auto q = query({kMask, kMask}, {0, 1});
  PredictorReply r{{{0, {{"a", 0.5}}}, {1, {{"b", 0.6}, {"c", 0.1}}}}};
  CHECK_NOTHROW(r.validate(q));
  PredictorReply unsorted{{{0, {{"a", 0.5}}}, {1, {{"b", 0.1}, {"c", 0.6}}}}};
  CHECK_THROWS_AS(unsorted.validate(q), TransportError);
  PredictorReply missing{{{0, {{"a", 0.5}}}}};
  CHECK_THROWS_AS(missing.validate(q), TransportError);
  PredictorReply range{{{0, {{"a", 1.5}}}, {1, {{"b", 0.6}}}}};
  CHECK_THROWS_AS(range.validate(q), TransportError);
  PredictorReply empty{{{0, {}}, {1, {{"b", 0.6}}}}};
  CHECK_THROWS_AS(empty.validate(q), TransportError);
}

TEST_CASE("messages encode and decode") {
  const auto q = query({"a", kMask}, {1}, 5);
  const auto jq = wire::encode_query(7, q);
  CHECK(jq.at("id") == 7);
  CHECK(wire::decode_query(jq) == q);
  const PredictorReply r{{{1, {{"z", 0.25}}}}};
  const auto jr = wire::encode_reply(7, r);
  CHECK(wire::decode_reply(jr) == r);
  CHECK_THROWS_AS(wire::decode_reply(nlohmann::json{{"id", 7}, {"error", "boom"}}), TransportError);
  CHECK_THROWS_AS(wire::decode_query(nlohmann::json{{"id", 7}}), ParseError);
}

TEST_CASE("serve over a pipe pair") {
  int to_server[2], to_client[2];
  REQUIRE(::pipe(to_server) == 0);
  REQUIRE(::pipe(to_client) == 0);
  MockPredictor mock = scripted();
  WhitespaceTokenizer tok;
  std::thread server([&] {
    wire::FdChannel ch(to_server[0], to_client[1], true);
    wire::serve(ch, mock, tok);
  });
  {
    wire::RemotePredictor remote(std::make_unique<wire::FdChannel>(to_client[0], to_server[1], true));
    const auto q = query({"u", kMask, kMask}, {1, 2}, 2);
    CHECK(remote.predict(q) == scripted().predict(q));
    CHECK(remote.tokenize("Anna  köper bröd") == TokenSeq{"Anna", "köper", "bröd"});
    const TokenSeq t{kCls, "i", "parken", kSep};
    CHECK(remote.detokenize(t) == "i parken");
    CHECK_THROWS_AS(remote.predict(query({"u", "v"}, {1})), ValidationError);
    CHECK(remote.tokenize("x y").size() == 2);
  }
  server.join();
  CHECK(mock.log().size() == 1);
}

TEST_CASE("bad requests get error replies and serving continues") {
  int to_server[2], to_client[2];
  REQUIRE(::pipe(to_server) == 0);
  REQUIRE(::pipe(to_client) == 0);
  MockPredictor mock = scripted();
  WhitespaceTokenizer tok;
  std::thread server([&] {
    wire::FdChannel ch(to_server[0], to_client[1], true);
    wire::serve(ch, mock, tok);
  });
  {
    wire::FdChannel client(to_client[0], to_server[1], true);
    std::string line;
    client.send_line("not json");
    REQUIRE(client.receive_line(line));
    auto j = nlohmann::json::parse(line);
    CHECK(j.at("id").is_null());
    CHECK(j.contains("error"));
    client.send_line(R"({"id":4,"tokens":["u","v"],"positions":[1],"top_k":1})");
    REQUIRE(client.receive_line(line));
    j = nlohmann::json::parse(line);
    CHECK(j.at("id") == 4);
    CHECK(j.contains("error"));
    client.send_line(R"({"id":5,"op":"frobnicate"})");
    REQUIRE(client.receive_line(line));
    CHECK(nlohmann::json::parse(line).contains("error"));
    client.send_line(R"({"id":6,"op":"tokenize","text":"a b"})");
    REQUIRE(client.receive_line(line));
    j = nlohmann::json::parse(line);
    CHECK(j.at("id") == 6);
    CHECK(j.at("tokens") == nlohmann::json::array({"a", "b"}));
  }
  server.join();
}

TEST_CASE("serve over a unix socket") {
  const auto path = std::filesystem::temp_directory_path() / ("dgen_wire_" + std::to_string(::getpid()) + ".sock");
  std::filesystem::remove(path);
  const int lfd = ::socket(AF_UNIX, SOCK_STREAM, 0);
  REQUIRE(lfd >= 0);
  sockaddr_un addr{};
  addr.sun_family = AF_UNIX;
  std::snprintf(addr.sun_path, sizeof addr.sun_path, "%s", path.c_str());
  REQUIRE(::bind(lfd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
  REQUIRE(::listen(lfd, 1) == 0);
  MockPredictor mock = scripted();
  WhitespaceTokenizer tok;
  std::thread server([&] {
    const int cfd = ::accept(lfd, nullptr, nullptr);
    wire::FdChannel ch(cfd, ::dup(cfd), true);
    wire::serve(ch, mock, tok);
  });
  {
    wire::RemotePredictor remote(wire::connect("unix:" + path.string()));
    CHECK(remote.predict(query({"x", kMask}, {1})).at(1).candidates.front().token == "y");
  }
  server.join();
  ::close(lfd);
  std::filesystem::remove(path);
}

TEST_CASE("exec transport talks to the CLI mock server") {
  const std::string cmd =
      std::string("exec:'") + DGEN_CLI_PATH + "' mock-serve --script '" + fixture::data("mock_script.json").string() + "'";
  wire::RemotePredictor remote(wire::connect(cmd));
  CHECK(remote.predict(query({kCls, "x", kSep, kMask}, {3})).at(3).candidates.front().token == kSep);
  CHECK(remote.tokenize("a b c") == TokenSeq{"a", "b", "c"});
}

TEST_CASE("bad addresses") {
  CHECK_THROWS_AS(wire::connect("nowhere"), TransportError);
  CHECK_THROWS_AS(wire::connect("ftp:x"), TransportError);
  CHECK_THROWS_AS(wire::connect("tcp:localhost"), TransportError);
  CHECK_THROWS_AS(wire::connect("unix:/nonexistent/dgen.sock"), TransportError);
}
