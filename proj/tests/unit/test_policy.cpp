//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <atomic>
#include <cstdlib>
#include <thread>

#include "doctest.h"
#include "json.hpp"

#include "rtmol/chem/smiles.h"
#include "rtmol/policy/adapters.h"
#include "rtmol/policy/remote.h"
#include "test_util.h"

// After the rtmol headers: httplib pulls in <resolv.h>, whose macros clash
// with Eigen.
#include "httplib.h"

using namespace rtmol;
using rtmol::test::error_of;

namespace {

constexpr const char *kKeyEnv = "RTMOL_TEST_API_KEY";

std::string fixture(const std::string &name) {
  return test::slurp(test::fixtures() / "remote" / name);
}

// Local chat-completions server replaying recorded responses.
class FixtureServer {
public:
  using Handler = std::function<void(const nlohmann::json &, httplib::Response &)>;

  explicit FixtureServer(Handler h): handler_(std::move(h)) {
    server_.Post("/v1/chat/completions",
                 [this](const httplib::Request &req, httplib::Response &res) {
                   ++hits;
                   last_auth = req.get_header_value("Authorization");
                   handler_(nlohmann::json::parse(req.body), res);
                 });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FixtureServer() {
    server_.stop();
    thread_.join();
  }

  RemoteEndpointConfig config() const {
    RemoteEndpointConfig c;
    c.base_url = "http://127.0.0.1:" + std::to_string(port_);
    c.api_key_env = kKeyEnv;
    c.timeout_seconds = 5;
    c.backoff_seconds = 0.01;
    return c;
  }

  std::atomic<int> hits{ 0 };
  std::string last_auth;

private:
  Handler handler_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

void reply(httplib::Response &res, const std::string &body) {
  res.set_content(body, "application/json");
}

struct KeyGuard {
  KeyGuard() { ::setenv(kKeyEnv, "test-key", 1); }
  ~KeyGuard() { ::unsetenv(kKeyEnv); }
};

}  // namespace

TEST_SUITE("policy") {

TEST_CASE("smiles extraction") {
  CHECK(extract_smiles("Sure! The SMILES is `CCO`.") == "CCO");
  CHECK(extract_smiles("\"c1ccccc1O\"") == "c1ccccc1O");
  CHECK(extract_smiles("answer: CC(=O)O, or maybe CC") == "CC(=O)O");
  CHECK(extract_smiles("no molecule here") == std::nullopt);
  std::optional<std::regex> tag{ std::regex("<smiles>(.*?)</smiles>") };
  CHECK(extract_smiles("<smiles>C1CC</smiles>", tag) == "C1CC");
  CHECK(extract_smiles("nothing", tag) == std::nullopt);
}

TEST_CASE("echo adapter") {
  EchoAdapter echo;
  auto caps = echo.caption("OCC", 2, 1.0, 0);
  REQUIRE(caps.size() == 2);
  CHECK(caps[0].text == canonical_smiles("CCO"));
  auto gens = echo.generate("the molecule CCO is an alcohol", 1, 1.0, 0);
  CHECK(canonical_smiles(gens.at(0).text) == "CCO");
  CHECK_FALSE(echo.supports_training());
}

TEST_CASE("scripted playback") {
  auto p = ScriptedAdapter::playback({ { "CCO", { "ethanol", "alcohol" } } },
                                     { { "ethanol", { "CCO" } } });
  auto caps = p->caption("CCO", 3, 1.0, 0);
  REQUIRE(caps.size() == 3);
  CHECK(caps[2].text == "ethanol");
  CHECK(p->generate("ethanol", 1, 1.0, 0).at(0).text == "CCO");
  CHECK(error_of([&] { p->generate("methanol", 1, 1.0, 0); }) == ErrorCode::kAdapterFailure);
}

TEST_CASE("tabular adapter resolves captioner prompts canonically") {
  auto pol = std::make_shared<TabularPolicy>(std::vector<std::string>{ "CCO", "c1ccccc1" },
                                             std::vector<std::string>{ "x", "y" });
  TabularAdapter cap(pol, PolicyRole::kCaptioner);
  CHECK(cap.resolve_prompt("OCC") == "CCO");
  auto g = cap.caption("OCC", 4, 1.0, 3);
  CHECK(g.size() == 4);
  Completion c = cap.completion_for("OCC", g[0]);
  CHECK(c.logp_cur.size() == 1);
  CHECK(error_of([&] { cap.caption("CCN", 1, 1.0, 0); }) == ErrorCode::kUnknownState);

  auto frozen = cap.frozen_copy();
  CHECK(frozen->snapshot_id() == cap.snapshot_id());
  pol->logits()(0, 0) = 5;
  pol->refresh_old();
  CHECK(frozen->snapshot_id() != cap.snapshot_id());
  auto a = frozen->caption("CCO", 8, 0.0, 1);
  auto b = cap.caption("CCO", 8, 0.0, 1);
  CHECK(b[0].text == "x");
  CHECK(a[0].text == "x");  // greedy tie-break on the untouched copy
}

TEST_CASE("remote client parses recorded completions") {
  KeyGuard key;
  FixtureServer srv([](const nlohmann::json &req, httplib::Response &res) {
    CHECK(req["messages"][0]["role"] == "system");
    CHECK(req["messages"][1]["content"] == "CCO");
    CHECK(req["n"] == 2);
    reply(res, fixture("caption_two.json"));
  });
  RemoteAdapter adapter(srv.config());
  auto caps = adapter.caption("CCO", 2, 0.7, 0);
  REQUIRE(caps.size() == 2);
  CHECK(caps[1].text == "A two-carbon alcohol.");
  CHECK(srv.last_auth == "Bearer test-key");
  CHECK_FALSE(adapter.supports_training());
}

TEST_CASE("remote client asks again when the server ignores n") {
  KeyGuard key;
  FixtureServer srv([](const nlohmann::json &, httplib::Response &res) {
    reply(res, fixture("generate_one.json"));
  });
  RemoteAdapter adapter(srv.config());
  auto gens = adapter.generate("ethanol", 3, 1.0, 0);
  REQUIRE(gens.size() == 3);
  for (const Generation &g: gens)
    CHECK(g.text == "CCO");
  CHECK(srv.hits == 3);
}

TEST_CASE("remote generator honours a custom pattern") {
  KeyGuard key;
  FixtureServer srv([](const nlohmann::json &, httplib::Response &res) {
    reply(res, fixture("generate_tagged.json"));
  });
  RemoteEndpointConfig cfg = srv.config();
  cfg.smiles_pattern = "<smiles>(.*?)</smiles>";
  RemoteAdapter adapter(cfg);
  CHECK(adapter.generate("phenol", 1, 1.0, 0).at(0).text == "c1ccccc1O");
}

TEST_CASE("transient statuses are retried") {
  KeyGuard key;
  std::atomic<int> calls{ 0 };
  FixtureServer srv([&](const nlohmann::json &, httplib::Response &res) {
    if (calls++ < 2) {
      res.status = calls == 1 ? 503 : 429;
      return;
    }
    reply(res, fixture("generate_one.json"));
  });
  RemoteClient client(srv.config());
  CHECK(client.complete("sys", "user", 1, 1.0).size() == 1);
  CHECK(calls == 3);
}

TEST_CASE("retries run out") {
  KeyGuard key;
  FixtureServer srv([](const nlohmann::json &, httplib::Response &res) { res.status = 502; });
  RemoteEndpointConfig cfg = srv.config();
  cfg.max_retries = 2;
  RemoteClient client(cfg);
  try {
    client.complete("s", "u", 1, 1.0);
    FAIL("expected an error");
  } catch (const HttpStatusError &e) {
    CHECK(e.status() == 502);
  }
  CHECK(srv.hits == 3);
}

TEST_CASE("client errors fail at once") {
  KeyGuard key;
  FixtureServer srv([](const nlohmann::json &, httplib::Response &res) { res.status = 400; });
  RemoteClient client(srv.config());
  CHECK(error_of([&] { client.complete("s", "u", 1, 1.0); }) == ErrorCode::kHttpStatus);
  CHECK(srv.hits == 1);
}

TEST_CASE("malformed bodies") {
  KeyGuard key;
  FixtureServer srv([](const nlohmann::json &req, httplib::Response &res) {
    reply(res, req["messages"][1]["content"] == "json" ? fixture("malformed.json")
                                                       : std::string("not json"));
  });
  RemoteClient client(srv.config());
  CHECK(error_of([&] { client.complete("s", "json", 1, 1.0); })
        == ErrorCode::kMalformedResponse);
  CHECK(error_of([&] { client.complete("s", "text", 1, 1.0); })
        == ErrorCode::kMalformedResponse);
}

TEST_CASE("missing key and unreachable endpoint") {
  ::unsetenv(kKeyEnv);
  RemoteEndpointConfig cfg;
  cfg.api_key_env = kKeyEnv;
  CHECK(error_of([&] { RemoteClient(cfg).complete("s", "u", 1, 1.0); })
        == ErrorCode::kAuthMissing);

  KeyGuard key;
  cfg.base_url = "http://127.0.0.1:9";  // discard port, nothing listens
  cfg.max_retries = 1;
  cfg.backoff_seconds = 0.01;
  cfg.timeout_seconds = 1;
  CHECK(error_of([&] { RemoteClient(cfg).complete("s", "u", 1, 1.0); })
        == ErrorCode::kTimeout);

  cfg.timeout_seconds = 0;
  CHECK(error_of([&] { RemoteClient c(cfg); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("in-flight cap bounds concurrent requests") {
  KeyGuard key;
  std::atomic<int> now{ 0 }, peak{ 0 };
  FixtureServer srv([&](const nlohmann::json &, httplib::Response &res) {
    int v = ++now;
    int p = peak.load();
    while (v > p && !peak.compare_exchange_weak(p, v)) { }
    std::this_thread::sleep_for(std::chrono::milliseconds(30));
    --now;
    reply(res, fixture("generate_one.json"));
  });
  RemoteEndpointConfig cfg = srv.config();
  cfg.max_in_flight = 2;
  RemoteClient client(cfg);
  std::vector<std::thread> ts;
  for (int i = 0; i < 6; ++i)
    ts.emplace_back([&] { client.complete("s", "u", 1, 1.0); });
  for (auto &t: ts)
    t.join();
  CHECK(peak <= 2);
  CHECK(srv.hits == 6);
}

}  // TEST_SUITE
