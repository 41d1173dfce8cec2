//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <semaphore>
#include <thread>

// Before httplib.h: <resolv.h> defines a _res macro that breaks Eigen.
#include "rtmol/error.h"
#include "rtmol/policy/remote.h"

#include "httplib.h"
#include "json.hpp"

namespace rtmol {
namespace {

constexpr std::ptrdiff_t kMaxInFlight = 256;

bool transient_status(int status) {
  return status == 408 || status == 429 || status >= 500;
}

std::vector<std::string> parse_choices(const std::string &body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kMalformedResponse,
                std::string("MalformedResponse: body is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("choices") || !j["choices"].is_array())
    throw Error(ErrorCode::kMalformedResponse,
                "MalformedResponse: missing choices array");
  std::vector<std::string> out;
  for (const auto &choice: j["choices"]) {
    const nlohmann::json *content = nullptr;
    if (choice.is_object() && choice.contains("message")
        && choice["message"].is_object()
        && choice["message"].contains("content"))
      content = &choice["message"]["content"];
    if (!content || !content->is_string())
      throw Error(ErrorCode::kMalformedResponse,
                  "MalformedResponse: choice without message content");
    out.push_back(content->get<std::string>());
  }
  return out;
}

}  // namespace

void validate_endpoint(const RemoteEndpointConfig &cfg) {
  if (!(cfg.timeout_seconds > 0))
    throw Error(ErrorCode::kInvalidArgument,
                "InvalidArgument: timeout must be positive");
  if (cfg.max_retries < 0)
    throw Error(ErrorCode::kInvalidArgument,
                "InvalidArgument: retries must be non-negative");
  if (cfg.max_in_flight < 1)
    throw Error(ErrorCode::kInvalidArgument,
                "InvalidArgument: max in-flight must be at least 1");
}

struct RemoteClient::Impl {
  explicit Impl(int cap)
      : slots(std::clamp<std::ptrdiff_t>(cap, 1, kMaxInFlight)) { }
  std::counting_semaphore<kMaxInFlight> slots;
};

RemoteClient::RemoteClient(RemoteEndpointConfig cfg)
    : cfg_(std::move(cfg)) {
  validate_endpoint(cfg_);
  impl_ = std::make_unique<Impl>(cfg_.max_in_flight);
}

RemoteClient::~RemoteClient() = default;

std::vector<std::string> RemoteClient::complete(std::string_view role_prompt,
                                                std::string_view user_content,
                                                int n, double temperature) {
  const char *key = std::getenv(cfg_.api_key_env.c_str());
  if (!key || !*key)
    throw Error(ErrorCode::kAuthMissing,
                "AuthMissing: environment variable " + cfg_.api_key_env
                    + " is not set");
  if (n < 1)
    return {};

  auto seconds = std::chrono::duration<double>(cfg_.timeout_seconds);
  auto timeout =
      std::chrono::duration_cast<std::chrono::microseconds>(seconds);

  // One POST with retries; returns the parsed choices.
  auto request = [&](int want) -> std::vector<std::string> {
    nlohmann::ordered_json body;
    body["model"] = cfg_.model;
    body["messages"] = nlohmann::json::array(
        { { { "role", "system" }, { "content", std::string(role_prompt) } },
          { { "role", "user" }, { "content", std::string(user_content) } } });
    body["temperature"] = temperature;
    body["n"] = want;
    const std::string payload = body.dump();
    httplib::Headers headers = { { "Authorization",
                                   std::string("Bearer ") + key } };

    double backoff = cfg_.backoff_seconds;
    for (int attempt = 0;; ++attempt) {
      const bool last = attempt >= cfg_.max_retries;
      httplib::Result res;
      {
        impl_->slots.acquire();
        struct Release {
          std::counting_semaphore<kMaxInFlight> &s;
          ~Release() { s.release(); }
        } release { impl_->slots };
        httplib::Client client(cfg_.base_url);
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_write_timeout(timeout);
        res = client.Post(cfg_.path, headers, payload, "application/json");
      }
      if (!res) {
        if (last)
          throw Error(ErrorCode::kTimeout,
                      "Timeout: " + cfg_.base_url + cfg_.path + ": "
                          + httplib::to_string(res.error()));
      } else if (res->status == 200) {
        return parse_choices(res->body);
      } else if (last || !transient_status(res->status)) {
        throw HttpStatusError(res->status,
                              "HttpStatus(" + std::to_string(res->status)
                                  + "): " + cfg_.base_url + cfg_.path);
      }
      std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
      backoff *= 2;
    }
  };

  std::vector<std::string> out;
  // Some servers ignore n; ask again for whatever is missing.
  for (int round = 0; static_cast<int>(out.size()) < n; ++round) {
    auto got = request(n - static_cast<int>(out.size()));
    if (got.empty() || round > n)
      throw Error(ErrorCode::kMalformedResponse,
                  "MalformedResponse: endpoint returned no choices");
    for (std::string &s: got) {
      if (static_cast<int>(out.size()) < n)
        out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<std::string> remote_complete(const RemoteEndpointConfig &cfg,
                                         std::string_view role_prompt,
                                         std::string_view user_content, int n,
                                         double temperature) {
  RemoteClient client(cfg);
  return client.complete(role_prompt, user_content, n, temperature);
}

RemoteAdapter::RemoteAdapter(RemoteEndpointConfig cfg)
    : client_(std::make_shared<RemoteClient>(std::move(cfg))) {
  if (!client_->config().smiles_pattern.empty())
    pattern_ = std::regex(client_->config().smiles_pattern);
}

std::vector<Generation> RemoteAdapter::caption(std::string_view smiles, int n,
                                               double temperature,
                                               std::uint64_t) {
  std::vector<Generation> out;
  for (std::string &t: client_->complete(client_->config().captioner_prompt,
                                         smiles, n, temperature))
    out.push_back({ std::move(t), {}, {} });
  return out;
}

std::vector<Generation> RemoteAdapter::generate(std::string_view caption, int n,
                                                double temperature,
                                                std::uint64_t) {
  std::vector<Generation> out;
  for (std::string &t: client_->complete(client_->config().generator_prompt,
                                         caption, n, temperature)) {
    std::string smiles = extract_smiles(t, pattern_).value_or(t);
    out.push_back({ std::move(smiles), {}, {} });
  }
  return out;
}

std::shared_ptr<PolicyAdapter> RemoteAdapter::frozen_copy() const {
  auto copy = std::make_shared<RemoteAdapter>(*this);
  return copy;
}

}  // namespace rtmol
