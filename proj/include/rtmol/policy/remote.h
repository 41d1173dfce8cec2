//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RTMOL_POLICY_REMOTE_H_
#define RTMOL_POLICY_REMOTE_H_

#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "rtmol/policy/adapters.h"

namespace rtmol {

inline constexpr std::string_view kDefaultCaptionerPrompt =
    "You are a chemistry expert. Describe the molecule given by this SMILES "
    "string in one paragraph: its structure, functional groups and "
    "properties. Do not repeat the SMILES.";
inline constexpr std::string_view kDefaultGeneratorPrompt =
    "You are a chemistry expert. Read the description and output only the "
    "SMILES of the molecule described, with no other text.";

struct RemoteEndpointConfig {
  std::string base_url = "http://127.0.0.1:8000";
  std::string path = "/v1/chat/completions";
  std::string model = "default";
  double timeout_seconds = 60.0;
  int max_retries = 3;
  int max_in_flight = 4;
  // First retry waits this long; each further retry doubles it.
  double backoff_seconds = 0.5;
  std::string api_key_env = "RTMOL_API_KEY";
  std::string captioner_prompt = std::string(kDefaultCaptionerPrompt);
  std::string generator_prompt = std::string(kDefaultGeneratorPrompt);
  // Optional override for pulling a SMILES out of generator replies.
  std::string smiles_pattern;
};

/// Throws InvalidArgument on a non-positive timeout or negative retries.
void validate_endpoint(const RemoteEndpointConfig &cfg);

/// Chat-completions client. Concurrent calls share an in-flight cap.
class RemoteClient {
public:
  explicit RemoteClient(RemoteEndpointConfig cfg);
  ~RemoteClient();
  RemoteClient(const RemoteClient &) = delete;
  RemoteClient &operator=(const RemoteClient &) = delete;

  const RemoteEndpointConfig &config() const noexcept { return cfg_; }

  /// Exactly n message contents. Transient failures (transport errors,
  /// 408, 429, 5xx) are retried with exponential backoff; other statuses
  /// fail at once. Throws Timeout, HttpStatus, MalformedResponse or
  /// AuthMissing.
  std::vector<std::string> complete(std::string_view role_prompt,
                                    std::string_view user_content, int n,
                                    double temperature);

private:
  struct Impl;
  RemoteEndpointConfig cfg_;
  std::unique_ptr<Impl> impl_;
};

std::vector<std::string> remote_complete(const RemoteEndpointConfig &cfg,
                                         std::string_view role_prompt,
                                         std::string_view user_content, int n,
                                         double temperature);

/// Both roles over one endpoint; generate() post-processes replies with
/// extract_smiles. Cannot train in process.
class RemoteAdapter: public PolicyAdapter {
public:
  explicit RemoteAdapter(RemoteEndpointConfig cfg);

  std::string name() const override { return "remote:" + client_->config().model; }
  std::vector<Generation> caption(std::string_view smiles, int n,
                                  double temperature,
                                  std::uint64_t seed) override;
  std::vector<Generation> generate(std::string_view caption, int n,
                                   double temperature,
                                   std::uint64_t seed) override;
  std::shared_ptr<PolicyAdapter> frozen_copy() const override;

private:
  std::shared_ptr<RemoteClient> client_;
  std::optional<std::regex> pattern_;
};

}  // namespace rtmol

#endif  // RTMOL_POLICY_REMOTE_H_
