//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "rtmol/dataset/dataset.h"
#include "rtmol/error.h"
#include "rtmol/harness/harness.h"

namespace rtmol {
namespace {

using json = nlohmann::ordered_json;

json completion_record(const RolloutGroup &g, std::size_t i) {
  const Completion &c = g.completions[i];
  json j;
  j["group_id"] = g.prompt_id;
  j["phase"] = g.phase;
  j["snapshot_id"] = g.snapshot_id;
  j["prompt"] = g.prompt;
  j["reference"] = g.reference;
  j["completion"] = c.text;
  j["reward"] = c.reward;
  j["advantage"] = i < g.advantages.size() ? g.advantages[i] : 0.0;
  j["degenerate"] = g.degenerate;
  if (!c.tokens.empty())
    j["tokens"] = c.tokens;
  if (!c.logp_cur.empty())
    j["logp_cur"] = c.logp_cur;
  if (!c.logp_old.empty())
    j["logp_old"] = c.logp_old;
  if (!c.logp_ref.empty())
    j["logp_ref"] = c.logp_ref;
  return j;
}

[[noreturn]] void bad_line(const std::filesystem::path &path, std::size_t line,
                           const std::string &why) {
  throw Error(ErrorCode::kFormatUnknown,
              "FormatUnknown: " + path.string() + ":" + std::to_string(line)
                  + ": " + why);
}

template <typename T>
T field(const json &j, const char *key, const std::filesystem::path &path,
        std::size_t line) {
  auto it = j.find(key);
  if (it == j.end())
    bad_line(path, line, std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception &) {
    bad_line(path, line, std::string("bad field '") + key + "'");
  }
}

template <typename T>
T optional_field(const json &j, const char *key) {
  auto it = j.find(key);
  return it == j.end() ? T{} : it->get<T>();
}

}  // namespace

std::string rollouts_to_jsonl(std::span<const RolloutGroup> groups) {
  std::string out;
  for (const RolloutGroup &g: groups) {
    for (std::size_t i = 0; i < g.completions.size(); ++i) {
      out += completion_record(g, i).dump();
      out += '\n';
    }
  }
  return out;
}

void export_rollouts(std::span<const RolloutGroup> groups,
                     const std::filesystem::path &path, bool append) {
  std::string text = rollouts_to_jsonl(groups);
  if (!append) {
    write_file_atomic(path, text);
    return;
  }
  // One write call per batch keeps concurrent appenders line-atomic in practice.
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out || !(out << text) || !out.flush())
    throw Error(ErrorCode::kIoFailure,
                "IoFailure: cannot append to " + path.string());
}

std::vector<RolloutGroup> read_rollouts(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::kIoFailure, "IoFailure: cannot open " + path.string());
  std::vector<RolloutGroup> groups;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r')
      text.pop_back();
    if (text.empty())
      continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception &) {
      bad_line(path, line, "not a JSON object");
    }
    if (!j.is_object())
      bad_line(path, line, "not a JSON object");
    auto id = field<std::string>(j, "group_id", path, line);
    auto phase = field<std::string>(j, "phase", path, line);
    auto snap = field<std::uint64_t>(j, "snapshot_id", path, line);
    auto prompt = field<std::string>(j, "prompt", path, line);
    if (groups.empty() || groups.back().prompt_id != id
        || groups.back().phase != phase || groups.back().snapshot_id != snap
        || groups.back().prompt != prompt) {
      RolloutGroup g;
      g.prompt_id = id;
      g.phase = phase;
      g.snapshot_id = snap;
      g.prompt = prompt;
      g.reference = optional_field<std::string>(j, "reference");
      g.degenerate = optional_field<bool>(j, "degenerate");
      groups.push_back(std::move(g));
    }
    RolloutGroup &g = groups.back();
    Completion c;
    c.text = field<std::string>(j, "completion", path, line);
    c.reward = field<double>(j, "reward", path, line);
    try {
      c.tokens = optional_field<std::vector<std::string>>(j, "tokens");
      c.logp_cur = optional_field<std::vector<double>>(j, "logp_cur");
      c.logp_old = optional_field<std::vector<double>>(j, "logp_old");
      c.logp_ref = optional_field<std::vector<double>>(j, "logp_ref");
    } catch (const json::exception &) {
      bad_line(path, line, "bad token or log-probability array");
    }
    g.advantages.push_back(field<double>(j, "advantage", path, line));
    g.completions.push_back(std::move(c));
  }
  if (in.bad())
    throw Error(ErrorCode::kIoFailure, "IoFailure: read error on " + path.string());
  return groups;
}

RolloutFileSink::RolloutFileSink(std::filesystem::path path, bool append)
    : path_(std::move(path)) {
  if (!append)
    write_file_atomic(path_, "");
}

void RolloutFileSink::write(std::span<const RolloutGroup> groups) {
  export_rollouts(groups, path_, true);
}

}  // namespace rtmol
