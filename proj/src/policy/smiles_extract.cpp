//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cctype>

#include "rtmol/chem/validity.h"
#include "rtmol/policy/adapters.h"

namespace rtmol {
namespace {

std::string_view strip(std::string_view s) {
  auto junk_front = [](char c) {
    return c == '`' || c == '"' || c == '\'' || std::isspace(
        static_cast<unsigned char>(c));
  };
  auto junk_back = [&](char c) {
    return junk_front(c) || c == ',' || c == ';' || c == '.' || c == ':';
  };
  while (!s.empty() && junk_front(s.front()))
    s.remove_prefix(1);
  while (!s.empty() && junk_back(s.back()))
    s.remove_suffix(1);
  return s;
}

bool valid_smiles(std::string_view s) {
  return !s.empty() && check_validity(s).is_valid;
}

}  // namespace

std::optional<std::string> extract_smiles(std::string_view text,
                                          const std::optional<std::regex> &pattern) {
  if (pattern) {
    std::match_results<std::string_view::const_iterator> m;
    if (!std::regex_search(text.begin(), text.end(), m, *pattern))
      return std::nullopt;
    std::string hit = m.size() > 1 && m[1].matched ? m[1].str() : m[0].str();
    return std::string(strip(hit));
  }

  std::string_view best;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])))
      ++j;
    std::string_view token = strip(text.substr(i, j - i));
    if (token.size() > best.size() && valid_smiles(token))
      best = token;
    i = j;
  }
  if (!best.empty())
    return std::string(best);
  std::string_view whole = strip(text);
  if (valid_smiles(whole))
    return std::string(whole);
  return std::nullopt;
}

}  // namespace rtmol
