//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RTMOL_TESTS_TEST_UTIL_H_
#define RTMOL_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "rtmol/error.h"

namespace rtmol::test {

inline std::filesystem::path source_dir() { return RTMOL_SOURCE_DIR; }
inline std::filesystem::path fixtures() { return source_dir() / "tests" / "fixtures"; }

inline std::vector<std::string> read_lines(const std::filesystem::path &p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty())
      out.push_back(line);
  }
  return out;
}

inline std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  return { std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>() };
}

// Fresh per-process scratch directory.
inline std::filesystem::path scratch(const std::string &name) {
  auto dir = std::filesystem::temp_directory_path() / ("rtmol-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

template <typename F>
ErrorCode error_of(F &&f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  throw std::runtime_error("expected an rtmol::Error");
}

}  // namespace rtmol::test

#endif  // RTMOL_TESTS_TEST_UTIL_H_
