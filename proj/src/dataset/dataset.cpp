//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

#include "rtmol/chem/smiles.h"
#include "rtmol/chem/validity.h"
#include "rtmol/dataset/dataset.h"
#include "rtmol/error.h"
#include "rtmol/policy/adapters.h"
#include "rtmol/random.h"

namespace rtmol {
namespace {

namespace fs = std::filesystem;

Error io_failure(const fs::path &path, const std::string &what) {
  return Error(ErrorCode::kIoFailure,
               "IoFailure: " + path.string() + ": " + what);
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
    ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
    --e;
  return std::string(s.substr(b, e - b));
}

std::string escape_tsv(std::string_view s) {
  std::string out;
  for (char c: s) {
    switch (c) {
    case '\t': out += "\\t"; break;
    case '\n': out += "\\n"; break;
    case '\r': out += "\\r"; break;
    case '\\': out += "\\\\"; break;
    default: out += c;
    }
  }
  return out;
}

std::string unescape_tsv(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out += s[i];
      continue;
    }
    char n = s[++i];
    switch (n) {
    case 't': out += '\t'; break;
    case 'n': out += '\n'; break;
    case 'r': out += '\r'; break;
    case '\\': out += '\\'; break;
    default:
      out += '\\';
      out += n;
    }
  }
  return out;
}

std::vector<std::string> split_tabs(const std::string &line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    cols.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos)
      break;
    start = tab + 1;
  }
  return cols;
}

std::optional<PairRecord> parse_jsonl(const std::string &line,
                                      std::string &why) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception &) {
    why = "not a JSON object";
    return std::nullopt;
  }
  if (!j.is_object() || !j.contains("smiles") || !j["smiles"].is_string()) {
    why = "missing string field smiles";
    return std::nullopt;
  }
  PairRecord r;
  r.smiles = trim(j["smiles"].get<std::string>());
  if (r.smiles.empty()) {
    why = "empty smiles";
    return std::nullopt;
  }
  if (j.contains("caption")) {
    if (!j["caption"].is_string()) {
      why = "caption is not a string";
      return std::nullopt;
    }
    r.caption = j["caption"].get<std::string>();
  }
  if (j.contains("id") && !j["id"].is_null())
    r.id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
  if (j.contains("provenance") && j["provenance"].is_string())
    r.provenance = j["provenance"].get<std::string>();
  return r;
}

std::string to_jsonl(const PairRecord &r) {
  nlohmann::ordered_json j;
  if (r.id)
    j["id"] = *r.id;
  j["smiles"] = r.smiles;
  j["caption"] = r.caption;
  if (!r.provenance.empty())
    j["provenance"] = r.provenance;
  return j.dump();
}

}  // namespace

PairFormat format_for(const fs::path &path) {
  std::string ext = path.extension().string();
  for (char &c: ext)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson")
    return PairFormat::kJsonl;
  if (ext == ".tsv" || ext == ".txt")
    return PairFormat::kTsv;
  if (ext == ".smi")
    return PairFormat::kSmi;
  throw Error(ErrorCode::kFormatUnknown,
              "FormatUnknown: cannot infer format of " + path.string()
                  + " (use .jsonl, .tsv or .smi)");
}

LoadResult load_pairs(const fs::path &path) {
  return load_pairs(path, format_for(path));
}

LoadResult load_pairs(const fs::path &path, PairFormat format) {
  std::ifstream in(path);
  if (!in)
    throw io_failure(path, "cannot open for reading");
  LoadResult out;
  std::string line;
  std::size_t lineno = 0;
  const std::string provenance = path.filename().string();
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (trim(line).empty())
      continue;
    std::string why;
    std::optional<PairRecord> rec;
    switch (format) {
    case PairFormat::kJsonl:
      rec = parse_jsonl(line, why);
      break;
    case PairFormat::kTsv: {
      auto cols = split_tabs(line);
      if (lineno == 1 && trim(cols[0]) == "smiles")
        continue;
      if (cols.size() < 2 || cols.size() > 3) {
        why = "expected 2 or 3 tab-separated columns, got "
              + std::to_string(cols.size());
        break;
      }
      PairRecord r;
      r.smiles = trim(unescape_tsv(cols[0]));
      r.caption = unescape_tsv(cols[1]);
      if (cols.size() == 3 && !cols[2].empty())
        r.id = unescape_tsv(cols[2]);
      if (r.smiles.empty()) {
        why = "empty smiles";
        break;
      }
      rec = std::move(r);
      break;
    }
    case PairFormat::kSmi: {
      std::istringstream ss(line);
      PairRecord r;
      ss >> r.smiles;
      std::string name;
      std::getline(ss, name);
      name = trim(name);
      if (!name.empty())
        r.id = name;
      rec = std::move(r);
      break;
    }
    }
    if (!rec) {
      out.rejected.push_back({ lineno, why, line });
      continue;
    }
    if (rec->provenance.empty())
      rec->provenance = provenance;
    out.records.push_back(std::move(*rec));
  }
  if (in.bad())
    throw io_failure(path, "read error");
  return out;
}

void write_file_atomic(const fs::path &path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw io_failure(tmp, "cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out)
      throw io_failure(tmp, "write error");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw io_failure(path, "rename failed");
  }
}

void write_pairs(const fs::path &path, std::span<const PairRecord> records) {
  write_pairs(path, records, format_for(path));
}

void write_pairs(const fs::path &path, std::span<const PairRecord> records,
                 PairFormat format) {
  std::string out;
  for (const PairRecord &r: records) {
    switch (format) {
    case PairFormat::kJsonl:
      out += to_jsonl(r);
      break;
    case PairFormat::kTsv:
      out += escape_tsv(r.smiles) + "\t" + escape_tsv(r.caption);
      if (r.id)
        out += "\t" + escape_tsv(*r.id);
      break;
    case PairFormat::kSmi:
      out += r.smiles;
      if (r.id)
        out += " " + *r.id;
      break;
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

void write_sidecar(const fs::path &path,
                   std::span<const SidecarEntry> entries) {
  std::string out;
  for (const SidecarEntry &e: entries)
    out += std::to_string(e.line) + "\t" + escape_tsv(e.reason) + "\t"
           + escape_tsv(e.text) + "\n";
  write_file_atomic(path, out);
}

Splits split(std::span<const PairRecord> pairs, const SplitSpec &spec) {
  if (pairs.empty())
    throw Error(ErrorCode::kEmptyInput, "EmptyInput: nothing to split");
  double sum = 0;
  for (double r: spec.ratios) {
    if (!(r >= 0))
      throw Error(ErrorCode::kInvalidArgument,
                  "InvalidArgument: split ratios must be non-negative");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(ErrorCode::kInvalidArgument,
                "InvalidArgument: split ratios must sum to 1");

  const std::size_t n = pairs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(spec.seed);
  seeded_shuffle(order, rng);

  auto take = [&](double r) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * r + 1e-9));
  };
  const std::size_t n_valid = take(spec.ratios[1]);
  const std::size_t n_test = take(spec.ratios[2]);
  const std::size_t n_train = n - n_valid - n_test;

  Splits out;
  for (std::size_t i = 0; i < n; ++i) {
    const PairRecord &r = pairs[order[i]];
    if (i < n_train)
      out.train.push_back(r);
    else if (i < n_train + n_valid)
      out.valid.push_back(r);
    else
      out.test.push_back(r);
  }
  return out;
}

DedupeResult dedupe_overlap(std::span<const PairRecord> target,
                            std::span<const PairRecord> reference,
                            OnParseError on_error) {
  DedupeResult out;
  std::unordered_set<std::string> seen;
  for (const PairRecord &r: reference) {
    try {
      seen.insert(canonical_smiles(r.smiles));
    } catch (const Error &) {
      // Unparseable reference entries cannot overlap anything.
    }
  }
  for (std::size_t i = 0; i < target.size(); ++i) {
    const PairRecord &r = target[i];
    std::string canon;
    try {
      canon = canonical_smiles(r.smiles);
    } catch (const Error &e) {
      out.errors.push_back({ i + 1, e.what(), r.smiles });
      if (on_error == OnParseError::kKeep)
        out.kept.push_back(r);
      continue;
    }
    if (seen.count(canon))
      ++out.removed;
    else
      out.kept.push_back(r);
  }
  out.overlap_fraction = target.empty() ? 0.0
                                        : static_cast<double>(out.removed)
                                              / static_cast<double>(target.size());
  return out;
}

FilterResult diagnostic_filter(std::span<const PairRecord> pairs,
                               PolicyAdapter &generator, double tau, int m,
                               std::uint64_t seed, double temperature) {
  if (m < 1)
    throw Error(ErrorCode::kInvalidArgument,
                "InvalidArgument: samples must be at least 1");
  FilterResult out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const PairRecord &p = pairs[i];
    PairScore s;
    s.index = i;
    s.id = p.id.value_or(std::to_string(i));
    s.samples = m;
    try {
      ReferenceProfile ref(p.smiles);
      auto gens = generator.generate(p.caption, m, temperature,
                                     seed + static_cast<std::uint64_t>(i));
      for (const Generation &g: gens) {
        ScoreBreakdown b = ref.score(g.text);
        s.mean_total += b.total;
        s.mean_keys += b.t_keys;
        s.mean_path += b.t_path;
        s.mean_morgan += b.t_morgan;
        s.exact_rate += b.exact;
        s.valid_samples += b.valid;
      }
      s.mean_total /= m;
      s.mean_keys /= m;
      s.mean_path /= m;
      s.mean_morgan /= m;
      s.exact_rate /= m;
      s.kept = s.mean_total >= tau && s.valid_samples > 0;
      if (!s.kept)
        s.reason = s.valid_samples == 0 ? "no valid reconstruction"
                                        : "score below threshold";
    } catch (const Error &e) {
      s.kept = false;
      s.reason = e.what();
    }
    (s.kept ? out.kept : out.rejected).push_back(p);
    out.scores.push_back(std::move(s));
  }
  return out;
}

std::string score_table(std::span<const PairScore> scores) {
  std::string out =
      "index\tid\tscore\tt_keys\tt_path\tt_morgan\texact_rate\tvalid\tkept\t"
      "reason\n";
  char buf[160];
  for (const PairScore &s: scores) {
    out += std::to_string(s.index) + "\t" + escape_tsv(s.id) + "\t";
    std::snprintf(buf, sizeof buf, "%.6f\t%.6f\t%.6f\t%.6f\t%.4f\t%d/%d\t%d\t",
                  s.mean_total, s.mean_keys, s.mean_path, s.mean_morgan,
                  s.exact_rate, s.valid_samples, s.samples, s.kept ? 1 : 0);
    out += buf;
    out += escape_tsv(s.reason) + "\n";
  }
  return out;
}

}  // namespace rtmol
