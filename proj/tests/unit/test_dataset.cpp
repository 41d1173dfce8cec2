//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <fstream>
#include <set>

#include "doctest.h"

#include "rtmol/chem/smiles.h"
#include "rtmol/dataset/dataset.h"
#include "rtmol/policy/adapters.h"
#include "test_util.h"

using namespace rtmol;
using rtmol::test::error_of;

namespace {

void write_text(const std::filesystem::path &p, const std::string &s) {
  std::ofstream(p, std::ios::binary) << s;
}

std::vector<PairRecord> numbered(std::size_t n) {
  std::vector<PairRecord> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].id = "r" + std::to_string(i);
    out[i].smiles = "C";
    out[i].caption = "c" + std::to_string(i);
  }
  return out;
}

std::set<std::string> ids_of(const std::vector<PairRecord> &v) {
  std::set<std::string> out;
  for (const auto &r: v)
    out.insert(r.id.value_or(""));
  return out;
}

PairRecord pair(std::string smiles, std::string caption, std::string id = {}) {
  PairRecord r;
  r.smiles = std::move(smiles);
  r.caption = std::move(caption);
  if (!id.empty())
    r.id = std::move(id);
  return r;
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("format from extension") {
  CHECK(format_for("a.jsonl") == PairFormat::kJsonl);
  CHECK(format_for("a.tsv") == PairFormat::kTsv);
  CHECK(format_for("a.smi") == PairFormat::kSmi);
  CHECK(error_of([] { format_for("a.csv"); }) == ErrorCode::kFormatUnknown);
}

TEST_CASE("load jsonl with malformed lines in the sidecar") {
  auto dir = test::scratch("load-jsonl");
  write_text(dir / "in.jsonl",
             "{\"smiles\": \"CCO\", \"caption\": \"ethanol\", \"id\": \"e\"}\n"
             "not json\n"
             "\n"
             "{\"caption\": \"missing smiles\"}\n"
             "{\"smiles\": \"c1ccccc1\", \"caption\": \"benzene\", "
             "\"provenance\": \"src\"}\n");
  LoadResult r = load_pairs(dir / "in.jsonl");
  REQUIRE(r.records.size() == 2);
  CHECK(r.records[0].id == "e");
  CHECK(r.records[0].provenance == "in.jsonl");
  CHECK_FALSE(r.records[1].id);
  CHECK(r.records[1].provenance == "src");
  REQUIRE(r.rejected.size() == 2);
  CHECK(r.rejected[0].line == 2);
  CHECK(r.rejected[1].line == 4);

  write_sidecar(dir / "bad.tsv", r.rejected);
  auto lines = test::read_lines(dir / "bad.tsv");
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].rfind("2\t", 0) == 0);
  CHECK(lines[1].rfind("4\t", 0) == 0);
}

TEST_CASE("load tsv and smi") {
  auto dir = test::scratch("load-tsv");
  write_text(dir / "in.tsv",
             "smiles\tcaption\tid\n"
             "CCO\tan alcohol\\twith a tab\ta\n"
             "CC\tethane\n"
             "one column only\n"
             "C\tx\ty\tz\n");
  LoadResult t = load_pairs(dir / "in.tsv");
  REQUIRE(t.records.size() == 2);
  CHECK(t.records[0].caption == "an alcohol\twith a tab");
  CHECK(t.records[0].id == "a");
  CHECK_FALSE(t.records[1].id);
  CHECK(t.rejected.size() == 2);

  write_text(dir / "in.smi", "CCO ethanol\nc1ccccc1\n");
  LoadResult s = load_pairs(dir / "in.smi");
  REQUIRE(s.records.size() == 2);
  CHECK(s.records[0].id == "ethanol");
  CHECK(s.records[1].smiles == "c1ccccc1");
  CHECK(s.records[1].caption.empty());

  CHECK(error_of([&] { load_pairs(dir / "missing.tsv"); })
        == ErrorCode::kIoFailure);
}

TEST_CASE("write and reload round trip") {
  auto dir = test::scratch("roundtrip");
  std::vector<PairRecord> in = {
    pair("CCO", "line one\nline two", "x"),
    pair("c1ccccc1", "tab\there and a \\ backslash"),
  };
  for (const char *name: { "out.tsv", "out.jsonl" }) {
    CAPTURE(name);
    write_pairs(dir / name, in);
    CHECK_FALSE(std::filesystem::exists(dir / (std::string(name) + ".tmp")));
    LoadResult back = load_pairs(dir / name);
    REQUIRE(back.records.size() == in.size());
    CHECK(back.rejected.empty());
    for (std::size_t i = 0; i < in.size(); ++i) {
      CHECK(back.records[i].smiles == in[i].smiles);
      CHECK(back.records[i].caption == in[i].caption);
      CHECK(back.records[i].id == in[i].id);
    }
  }
}

TEST_CASE("atomic write replaces content") {
  auto dir = test::scratch("atomic");
  write_file_atomic(dir / "f.txt", "first");
  write_file_atomic(dir / "f.txt", "second");
  CHECK(test::slurp(dir / "f.txt") == "second");
  CHECK(error_of([&] { write_file_atomic(dir / "no" / "such" / "f", "x"); })
        == ErrorCode::kIoFailure);
}

TEST_CASE("split sizes, coverage and determinism") {
  auto pairs = numbered(33010);
  Splits s = split(pairs, { { 0.8, 0.1, 0.1 }, 42 });
  CHECK(s.train.size() == 26408);
  CHECK(s.valid.size() == 3301);
  CHECK(s.test.size() == 3301);

  auto tr = ids_of(s.train), va = ids_of(s.valid), te = ids_of(s.test);
  std::set<std::string> all;
  all.insert(tr.begin(), tr.end());
  all.insert(va.begin(), va.end());
  all.insert(te.begin(), te.end());
  CHECK(all.size() == pairs.size());

  Splits again = split(pairs, { { 0.8, 0.1, 0.1 }, 42 });
  CHECK(again.train == s.train);
  CHECK(again.test == s.test);
  Splits other = split(pairs, { { 0.8, 0.1, 0.1 }, 43 });
  CHECK_FALSE(other.train == s.train);

  for (std::size_t n = 3; n < 40; ++n) {
    auto small = numbered(n);
    Splits t = split(small, { { 0.8, 0.1, 0.1 }, n });
    CHECK(t.train.size() + t.valid.size() + t.test.size() == n);
    std::set<std::string> u = ids_of(t.train);
    for (const auto &id: ids_of(t.valid))
      CHECK(u.insert(id).second);
    for (const auto &id: ids_of(t.test))
      CHECK(u.insert(id).second);
    CHECK(u.size() == n);
  }

  CHECK(error_of([] { split({}, {}); }) == ErrorCode::kEmptyInput);
  CHECK(error_of([&] { split(pairs, { { 0.5, 0.1, 0.1 }, 0 }); })
        == ErrorCode::kInvalidArgument);
  CHECK(error_of([&] { split(pairs, { { 1.2, -0.1, -0.1 }, 0 }); })
        == ErrorCode::kInvalidArgument);
}

TEST_CASE("dedupe by canonical form") {
  std::vector<PairRecord> target = {
    pair("OCC", "a", "1"), pair("c1ccccc1", "b", "2"), pair("C1CC", "c", "3"),
  };
  std::vector<PairRecord> reference = { pair("CCO", "r"), pair("((", "bad") };

  DedupeResult keep = dedupe_overlap(target, reference, OnParseError::kKeep);
  CHECK(keep.removed == 1);
  CHECK(keep.overlap_fraction == doctest::Approx(1.0 / 3.0));
  REQUIRE(keep.kept.size() == 2);
  CHECK(keep.kept[0].id == "2");
  CHECK(keep.kept[1].id == "3");
  REQUIRE(keep.errors.size() == 1);
  CHECK(keep.errors[0].line == 3);

  DedupeResult drop = dedupe_overlap(target, reference, OnParseError::kDrop);
  REQUIRE(drop.kept.size() == 1);
  CHECK(drop.kept[0].id == "2");

  DedupeResult twice = dedupe_overlap(keep.kept, reference);
  CHECK(twice.kept == keep.kept);
  CHECK(twice.removed == 0);

  // Unparseable records stay in the denominator.
  CHECK(dedupe_overlap(target, target).overlap_fraction
        == doctest::Approx(2.0 / 3.0));
  std::vector<PairRecord> clean(target.begin(), target.begin() + 2);
  CHECK(dedupe_overlap(clean, clean).overlap_fraction == 1.0);
  std::vector<PairRecord> unrelated = { pair("N", "ammonia") };
  CHECK(dedupe_overlap(target, unrelated).overlap_fraction == 0.0);
}

TEST_CASE("diagnostic filter with echo") {
  EchoAdapter echo;
  std::vector<PairRecord> pairs = {
    pair("CCO", "CCO"), pair("c1ccccc1", "benzene is c1ccccc1"),
    pair("CCN", "no structure given"),
  };
  FilterResult strict = diagnostic_filter(pairs, echo, 4.0, 2);
  CHECK(strict.kept.size() == 2);
  CHECK(strict.rejected.size() == 1);
  CHECK(strict.scores[2].reason == "no valid reconstruction");
  CHECK(strict.scores[0].mean_total == 4.0);

  FilterResult lax = diagnostic_filter(pairs, echo, 0.0, 1);
  CHECK(lax.kept.size() == 2);

  std::vector<PairRecord> bad_ref = { pair("C((", "C") };
  FilterResult r = diagnostic_filter(bad_ref, echo, 0.0, 1);
  CHECK(r.kept.empty());
  CHECK_FALSE(r.scores[0].reason.empty());

  CHECK(error_of([&] { diagnostic_filter(pairs, echo, 1.0, 0); })
        == ErrorCode::kInvalidArgument);

  std::string table = score_table(strict.scores);
  CHECK(table.rfind("index\tid\tscore", 0) == 0);
  CHECK(std::count(table.begin(), table.end(), '\n') == 4);
}

TEST_CASE("diagnostic filter recovers the clean half of the noisy fixture") {
  LoadResult noisy = load_pairs(test::fixtures() / "noisy_pairs.tsv");
  REQUIRE(noisy.rejected.empty());
  REQUIRE(noisy.records.size() == 100);
  EchoAdapter echo;
  FilterResult r = diagnostic_filter(noisy.records, echo, 2.0, 1, 7);
  auto expected = test::read_lines(test::fixtures() / "noisy_clean_ids.txt");
  CHECK(ids_of(r.kept) == std::set<std::string>(expected.begin(), expected.end()));

  auto kept = ids_of(r.kept), rejected = ids_of(r.rejected);
  CHECK(kept.size() + rejected.size() == noisy.records.size());
  for (const auto &id: kept)
    CHECK(rejected.count(id) == 0);
}

}  // TEST_SUITE
