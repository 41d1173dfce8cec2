//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "rtmol/chem/smiles.h"
#include "rtmol/chem/validity.h"
#include "rtmol/dataset/dataset.h"
#include "rtmol/error.h"
#include "rtmol/fingerprints/fingerprints.h"
#include "rtmol/grpo/grpo.h"
#include "rtmol/harness/harness.h"
#include "rtmol/metrics/metrics.h"
#include "rtmol/policy/adapters.h"
#include "rtmol/policy/remote.h"
#include "rtmol/theory/theory.h"

#include "CLI11.hpp"

namespace fs = std::filesystem;
using namespace rtmol;

namespace {

std::vector<std::string> read_smiles_lines(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::kIoFailure, "IoFailure: cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    auto cut = line.find_first_of(" \t");
    if (cut != std::string::npos)
      line.resize(cut);
    if (!line.empty())
      out.push_back(line);
  }
  return out;
}

std::vector<std::string> inputs(const std::vector<std::string> &args,
                                const std::string &file) {
  std::vector<std::string> out = args;
  if (!file.empty()) {
    auto more = read_smiles_lines(file);
    out.insert(out.end(), more.begin(), more.end());
  }
  if (out.empty())
    throw CLI::ValidationError("input", "give SMILES arguments or --in FILE");
  return out;
}

void emit(const std::string &out_path, const std::string &text) {
  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    write_file_atomic(out_path, text);
}

std::vector<PairRecord> load_checked(const std::string &path,
                                     const std::string &sidecar) {
  LoadResult r = load_pairs(path);
  if (!r.rejected.empty()) {
    std::cerr << r.rejected.size() << " malformed line(s) in " << path << "\n";
    if (!sidecar.empty())
      write_sidecar(sidecar, r.rejected);
  }
  return std::move(r.records);
}

struct RemoteFlags {
  RemoteEndpointConfig cfg;

  void attach(CLI::App *app) {
    app->add_option("--endpoint", cfg.base_url, "Remote base URL")
        ->capture_default_str();
    app->add_option("--endpoint-path", cfg.path, "Chat completions path")
        ->capture_default_str();
    app->add_option("--model", cfg.model, "Remote model name")
        ->capture_default_str();
    app->add_option("--timeout", cfg.timeout_seconds, "Seconds per request")
        ->capture_default_str();
    app->add_option("--retries", cfg.max_retries, "Retries on transient errors")
        ->capture_default_str();
    app->add_option("--max-in-flight", cfg.max_in_flight,
                    "Concurrent request cap")
        ->capture_default_str();
    app->add_option("--backoff", cfg.backoff_seconds, "First retry delay (s)")
        ->capture_default_str();
    app->add_option("--api-key-env", cfg.api_key_env,
                    "Environment variable holding the API key")
        ->capture_default_str();
    app->add_option("--captioner-prompt", cfg.captioner_prompt,
                    "System prompt for captioning");
    app->add_option("--generator-prompt", cfg.generator_prompt,
                    "System prompt for generation");
    app->add_option("--smiles-pattern", cfg.smiles_pattern,
                    "Regex (first group or whole match) for SMILES in replies");
  }
};

std::shared_ptr<PolicyAdapter> make_adapter(const std::string &kind,
                                            const RemoteFlags &remote) {
  if (kind == "echo")
    return std::make_shared<EchoAdapter>();
  if (kind == "remote")
    return std::make_shared<RemoteAdapter>(remote.cfg);
  throw CLI::ValidationError("adapter", "unknown adapter '" + kind + "'");
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

const std::vector<std::string> kAdapters = { "echo", "remote" };

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{ "rtmol: round-trip molecule/text toolkit" };
  app.require_subcommand(1);
  app.set_config("--config", "", "INI defaults, one [subcommand] section each; command-line flags win");
  app.option_defaults()->always_capture_default();

  std::function<int()> run;
  auto on = [&](CLI::App *sub, std::function<int()> fn) {
    sub->callback([&run, fn = std::move(fn)] { run = fn; });
  };

  // canon
  std::vector<std::string> canon_args;
  std::string canon_in, canon_out;
  auto *canon = app.add_subcommand("canon", "Print canonical SMILES");
  canon->add_option("smiles", canon_args, "SMILES strings");
  canon->add_option("--in", canon_in, "File with one SMILES per line");
  canon->add_option("--out", canon_out, "Output file (default stdout)");
  on(canon, [&] {
    std::string text;
    for (const std::string &s: inputs(canon_args, canon_in))
      text += canonical_smiles(s) + "\n";
    emit(canon_out, text);
    return 0;
  });

  // validate
  std::vector<std::string> val_args;
  std::string val_in;
  auto *validate = app.add_subcommand(
      "validate", "Check syntax and valences; exit 1 if any input is invalid");
  validate->add_option("smiles", val_args, "SMILES strings");
  validate->add_option("--in", val_in, "File with one SMILES per line");
  on(validate, [&] {
    std::size_t bad = 0;
    for (const std::string &s: inputs(val_args, val_in)) {
      ValidityReport r = check_validity(s);
      if (r.is_valid) {
        std::cout << s << "\tvalid\n";
        continue;
      }
      ++bad;
      std::cout << s << "\tinvalid";
      for (const ValidityFailure &f: r.failures) {
        std::cout << "\t";
        if (f.atom >= 0)
          std::cout << "atom " << f.atom << ": ";
        std::cout << f.reason;
      }
      std::cout << "\n";
    }
    return bad ? 1 : 0;
  });

  // fp
  std::vector<std::string> fp_args;
  std::string fp_in, fp_family = "morgan", fp_out;
  int fp_radius = kDefaultMorganRadius, fp_len = kDefaultMaxPathLength;
  bool fp_catalog = false;
  auto *fp = app.add_subcommand("fp", "Dump fingerprint feature sets");
  fp->add_option("smiles", fp_args, "SMILES strings");
  fp->add_option("--in", fp_in, "File with one SMILES per line");
  fp->add_option("--family", fp_family, "morgan | path | keys")
      ->check(CLI::IsMember({ "morgan", "path", "rdk", "keys", "maccs" }));
  fp->add_option("--radius", fp_radius, "Morgan radius")->check(CLI::NonNegativeNumber);
  fp->add_option("--max-len", fp_len, "Longest path in bonds")
      ->check(CLI::PositiveNumber);
  fp->add_option("--out", fp_out, "Output file (default stdout)");
  fp->add_flag("--catalog", fp_catalog, "Print the structural key catalog");
  on(fp, [&] {
    if (fp_catalog) {
      emit(fp_out, structural_key_table());
      return 0;
    }
    FingerprintFamily fam = *parse_family(fp_family);
    std::string text;
    for (const std::string &s: inputs(fp_args, fp_in)) {
      Molecule m = parse_smiles(s);
      FeatureSet f = fam == FingerprintFamily::kMorgan ? morgan_features(m, fp_radius)
                     : fam == FingerprintFamily::kPath ? path_features(m, fp_len)
                                                       : structural_keys(m);
      text += "# " + s + "\n" + dump_feature_set(f);
    }
    emit(fp_out, text);
    return 0;
  });

  // score
  std::string sc_ref, sc_hyp;
  bool sc_json = false;
  auto *score = app.add_subcommand("score", "Reconstruction score of one pair");
  score->add_option("--ref", sc_ref, "Reference SMILES")->required();
  score->add_option("--hyp", sc_hyp, "Reconstructed SMILES")->required();
  score->add_flag("--json", sc_json, "Print JSON");
  on(score, [&] {
    ScoreBreakdown s = reconstruction_score(sc_ref, sc_hyp);
    if (sc_json) {
      std::cout << "{\"valid\": " << (s.valid ? "true" : "false")
                << ", \"exact\": " << (s.exact ? "true" : "false")
                << ", \"keys\": " << fixed(s.t_keys, 6)
                << ", \"path\": " << fixed(s.t_path, 6)
                << ", \"morgan\": " << fixed(s.t_morgan, 6)
                << ", \"total\": " << fixed(s.total, 6) << "}\n";
    } else {
      std::cout << "total " << fixed(s.total, 4) << "\n"
                << "valid " << (s.valid ? 1 : 0) << "\n"
                << "exact " << (s.exact ? 1 : 0) << "\n"
                << "keys " << fixed(s.t_keys, 4) << "\n"
                << "path " << fixed(s.t_path, 4) << "\n"
                << "morgan " << fixed(s.t_morgan, 4) << "\n";
    }
    return 0;
  });

  // eval
  std::string ev_pairs, ev_pred, ev_cap = "echo", ev_gen = "echo", ev_out,
              ev_samples_out;
  int ev_samples = 1, ev_jobs = 1;
  double ev_temp = 1.0;
  std::uint64_t ev_seed = 0;
  RemoteFlags ev_remote;
  auto *eval = app.add_subcommand("eval", "Batch round-trip evaluation report");
  auto *ev_src = eval->add_option_group("source");
  ev_src->add_option("--pairs", ev_pairs, "Pairs or .smi corpus to round-trip");
  ev_src->add_option("--predictions", ev_pred,
                     "TSV of smiles, caption, reconstruction[, reference caption]");
  ev_src->require_option(1);
  eval->add_option("--captioner", ev_cap, "echo | remote")->check(CLI::IsMember(kAdapters));
  eval->add_option("--generator", ev_gen, "echo | remote")->check(CLI::IsMember(kAdapters));
  eval->add_option("--samples", ev_samples, "Round trips per molecule")
      ->check(CLI::PositiveNumber);
  eval->add_option("--temperature", ev_temp, "Sampling temperature");
  eval->add_option("--seed", ev_seed, "Random seed");
  eval->add_option("--jobs", ev_jobs, "Worker threads")->check(CLI::PositiveNumber);
  eval->add_option("--out", ev_out, "Write the report as JSON");
  eval->add_option("--samples-out", ev_samples_out,
                   "Write per-sample rows (TSV)");
  ev_remote.attach(eval);
  on(eval, [&] {
    std::vector<RoundTripSample> samples;
    if (!ev_pred.empty()) {
      std::ifstream in(ev_pred);
      if (!in)
        throw Error(ErrorCode::kIoFailure, "IoFailure: cannot open " + ev_pred);
      std::string line;
      std::size_t n = 0;
      while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r')
          line.pop_back();
        if (line.empty() || (n == 1 && line.rfind("smiles\t", 0) == 0))
          continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, '\t');)
          cols.push_back(c);
        if (cols.size() < 3)
          throw Error(ErrorCode::kFormatUnknown,
                      "FormatUnknown: " + ev_pred + ":" + std::to_string(n)
                          + ": expected at least 3 columns");
        std::optional<std::string> ref;
        if (cols.size() > 3)
          ref = cols[3];
        samples.push_back(make_sample(cols[0], cols[1], cols[2], ref));
      }
    } else {
      auto pairs = load_checked(ev_pairs, "");
      auto cap = make_adapter(ev_cap, ev_remote);
      auto gen = make_adapter(ev_gen, ev_remote);
      ScoreCache cache;
      samples = evaluate_round_trip(*cap, *gen, pairs, ev_samples, ev_temp,
                                    ev_seed, cache, ev_jobs);
    }
    EvalReport rep = aggregate_report(samples);
    if (!ev_samples_out.empty()) {
      std::string t = "smiles\tcaption\treconstruction\tvalid\texact\ttotal\n";
      for (const RoundTripSample &s: samples)
        t += s.original + "\t" + s.caption + "\t" + s.reconstruction + "\t"
             + (s.score.valid ? "1" : "0") + "\t" + (s.score.exact ? "1" : "0")
             + "\t" + fixed(s.score.total, 6) + "\n";
      write_file_atomic(ev_samples_out, t);
    }
    if (!ev_out.empty())
      write_file_atomic(ev_out, report_json(rep) + "\n");
    std::cout << report_text(rep);
    std::cout << "round_trip_rate " << fixed(round_trip_rate(samples), 4) << "\n";
    return 0;
  });

  // split
  std::string sp_in, sp_dir;
  std::vector<double> sp_ratios{ 0.8, 0.1, 0.1 };
  std::uint64_t sp_seed = 0;
  auto *splitc = app.add_subcommand("split", "Seeded train/valid/test split");
  splitc->add_option("--in", sp_in, "Input pairs")->required();
  splitc->add_option("--out-dir", sp_dir, "Output directory")->required();
  splitc->add_option("--ratios", sp_ratios, "train valid test ratios")
      ->expected(3)->delimiter(',');
  splitc->add_option("--seed", sp_seed, "Random seed");
  on(splitc, [&] {
    auto pairs = load_checked(sp_in, "");
    SplitSpec spec;
    spec.ratios = { sp_ratios[0], sp_ratios[1], sp_ratios[2] };
    spec.seed = sp_seed;
    Splits s = split(pairs, spec);
    fs::create_directories(sp_dir);
    const std::string ext = fs::path(sp_in).extension().string();
    write_pairs(fs::path(sp_dir) / ("train" + ext), s.train);
    write_pairs(fs::path(sp_dir) / ("valid" + ext), s.valid);
    write_pairs(fs::path(sp_dir) / ("test" + ext), s.test);
    std::cout << "train " << s.train.size() << "\nvalid " << s.valid.size()
              << "\ntest " << s.test.size() << "\n";
    return 0;
  });

  // dedupe
  std::string dd_in, dd_ref, dd_out, dd_sidecar, dd_mode = "keep";
  auto *dedupe = app.add_subcommand(
      "dedupe", "Drop records whose canonical SMILES occurs in a reference set");
  dedupe->add_option("--in", dd_in, "Target pairs")->required();
  dedupe->add_option("--reference", dd_ref, "Reference pairs")->required();
  dedupe->add_option("--out", dd_out, "Output pairs")->required();
  dedupe->add_option("--sidecar", dd_sidecar, "Parse-error log (TSV)");
  dedupe->add_option("--on-parse-error", dd_mode, "keep | drop")
      ->check(CLI::IsMember({ "keep", "drop" }));
  on(dedupe, [&] {
    auto target = load_checked(dd_in, dd_sidecar);
    auto ref = load_checked(dd_ref, "");
    DedupeResult r = dedupe_overlap(
        target, ref, dd_mode == "drop" ? OnParseError::kDrop : OnParseError::kKeep);
    write_pairs(dd_out, r.kept);
    if (!dd_sidecar.empty() && !r.errors.empty())
      write_sidecar(dd_sidecar, r.errors);
    std::cout << "removed " << r.removed << " of " << target.size()
              << " (overlap " << fixed(r.overlap_fraction, 4) << ")\n";
    return 0;
  });

  // filter
  std::string fl_in, fl_out, fl_rej, fl_scores, fl_gen = "echo";
  double fl_tau = 2.0, fl_temp = 1.0;
  int fl_m = 1;
  std::uint64_t fl_seed = 0;
  RemoteFlags fl_remote;
  auto *filter = app.add_subcommand(
      "filter", "Keep pairs whose captions reconstruct their molecule");
  filter->add_option("--in", fl_in, "Input pairs")->required();
  filter->add_option("--out", fl_out, "Kept pairs")->required();
  filter->add_option("--rejected", fl_rej, "Rejected pairs");
  filter->add_option("--scores", fl_scores, "Score audit table (TSV)");
  filter->add_option("--tau", fl_tau, "Keep threshold in [0, 4]")
      ->check(CLI::Range(0.0, 4.0));
  filter->add_option("--samples", fl_m, "Generations per caption")
      ->check(CLI::PositiveNumber);
  filter->add_option("--generator", fl_gen, "echo | remote")
      ->check(CLI::IsMember(kAdapters));
  filter->add_option("--temperature", fl_temp, "Sampling temperature");
  filter->add_option("--seed", fl_seed, "Random seed");
  fl_remote.attach(filter);
  on(filter, [&] {
    auto pairs = load_checked(fl_in, "");
    auto gen = make_adapter(fl_gen, fl_remote);
    FilterResult r = diagnostic_filter(pairs, *gen, fl_tau, fl_m, fl_seed, fl_temp);
    write_pairs(fl_out, r.kept);
    if (!fl_rej.empty())
      write_pairs(fl_rej, r.rejected);
    if (!fl_scores.empty())
      write_file_atomic(fl_scores, score_table(r.scores));
    std::cout << "kept " << r.kept.size() << " of " << pairs.size() << "\n";
    return 0;
  });

  // train-toy
  std::string tt_dir = default_data_dir().string() + "/toy", tt_log, tt_roll,
              tt_reward, tt_grouping;
  std::uint64_t tt_seed = 0;
  int tt_steps = -1;
  auto *toy = app.add_subcommand("train-toy",
                                 "Alternating tabular training on the toy set");
  toy->add_option("--data-dir", tt_dir, "Toy data directory");
  auto *tt_seed_opt = toy->add_option("--seed", tt_seed, "Random seed (default: toy.json)");
  toy->add_option("--max-steps", tt_steps, "Override the step budget");
  toy->add_option("--reward", tt_reward, "shaped | exact")
      ->check(CLI::IsMember({ "shaped", "exact" }));
  toy->add_option("--grouping", tt_grouping, "sampled | literal")
      ->check(CLI::IsMember({ "sampled", "literal" }));
  toy->add_option("--log", tt_log, "Write the training log (JSON)");
  toy->add_option("--rollouts-out", tt_roll, "Export every rollout group (JSONL)");
  on(toy, [&] {
    ToySetup setup = load_toy(tt_dir);
    HarnessConfig &cfg = setup.config;
    if (*tt_seed_opt)
      cfg.seed = tt_seed;
    if (tt_steps >= 0)
      cfg.max_steps = tt_steps;
    if (!tt_reward.empty())
      cfg.reward = tt_reward == "exact" ? RewardMode::kExactOnly : RewardMode::kShaped;
    if (!tt_grouping.empty())
      cfg.grouping = tt_grouping == "literal" ? CaptionerGrouping::kLiteralN
                                              : CaptionerGrouping::kSampledCaptions;
    ToyPolicies pol = make_toy_policies(setup);
    std::unique_ptr<RolloutFileSink> sink;
    std::string tmp_roll;
    if (!tt_roll.empty()) {
      tmp_roll = tt_roll + ".partial";
      sink = std::make_unique<RolloutFileSink>(tmp_roll, false);
    }
    auto t0 = std::chrono::steady_clock::now();
    TrainingLog log = run_training(*pol.captioner, *pol.generator, setup.pairs,
                                   setup.pairs, cfg, sink.get());
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (sink)
      fs::rename(tmp_roll, tt_roll);
    if (!tt_log.empty())
      write_file_atomic(tt_log, log.to_json() + "\n");
    std::cout << "steps " << log.steps.size() << "\n"
              << "initial_round_trip " << fixed(log.initial_round_trip, 4) << "\n"
              << "final_round_trip " << fixed(log.final_round_trip, 4) << "\n"
              << "seconds " << fixed(secs, 2) << "\n";
    return 0;
  });

  // annotate
  std::string an_in, an_out, an_phase = "generator", an_cap = "remote",
              an_gen = "remote";
  int an_n = 32, an_g = 32, an_m = 1;
  double an_temp = 1.0;
  std::uint64_t an_seed = 0;
  RemoteFlags an_remote;
  auto *annotate = app.add_subcommand(
      "annotate", "Score model rollouts and export them with group advantages");
  annotate->add_option("--in", an_in, "Input pairs")->required();
  annotate->add_option("--out", an_out, "Rollout file (JSONL)")->required();
  annotate->add_option("--phase", an_phase, "generator | captioner")
      ->check(CLI::IsMember({ "generator", "captioner" }));
  annotate->add_option("--captioner", an_cap, "echo | remote")->check(CLI::IsMember(kAdapters));
  annotate->add_option("--generator", an_gen, "echo | remote")->check(CLI::IsMember(kAdapters));
  annotate->add_option("--rollouts", an_n, "Generator group size n")
      ->check(CLI::Range(2, 1 << 20));
  annotate->add_option("--group-size", an_g, "Captioner group size G")
      ->check(CLI::Range(2, 1 << 20));
  annotate->add_option("--recon-samples", an_m, "Reconstructions per caption m")
      ->check(CLI::PositiveNumber);
  annotate->add_option("--temperature", an_temp, "Sampling temperature");
  annotate->add_option("--seed", an_seed, "Random seed");
  an_remote.attach(annotate);
  on(annotate, [&] {
    auto pairs = load_checked(an_in, "");
    HarnessConfig cfg;
    cfg.rollouts = an_n;
    cfg.group_size = an_g;
    cfg.recon_samples = an_m;
    cfg.temperature = an_temp;
    cfg.seed = an_seed;
    cfg.batch_size = static_cast<int>(std::max<std::size_t>(pairs.size(), 1));
    ScoreCache cache;
    PhaseStats st;
    if (an_phase == "generator") {
      auto gen = make_adapter(an_gen, an_remote);
      st = generator_phase(*gen, pairs, cfg, an_seed, cache);
    } else {
      auto cap = make_adapter(an_cap, an_remote);
      auto gen = make_adapter(an_gen, an_remote);
      auto frozen = gen->frozen_copy();
      st = captioner_phase(*cap, *frozen, pairs, cfg, an_seed, cache);
    }
    export_rollouts(st.groups, an_out);
    std::size_t completions = 0;
    for (const RolloutGroup &g: st.groups)
      completions += g.completions.size();
    std::cout << "groups " << st.groups.size() << "\ncompletions " << completions
              << "\nmean_reward " << fixed(st.mean_reward, 4)
              << "\ndegenerate_fraction " << fixed(st.degenerate_fraction, 4)
              << "\n";
    return 0;
  });

  // theory check
  int th_n = 100, th_max = 6;
  std::uint64_t th_seed = 0;
  std::string th_out;
  bool th_negative = false;
  auto *theory = app.add_subcommand("theory", "Information-theoretic checks");
  theory->require_subcommand(1);
  auto *check = theory->add_subcommand(
      "check", "Verify the mutual-information lower bound on random systems");
  check->add_option("--systems", th_n, "Number of systems")->check(CLI::PositiveNumber);
  check->add_option("--max-size", th_max, "Largest |X| and |Y|")
      ->check(CLI::Range(2, 64));
  check->add_option("--seed", th_seed, "Random seed");
  check->add_option("--out", th_out, "Per-system reports (JSONL)");
  check->add_flag("--negative-control", th_negative,
                  "Use the posterior generator and understate MI by 1 nat; every check should fail");
  on(check, [&] {
    int holding = 0;
    std::string jsonl;
    for (int i = 0; i < th_n; ++i) {
      DiscreteSystem sys = random_system(th_seed + static_cast<std::uint64_t>(i), th_max);
      if (th_negative)
        sys = with_posterior_generator(sys);
      BoundReport r = check_mi_bound(sys);
      if (th_negative) {
        r.mi -= 1.0;
        r.holds = bound_holds(r);
      }
      holding += r.holds;
      jsonl += bound_report_json(r) + "\n";
    }
    if (!th_out.empty())
      write_file_atomic(th_out, jsonl);
    std::cout << holding << "/" << th_n << " bounds hold\n";
    return holding == th_n || th_negative ? 0 : 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  try {
    return run ? run() : 2;
  } catch (const CLI::ParseError &e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const Error &e) {
    std::string_view name = error_name(e.code());
    std::string what = e.what();
    if (what.rfind(name, 0) != 0)
      what = std::string(name) + ": " + what;
    std::cerr << what << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "IoFailure: " << e.what() << "\n";
    return 1;
  }
}
