// Copyright 2026 The GuessWhat-DM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gwdm/cli/cli.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gwdm/analysis/analysis.h"
#include "gwdm/core/errors.h"
#include "gwdm/data/features.h"
#include "gwdm/data/game.h"
#include "gwdm/data/line_reader.h"
#include "gwdm/data/toyworld.h"
#include "gwdm/play/game_loop.h"
#include "gwdm/train/trainer.h"
#include "json.hpp"

namespace gwdm {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct Common {
  std::string config;
  std::optional<uint64_t> seed;
  std::string profile;
  std::optional<int> maxq;
  std::string variant;
  std::optional<int> jobs;
  std::vector<std::string> sets;
  bool force = false;
  std::string data;
  std::string features;
  std::string ckpt;
  std::string out;
  bool lenient = false;
  bool strict = false;
};

void AddConfigOptions(CLI::App* app, Common* c) {
  app->add_option("--config", c->config, "key=value configuration file");
  app->add_option("--seed", c->seed, "master seed");
  app->add_option("--profile", c->profile, "dimension profile")
      ->check(CLI::IsMember({"toy", "paper"}));
  app->add_option("--jobs", c->jobs, "concurrent rollouts")->check(CLI::PositiveNumber);
  app->add_option("--set", c->sets, "override any configuration key (key=value)");
}

void AddPlayOptions(CLI::App* app, Common* c) {
  app->add_option("--maxq", c->maxq, "question cap")->check(CLI::PositiveNumber);
  app->add_option("--variant", c->variant, "baseline, dm1, dm2 or hybrid")
      ->check(CLI::IsMember({"baseline", "dm1", "dm2", "hybrid"}));
}

void AddDataOptions(CLI::App* app, Common* c, bool need_ckpt) {
  app->add_option("--data", c->data, "game file or directory with games.jsonl")->required();
  app->add_option("--features", c->features, "feature table (default: <data dir>/features.txt)");
  if (need_ckpt) app->add_option("--ckpt", c->ckpt, "checkpoint directory")->required();
  auto* lenient = app->add_flag("--lenient", c->lenient, "skip malformed game lines");
  app->add_flag("--strict", c->strict, "fail on the first malformed game line")
      ->excludes(lenient);
}

RunConfig ResolveConfig(const Common& c, std::map<std::string, std::string> flags) {
  auto put = [&](const std::string& key, const std::string& value) {
    if (!flags.emplace(key, value).second) {
      throw ArgumentError("configuration key given twice on the command line: " + key);
    }
  };
  if (c.seed) put("seed", std::to_string(*c.seed));
  if (!c.profile.empty()) put("profile", c.profile);
  if (c.maxq) put("maxq", std::to_string(*c.maxq));
  if (!c.variant.empty()) put("variant", c.variant);
  if (c.jobs) put("jobs", std::to_string(*c.jobs));
  for (const std::string& s : c.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw ArgumentError("--set expects key=value: " + s);
    const std::string key = s.substr(0, eq);
    if (!RunConfig::IsKey(key)) throw ArgumentError("unknown configuration key: " + key);
    put(key, s.substr(eq + 1));
  }
  const auto file = c.config.empty() ? std::map<std::string, std::string>{}
                                     : RunConfig::ParseFile(c.config);
  return RunConfig::Resolve(file, flags);
}

struct DataPaths {
  std::string games;
  std::string features;
};

DataPaths ResolveData(const Common& c) {
  DataPaths p;
  if (fs::is_directory(c.data)) {
    p.games = (fs::path(c.data) / "games.jsonl").string();
    if (!FileExists(p.games) && FileExists(p.games + ".gz")) p.games += ".gz";
    p.features = (fs::path(c.data) / "features.txt").string();
  } else {
    p.games = c.data;
    p.features = (fs::path(c.data).parent_path() / "features.txt").string();
  }
  if (!c.features.empty()) p.features = c.features;
  if (!FileExists(p.games)) throw IoError("game file not found: " + p.games);
  return p;
}

// Generated toy worlds are parsed strictly, anything else leniently, unless
// --strict or --lenient says otherwise.
bool IsToyWorld(const std::string& games_path) {
  const fs::path manifest = fs::path(games_path).parent_path() / "manifest.json";
  if (!FileExists(manifest.string())) return false;
  try {
    return nlohmann::json::parse(ReadFile(manifest.string())).value("command", "") ==
           "gen-toyworld";
  } catch (const nlohmann::json::exception&) {
    return false;
  }
}

bool UseLenient(const Common& c, const DataPaths& paths) {
  return c.lenient || (!c.strict && !IsToyWorld(paths.games));
}

std::vector<GameRecord> LoadGames(const Common& c, const DataPaths& paths,
                                  std::ostream* err = nullptr) {
  ParseResult r = ParseGames(paths.games, UseLenient(c, paths));
  if (err != nullptr && r.skipped_malformed + r.skipped_integrity > 0) {
    *err << "warning: skipped " << r.skipped_malformed << " malformed and "
         << r.skipped_integrity << " inconsistent game lines\n";
  }
  return std::move(r.games);
}

std::string FileHash(const std::string& path) { return HashBytes(ReadFile(path)); }

void EnsureDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
}

void CheckWritable(const std::vector<std::string>& paths, bool force) {
  if (force) return;
  for (const std::string& p : paths) {
    if (FileExists(p)) throw ArgumentError(p + " exists; pass --force to overwrite");
  }
}

ordered_json ConfigJson(const RunConfig& cfg) {
  ordered_json j = ordered_json::array();
  for (const std::string& k : RunConfig::Keys()) {
    j.push_back({{"key", k}, {"value", cfg.Str(k)}, {"source", SourceName(cfg.SourceOf(k))}});
  }
  return j;
}

void WriteManifest(const std::string& path, const std::string& command, const RunConfig& cfg,
                   const ordered_json& seeds, const std::vector<std::string>& inputs,
                   const std::vector<std::string>& outputs) {
  ordered_json j;
  j["command"] = command;
  j["config"] = ConfigJson(cfg);
  j["seeds"] = seeds;
  ordered_json in = ordered_json::object(), out = ordered_json::object();
  for (const std::string& p : inputs) in[p] = FileHash(p);
  for (const std::string& p : outputs) out[fs::path(p).filename().string()] = FileHash(p);
  j["inputs"] = in;
  j["outputs"] = out;
  WriteFile(path, j.dump(2) + "\n");
}

DecodeConfig DecodeFrom(const RunConfig& cfg) {
  DecodeConfig d;
  d.mode = cfg.Str("decode") == "sample" ? DecodeMode::kSample : DecodeMode::kGreedy;
  d.temperature = cfg.Double("temperature");
  d.max_len = cfg.Int("max_question_len");
  return d;
}

PlayMode ModeFrom(const std::string& variant, int cap) {
  return variant == "baseline" ? PlayMode::Baseline(cap)
                               : PlayMode::Gated(ParseDmVariant(variant), cap);
}

std::string RowFile(const PlayMode& mode) {
  return mode.Name() + "_" + std::to_string(mode.cap) + ".jsonl";
}

// Games, features, vocabulary and the frozen models needed for play.
struct PlayContext {
  std::vector<GameRecord> games;
  std::vector<GameRecord> test;
  FeatureTable features;
  Vocab vocab;
  ModelSet models;
  std::vector<std::string> inputs;

  PlayModels Models(const RunConfig& cfg, const DmModel* dm) const {
    PlayModels m;
    m.vocab = &vocab;
    m.features = &features;
    m.oracle = models.oracle ? &*models.oracle : nullptr;
    m.qgen = models.qgen ? &*models.qgen : nullptr;
    m.guesser = models.guesser ? &*models.guesser : nullptr;
    m.dm = dm;
    m.decode = DecodeFrom(cfg);
    return m;
  }
};

PlayContext LoadPlayContext(const Common& c, const RunConfig& cfg,
                            const std::vector<ModuleId>& modules) {
  PlayContext ctx;
  const DataPaths paths = ResolveData(c);
  ctx.games = LoadGames(c, paths);
  ctx.features = FeatureTable::Load(paths.features);
  ctx.test = SplitGames(ctx.games).test;
  const CheckpointDir dir{c.ckpt};
  if (!FileExists(dir.VocabPath())) throw DependencyError("missing " + dir.VocabPath());
  ctx.vocab = Vocab::Load(dir.VocabPath());
  ctx.models = LoadModels(dir, modules, cfg.Str("profile"), ctx.vocab);
  ctx.inputs = {paths.games, paths.features, dir.VocabPath()};
  for (ModuleId id : modules) ctx.inputs.push_back(dir.ModulePath(id));
  return ctx;
}

std::vector<ModuleId> ModulesFor(const std::string& variant) {
  std::vector<ModuleId> m = {ModuleId::kOracle, ModuleId::kGuesser, ModuleId::kQGen};
  if (variant != "baseline") m.push_back(ParseModule(variant));
  return m;
}

void ReportFailures(const std::string& label, int64_t n_failed, std::ostream& err) {
  if (n_failed > 0) err << "warning: " << label << ": " << n_failed << " games failed\n";
}

// ---------------------------------------------------------------------------

int CmdGenToyworld(const Common& c, std::optional<int> n, std::ostream& out) {
  std::map<std::string, std::string> flags;
  if (n) flags["n_games"] = std::to_string(*n);
  const RunConfig cfg = ResolveConfig(c, flags);
  const std::string games = c.out + "/games.jsonl", feats = c.out + "/features.txt";
  const std::string manifest = c.out + "/manifest.json";
  CheckWritable({games, feats, manifest}, c.force);
  const ToyWorld w = GenerateToyWorld(cfg.Seed(), cfg.Int("n_games"), ToyConfig{});
  EnsureDir(c.out);
  WriteGames(games, w.games);
  w.features.Save(feats);
  WriteManifest(manifest, "gen-toyworld", cfg, {{"seed", cfg.Seed()}}, {}, {games, feats});
  out << "wrote " << w.games.size() << " games to " << games << "\n";
  return kExitOk;
}

int CmdTrain(const Common& c, const std::string& which, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = ResolveConfig(c, {});
  const CheckpointDir dir{c.ckpt};
  std::vector<ModuleId> modules;
  if (which == "all") {
    modules = TrainOrder(cfg.Int("hybrid_dm") == 1);
  } else {
    modules = {ParseModule(which)};
  }
  std::vector<std::string> targets;
  for (ModuleId id : modules) targets.push_back(dir.ModulePath(id));
  CheckWritable(targets, c.force);

  const DataPaths paths = ResolveData(c);
  const std::vector<GameRecord> games = LoadGames(c, paths, &err);
  const TrainData data =
      PrepareTrainData(games, FeatureTable::Load(paths.features), cfg.Int("min_word_freq"));
  EnsureDir(c.ckpt);
  const std::string vocab_text = data.vocab.Serialize();
  if (FileExists(dir.VocabPath()) && ReadFile(dir.VocabPath()) != vocab_text) {
    if (which != "all" || !c.force) {
      throw CompatibilityError("vocabulary in " + dir.VocabPath() +
                               " differs from the one built from " + paths.games);
    }
  }
  WriteFile(dir.VocabPath(), vocab_text);
  out << "vocabulary: " << data.vocab.size() << " tokens, hash " << data.vocab.HashHex() << "\n";
  out << "splits: train " << data.splits.train.size() << ", val " << data.splits.val.size()
      << ", test " << data.splits.test.size() << "\n";

  ModelSet upstream;
  std::vector<std::string> inputs = {paths.games, paths.features};
  if (which != "all" && modules.front() >= ModuleId::kDm1) {
    upstream = LoadModels(dir, {ModuleId::kGuesser, ModuleId::kQGen}, cfg.Str("profile"),
                          data.vocab);
    inputs.push_back(dir.ModulePath(ModuleId::kGuesser));
    inputs.push_back(dir.ModulePath(ModuleId::kQGen));
  }
  ordered_json seeds = {{"seed", cfg.Seed()}};
  std::vector<std::string> outputs = {dir.VocabPath()};
  for (ModuleId id : modules) {
    const std::string name = ModuleName(id);
    const TrainOutcome o = TrainModule(id, data, upstream, cfg, [&](const EpochLog& e) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%s epoch %d train %.6f val %.6f%s\n", name.c_str(),
                    e.epoch, e.train_loss, e.val_loss, e.improved ? " *" : "");
      err << buf;
    });
    SaveCheckpoint(dir.ModulePath(id), o.checkpoint);
    WriteFile(dir.LogPath(id), TrainingLogCsv(o.log));
    outputs.push_back(dir.ModulePath(id));
    outputs.push_back(dir.LogPath(id));
    if (id >= ModuleId::kDm1) {
      WriteFile(dir.LabelsPath(id), LabelsCsv(o.labels));
      outputs.push_back(dir.LabelsPath(id));
    }
    InstallModule(id, o.checkpoint, &upstream);
    const int idx = static_cast<int>(id) + 1;
    seeds[name] = {{"init", DeriveSeed(cfg.Seed(), 16 * idx)},
                   {"shuffle", DeriveSeed(cfg.Seed(), 16 * idx + 1)}};
    char buf[200];
    std::snprintf(buf, sizeof(buf), "%s: best epoch %d, val loss %.6f, %lld train examples\n",
                  name.c_str(), o.best_epoch, o.best_val, static_cast<long long>(o.n_train));
    out << buf;
  }
  WriteManifest(c.ckpt + "/manifest_" + which + ".json", "train " + which, cfg, seeds, inputs,
                outputs);
  return kExitOk;
}

void PrintSummary(const std::string& label, const PlaySummary& s, std::ostream& out) {
  char buf[200];
  std::snprintf(buf, sizeof(buf), "%s: accuracy %.4f%%, mean questions %.4f, decided %.4f%% (%lld games)\n",
                label.c_str(), s.accuracy, s.mean_questions, s.pct_decided,
                static_cast<long long>(s.n_games));
  out << buf;
}

int CmdSelfplay(const Common& c, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = ResolveConfig(c, {});
  const std::string variant = cfg.Str("variant");
  const std::string transcripts = c.out + "/transcripts.jsonl", summary = c.out + "/summary.csv";
  const std::string manifest = c.out + "/manifest.json";
  CheckWritable({transcripts, summary, manifest}, c.force);
  const PlayContext ctx = LoadPlayContext(c, cfg, ModulesFor(variant));
  const PlayMode mode = ModeFrom(variant, cfg.Int("maxq"));
  const DmModel* dm = variant == "baseline" ? nullptr : ctx.models.Dm(ParseDmVariant(variant));
  BatchOutcome b = PlayBatch(ctx.test, ctx.Models(cfg, dm), mode, cfg.Seed(), cfg.Int("jobs"));
  for (const GameFailure& f : b.failures) err << "game " << f.game_id << ": " << f.message << "\n";
  EnsureDir(c.out);
  WriteFile(transcripts, TranscriptJsonl(b.results));
  WriteFile(summary, SweepCsv({SweepRow{mode, b.summary, {}}}));
  WriteManifest(manifest, "selfplay", cfg,
                {{"seed", cfg.Seed()}, {"game_seed", "DeriveSeed(seed, game_id)"}}, ctx.inputs,
                {transcripts, summary});
  PrintSummary(mode.Name() + " maxq " + std::to_string(mode.cap), b.summary, out);
  ReportFailures(mode.Name(), b.summary.n_failed, err);
  return kExitOk;
}

int CmdEvalSweep(const Common& c, const std::string& caps_flag, std::ostream& out,
                 std::ostream& err) {
  std::map<std::string, std::string> flags;
  if (!caps_flag.empty()) flags["sweep_maxq"] = caps_flag;
  const RunConfig cfg = ResolveConfig(c, flags);
  const std::string sweep = c.out + "/sweep.csv", manifest = c.out + "/manifest.json";
  CheckWritable({sweep, manifest}, c.force);
  const bool hybrid = cfg.Int("hybrid_dm") == 1;
  std::vector<ModuleId> modules = {ModuleId::kOracle, ModuleId::kGuesser, ModuleId::kQGen,
                                   ModuleId::kDm1, ModuleId::kDm2};
  if (hybrid) modules.push_back(ModuleId::kHybrid);
  const PlayContext ctx = LoadPlayContext(c, cfg, modules);
  const std::vector<int> caps = cfg.IntList("sweep_maxq");
  const uint64_t seed = cfg.Seed();
  const int jobs = cfg.Int("jobs");

  SweepModels sm{ctx.Models(cfg, nullptr), &*ctx.models.dm1, &*ctx.models.dm2};
  std::vector<SweepRow> rows = EvalSweep(ctx.test, sm, caps, seed, jobs);
  for (const SweepRow& r : rows) {
    PrintSummary(r.mode.Name() + " maxq " + std::to_string(r.mode.cap), r.summary, out);
    ReportFailures(r.mode.Name(), r.summary.n_failed, err);
  }
  // Runs the analysis needs that the sweep did not cover.
  std::vector<PlayMode> extra = {PlayMode::Baseline(cfg.Int("baseline_questions")),
                                 PlayMode::Baseline(cfg.Int("maxq")),
                                 PlayMode::Gated(DmVariant::kDm1, cfg.Int("maxq")),
                                 PlayMode::Gated(DmVariant::kDm2, cfg.Int("maxq"))};
  if (hybrid) extra.push_back(PlayMode::Gated(DmVariant::kHybrid, cfg.Int("maxq")));
  std::vector<SweepRow> all = rows;
  for (const PlayMode& m : extra) {
    const bool covered = std::any_of(all.begin(), all.end(), [&](const SweepRow& r) {
      return r.mode.Name() == m.Name() && r.mode.cap == m.cap;
    });
    if (covered) continue;
    const DmModel* dm = m.gated ? ctx.models.Dm(m.variant) : nullptr;
    BatchOutcome b = PlayBatch(ctx.test, ctx.Models(cfg, dm), m, seed, jobs);
    ReportFailures(m.Name(), b.summary.n_failed, err);
    all.push_back({m, b.summary, std::move(b.results)});
  }

  EnsureDir(c.out + "/transcripts");
  std::vector<std::string> outputs = {sweep};
  WriteFile(sweep, SweepCsv(rows));
  for (const SweepRow& r : all) {
    const std::string path = c.out + "/transcripts/" + RowFile(r.mode);
    WriteFile(path, TranscriptJsonl(r.results));
    outputs.push_back(path);
  }
  WriteManifest(manifest, "eval-sweep", cfg,
                {{"seed", seed}, {"game_seed", "DeriveSeed(seed, game_id)"}}, ctx.inputs,
                outputs);
  out << "wrote " << sweep << "\n";
  return kExitOk;
}

SystemResults LoadSystem(const std::string& path) {
  SystemResults s;
  s.results = LoadTranscripts(path);
  s.name = s.results.empty() ? fs::path(path).stem().string() : s.results.front().mode;
  return s;
}

int CmdAnalyze(const Common& c, const std::string& runs, const std::string& baseline_fixed,
               const std::string& baseline_max, const std::vector<std::string>& dm_files,
               std::ostream& out) {
  const RunConfig cfg = ResolveConfig(c, {});
  const std::vector<std::string> files = {"repetition.csv", "change_table.csv", "regressions.csv",
                                          "decided.csv",    "sweep.csv",        "summary.txt"};
  std::vector<std::string> targets;
  for (const auto& f : files) targets.push_back(c.out + "/" + f);
  targets.push_back(c.out + "/manifest.json");
  CheckWritable(targets, c.force);

  const int maxq = cfg.Int("maxq");
  const std::string tdir = runs + "/transcripts/";
  auto pick = [&](const std::string& given, const std::string& fallback) {
    if (!given.empty()) return given;
    if (runs.empty()) throw ArgumentError("pass --runs or explicit transcript files");
    return tdir + fallback;
  };
  AnalysisInputs in;
  std::vector<std::string> inputs;
  const std::string fixed_path =
      pick(baseline_fixed, "baseline_" + std::to_string(cfg.Int("baseline_questions")) + ".jsonl");
  const std::string max_path = pick(baseline_max, "baseline_" + std::to_string(maxq) + ".jsonl");
  in.baseline_fixed = LoadSystem(fixed_path);
  in.baseline_max = LoadSystem(max_path);
  in.baseline_fixed.name = "baseline";
  in.baseline_max.name = "baseline";
  inputs = {fixed_path, max_path};
  std::vector<std::string> dms = dm_files;
  if (dms.empty()) {
    if (runs.empty()) throw ArgumentError("pass --runs or --dm transcript files");
    for (const char* v : {"dm1", "dm2", "hybrid"}) {
      const std::string p = tdir + v + "_" + std::to_string(maxq) + ".jsonl";
      if (FileExists(p)) dms.push_back(p);
    }
  }
  for (const std::string& p : dms) {
    in.dm_systems.push_back(LoadSystem(p));
    inputs.push_back(p);
  }
  if (!runs.empty() && FileExists(runs + "/sweep.csv")) {
    in.sweep_csv = ReadFile(runs + "/sweep.csv");
    inputs.push_back(runs + "/sweep.csv");
  }
  const DataPaths paths = ResolveData(c);
  in.games = LoadGames(c, paths);
  inputs.push_back(paths.games);

  const AnalysisReport report = RunAnalysis(in);
  EmitReport(report, c.out);
  std::vector<std::string> outputs;
  for (const auto& f : files) outputs.push_back(c.out + "/" + f);
  WriteManifest(c.out + "/manifest.json", "analyze", cfg, {{"seed", cfg.Seed()}}, inputs,
                outputs);
  out << SummaryText(report);
  return kExitOk;
}

int CmdPlay(const Common& c, std::optional<int64_t> game_id, std::istream& in, std::ostream& out) {
  const RunConfig cfg = ResolveConfig(c, {});
  const std::string variant = cfg.Str("variant");
  const PlayContext ctx = LoadPlayContext(c, cfg, ModulesFor(variant));
  if (ctx.test.empty()) throw ArgumentError("no test games available");
  const GameRecord* game = &ctx.test.front();
  if (game_id) {
    auto it = std::find_if(ctx.games.begin(), ctx.games.end(),
                           [&](const GameRecord& g) { return g.game_id == *game_id; });
    if (it == ctx.games.end()) throw ArgumentError("no game with id " + std::to_string(*game_id));
    game = &*it;
  }
  const PlayMode mode = ModeFrom(variant, cfg.Int("maxq"));
  const DmModel* dm = variant == "baseline" ? nullptr : ctx.models.Dm(ParseDmVariant(variant));
  const PlayOutcome o = InteractivePlay(*game, ctx.Models(cfg, dm), mode,
                                        GameSeed(cfg.Seed(), game->game_id), in, out);
  if (!c.out.empty()) {
    EnsureDir(c.out);
    const std::string path = c.out + "/session_" + std::to_string(game->game_id) + ".jsonl";
    CheckWritable({path}, c.force);
    WriteFile(path, TranscriptJsonl({o.result}));
    out << "transcript saved to " << path << "\n";
  }
  return kExitOk;
}

int CmdStats(const Common& c, bool filter, std::ostream& out) {
  const DataPaths paths = ResolveData(c);
  ParseResult parsed = ParseGames(paths.games, UseLenient(c, paths));
  std::vector<GameRecord> games = std::move(parsed.games);
  FilterReport fr;
  if (filter) games = FilterGames(games, &fr);
  const DatasetStats s = ComputeDatasetStats(games);
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "games %lld\nskipped_malformed %lld\nskipped_integrity %lld\n"
                "success %.4f\nfailure %.4f\nincomplete %.4f\n"
                "questions %lld\nmean_questions %.4f\n"
                "yes %.4f\nno %.4f\nna %.4f\nimages %lld\ndialogues_per_image %.4f\n",
                static_cast<long long>(s.n_games), static_cast<long long>(parsed.skipped_malformed),
                static_cast<long long>(parsed.skipped_integrity),
                100 * s.StatusFraction(GameStatus::kSuccess),
                100 * s.StatusFraction(GameStatus::kFailure),
                100 * s.StatusFraction(GameStatus::kIncomplete),
                static_cast<long long>(s.n_questions), s.mean_questions,
                100 * s.AnswerFraction(Answer::kYes), 100 * s.AnswerFraction(Answer::kNo),
                100 * s.AnswerFraction(Answer::kNa), static_cast<long long>(s.n_images),
                s.dialogues_per_image);
  out << buf;
  if (filter) out << "filtered_out " << fr.dropped << "\n";
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Guessing-game agents with a learned decision-making module", "gwdm"};
  app.require_subcommand(1);
  Common c;

  std::optional<int> n_games;
  auto* gen = app.add_subcommand("gen-toyworld", "generate a synthetic game set");
  AddConfigOptions(gen, &c);
  gen->add_option("--n", n_games, "number of games")->check(CLI::Range(1, 100000000));
  gen->add_option("--out", c.out, "output directory")->required();
  gen->add_flag("--force", c.force, "overwrite existing files");

  std::string module = "all";
  auto* train = app.add_subcommand("train", "train one module or all of them");
  AddConfigOptions(train, &c);
  AddDataOptions(train, &c, true);
  train->add_option("module", module, "oracle, guesser, qgen, dm1, dm2, hybrid or all")
      ->check(CLI::IsMember({"all", "oracle", "guesser", "qgen", "dm1", "dm2", "hybrid"}));
  train->add_flag("--force", c.force, "overwrite existing checkpoints");

  auto* selfplay = app.add_subcommand("selfplay", "play the test games with one system");
  AddConfigOptions(selfplay, &c);
  AddPlayOptions(selfplay, &c);
  AddDataOptions(selfplay, &c, true);
  selfplay->add_option("--out", c.out, "output directory")->required();
  selfplay->add_flag("--force", c.force, "overwrite existing files");

  std::string caps;
  auto* sweep = app.add_subcommand("eval-sweep", "baseline and decision modules over caps");
  AddConfigOptions(sweep, &c);
  AddPlayOptions(sweep, &c);
  AddDataOptions(sweep, &c, true);
  sweep->add_option("--caps", caps, "comma-separated question caps");
  sweep->add_option("--out", c.out, "output directory")->required();
  sweep->add_flag("--force", c.force, "overwrite existing files");

  std::string runs, baseline_fixed, baseline_max;
  std::vector<std::string> dm_files;
  auto* analyze = app.add_subcommand("analyze", "repetition, change tables and regressions");
  AddConfigOptions(analyze, &c);
  AddPlayOptions(analyze, &c);
  AddDataOptions(analyze, &c, false);
  analyze->add_option("--runs", runs, "eval-sweep output directory");
  analyze->add_option("--baseline-fixed", baseline_fixed, "baseline transcript (fixed length)");
  analyze->add_option("--baseline-max", baseline_max, "baseline transcript at the cap");
  analyze->add_option("--dm", dm_files, "gated transcript files");
  analyze->add_option("--out", c.out, "output directory")->required();
  analyze->add_flag("--force", c.force, "overwrite existing files");

  std::optional<int64_t> game_id;
  auto* play = app.add_subcommand("play", "answer the questioner yourself");
  AddConfigOptions(play, &c);
  AddPlayOptions(play, &c);
  AddDataOptions(play, &c, true);
  play->add_option("--game", game_id, "game id (default: first test game)");
  play->add_option("--out", c.out, "directory for the session transcript");
  play->add_flag("--force", c.force, "overwrite an existing transcript");

  bool filter = false;
  auto* stats = app.add_subcommand("stats", "dataset statistics");
  AddDataOptions(stats, &c, false);
  stats->add_flag("--filter", filter, "apply the object-count and target-area filters");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*gen) return CmdGenToyworld(c, n_games, out);
    if (*train) return CmdTrain(c, module, out, err);
    if (*selfplay) return CmdSelfplay(c, out, err);
    if (*sweep) return CmdEvalSweep(c, caps, out, err);
    if (*analyze) {
      return CmdAnalyze(c, runs, baseline_fixed, baseline_max, dm_files, out);
    }
    if (*play) return CmdPlay(c, game_id, in, out);
    if (*stats) return CmdStats(c, filter, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e);
  }
  return kExitUsage;
}

}  // namespace gwdm
