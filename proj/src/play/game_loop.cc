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

#include "gwdm/play/game_loop.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "gwdm/core/random.h"
#include "gwdm/data/line_reader.h"
#include "gwdm/data/spatial.h"
#include "json.hpp"

namespace gwdm {

using nlohmann::json;

PlayMode PlayMode::Baseline(int n) {
  if (n < 1) throw ArgumentError("baseline question count must be >= 1");
  return {false, DmVariant::kDm2, n};
}

PlayMode PlayMode::Gated(DmVariant variant, int maxq) {
  if (maxq < 1) throw ArgumentError("MaxQ must be >= 1");
  return {true, variant, maxq};
}

std::string PlayMode::Name() const { return gated ? DmVariantName(variant) : "baseline"; }

Answerer OracleAnswerer(const OracleModel& oracle) {
  return [&oracle](const GameRecord& game, const std::string&,
                   const std::vector<int>& tokens) -> std::optional<Answer> {
    const ObjectInfo& t = game.target();
    return OracleAnswer(oracle, tokens, t.category_id,
                        EncodeSpatial(t.bbox, game.image.width, game.image.height));
  };
}

namespace {

void CheckModels(const PlayModels& models, const PlayMode& mode) {
  if (models.vocab == nullptr || models.features == nullptr || models.qgen == nullptr ||
      models.guesser == nullptr) {
    throw ConfigError("self-play needs a vocabulary, image features, qgen and guesser");
  }
  if (mode.gated && models.dm == nullptr) {
    throw ConfigError("gated play needs a trained " + DmVariantName(mode.variant) + " module");
  }
  if (mode.cap < 1) throw ArgumentError("question cap must be >= 1");
}

}  // namespace

PlayOutcome PlayGameWith(const GameRecord& game, const PlayModels& models, const PlayMode& mode,
                         uint64_t seed, const Answerer& answerer, const TurnObserver& observer) {
  CheckModels(models, mode);

  const std::vector<float>& features = models.features->Lookup(game.image.id);
  DialogueState state(*models.qgen, *models.guesser, features);
  Rng rng(seed);
  Rng* sampler = models.decode.mode == DecodeMode::kSample ? &rng : nullptr;

  PlayOutcome out;
  GameResult& r = out.result;
  r.game_id = game.game_id;
  r.mode = mode.Name();
  r.cap = mode.cap;
  r.target_id = game.target_id;

  for (int t = 1; t <= mode.cap; ++t) {
    const Generated q =
        QGenGenerate(*models.qgen, state.projection(), state.qgen_state(), models.decode, sampler);
    Turn turn;
    turn.question = models.vocab->Decode(q.tokens);
    const std::optional<Answer> answer = answerer(game, turn.question, q.tokens);
    if (!answer) {
      out.aborted = true;
      return out;
    }
    turn.answer = *answer;
    state.AppendQa(q.tokens, *answer, &q.state);
    r.n_questions = t;
    if (mode.gated) {
      const Vec<float> qh = state.qgen_state().h.col(0);
      const Vec<float> gh = state.guesser_state().h.col(0);
      const std::vector<float> x = DmInput(mode.variant, {}, qh, gh);
      const Vec<float> hidden = Eigen::Map<const Vec<float>>(x.data(), x.size());
      const Vec<float> p = DmForward(*models.dm, features, hidden);
      turn.decision = DmDecide(p(0), p(1));
    }
    r.transcript.push_back(turn);
    if (observer) observer(t, turn);
    if (turn.decision == Decision::kGuess) {
      r.decided = true;
      break;
    }
  }
  if (!mode.gated) r.decided = true;
  r.guess_id = GuesserPick(*models.guesser, state.guesser_state().h.col(0), game.objects,
                           game.image);
  r.success = r.guess_id == game.target_id;
  return out;
}

GameResult PlayGame(const GameRecord& game, const PlayModels& models, const PlayMode& mode,
                    uint64_t seed) {
  if (models.oracle == nullptr) throw ConfigError("self-play needs a trained oracle");
  return PlayGameWith(game, models, mode, seed, OracleAnswerer(*models.oracle)).result;
}

PlaySummary Summarize(const std::vector<GameResult>& results) {
  PlaySummary s;
  s.n_games = static_cast<int64_t>(results.size());
  if (results.empty()) return s;
  int64_t ok = 0, decided = 0, questions = 0;
  for (const GameResult& r : results) {
    ok += r.success;
    decided += r.decided;
    questions += r.n_questions;
  }
  const double n = static_cast<double>(results.size());
  s.accuracy = 100.0 * static_cast<double>(ok) / n;
  s.mean_questions = static_cast<double>(questions) / n;
  s.pct_decided = 100.0 * static_cast<double>(decided) / n;
  return s;
}

uint64_t GameSeed(uint64_t seed, int64_t game_id) {
  return DeriveSeed(seed, static_cast<uint64_t>(game_id));
}

BatchOutcome PlayBatch(const std::vector<GameRecord>& games, const PlayModels& models,
                       const PlayMode& mode, uint64_t seed, int jobs) {
  if (jobs < 1) throw ArgumentError("jobs must be >= 1");
  if (models.oracle == nullptr) throw ConfigError("self-play needs a trained oracle");
  std::vector<std::optional<GameResult>> slots(games.size());
  std::vector<std::string> errors(games.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < games.size(); i = next++) {
      try {
        slots[i] = PlayGame(games[i], models, mode, GameSeed(seed, games[i].game_id));
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  CheckModels(models, mode);
  const int n_threads = std::min<int>(jobs, static_cast<int>(std::max<size_t>(games.size(), 1)));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  BatchOutcome out;
  for (size_t i = 0; i < games.size(); ++i) {
    if (slots[i]) {
      out.results.push_back(std::move(*slots[i]));
    } else {
      out.failures.push_back({games[i].game_id, "game " + std::to_string(games[i].game_id) +
                                                    ": " + errors[i]});
    }
  }
  out.summary = Summarize(out.results);
  out.summary.n_failed = static_cast<int64_t>(out.failures.size());
  return out;
}

std::vector<SweepRow> EvalSweep(const std::vector<GameRecord>& games, const SweepModels& models,
                                const std::vector<int>& caps, uint64_t seed, int jobs) {
  std::vector<SweepRow> rows;
  for (int cap : caps) {
    std::vector<std::pair<PlayMode, const DmModel*>> modes = {{PlayMode::Baseline(cap), nullptr}};
    if (models.dm1 != nullptr) modes.push_back({PlayMode::Gated(DmVariant::kDm1, cap), models.dm1});
    if (models.dm2 != nullptr) modes.push_back({PlayMode::Gated(DmVariant::kDm2, cap), models.dm2});
    for (const auto& [mode, dm] : modes) {
      PlayModels m = models.base;
      m.dm = dm;
      BatchOutcome b = PlayBatch(games, m, mode, seed, jobs);
      rows.push_back({mode, b.summary, std::move(b.results)});
    }
  }
  return rows;
}

std::string SweepCsv(const std::vector<SweepRow>& rows) {
  std::string out = "mode,maxq,accuracy,mean_questions,pct_decided\n";
  char buf[160];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%d,%.4f,%.4f,%.4f\n", r.mode.Name().c_str(), r.mode.cap,
                  r.summary.accuracy, r.summary.mean_questions, r.summary.pct_decided);
    out += buf;
  }
  return out;
}

std::string TranscriptJsonl(const std::vector<GameResult>& results) {
  std::string out;
  for (const GameResult& r : results) {
    for (size_t i = 0; i < r.transcript.size(); ++i) {
      const Turn& t = r.transcript[i];
      json j;
      j["game_id"] = r.game_id;
      j["turn"] = static_cast<int>(i + 1);
      j["question"] = t.question;
      j["answer"] = AnswerString(t.answer);
      j["decision"] = t.decision ? DecisionString(*t.decision) : "none";
      j["guess"] = r.guess_id;
      j["success"] = r.success;
      j["mode"] = r.mode;
      j["maxq"] = r.cap;
      j["decided"] = r.decided;
      j["target"] = r.target_id;
      out += j.dump() + "\n";
    }
  }
  return out;
}

std::vector<GameResult> ParseTranscriptJsonl(std::string_view text) {
  std::vector<GameResult> out;
  std::map<int64_t, size_t> index;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const int64_t id = j.at("game_id").get<int64_t>();
      auto it = index.find(id);
      if (it == index.end()) {
        GameResult r;
        r.game_id = id;
        r.mode = j.at("mode").get<std::string>();
        r.cap = j.at("maxq").get<int>();
        r.guess_id = j.at("guess").get<int64_t>();
        r.success = j.at("success").get<bool>();
        r.decided = j.at("decided").get<bool>();
        r.target_id = j.at("target").get<int64_t>();
        it = index.emplace(id, out.size()).first;
        out.push_back(std::move(r));
      }
      GameResult& r = out[it->second];
      const int turn = j.at("turn").get<int>();
      if (turn != static_cast<int>(r.transcript.size()) + 1) {
        throw ParseError("turn " + std::to_string(turn) + " out of order for game " +
                         std::to_string(id));
      }
      Turn t;
      t.question = j.at("question").get<std::string>();
      const auto answer = ParseAnswer(j.at("answer").get<std::string>());
      if (!answer) throw ParseError("bad answer");
      t.answer = *answer;
      const std::string d = j.at("decision").get<std::string>();
      if (d == "ask") {
        t.decision = Decision::kAsk;
      } else if (d == "guess") {
        t.decision = Decision::kGuess;
      } else if (d != "none") {
        throw ParseError("bad decision '" + d + "'");
      }
      r.transcript.push_back(t);
      r.n_questions = turn;
    } catch (const json::exception& e) {
      throw ParseError("transcript line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError("transcript line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<GameResult> LoadTranscripts(const std::string& path) {
  if (!FileExists(path)) throw IoError("transcript file not found: " + path);
  return ParseTranscriptJsonl(ReadFile(path));
}

std::optional<Answer> ParseHumanAnswer(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (s == "y" || s == "yes") return Answer::kYes;
  if (s == "n" || s == "no") return Answer::kNo;
  if (s == "na" || s == "n/a") return Answer::kNa;
  return std::nullopt;
}

PlayOutcome InteractivePlay(const GameRecord& game, const PlayModels& models,
                            const PlayMode& mode, uint64_t seed, std::istream& in,
                            std::ostream& out) {
  out << "Game " << game.game_id << ": " << game.objects.size() << " objects\n";
  for (const ObjectInfo& o : game.objects) {
    out << "  object " << o.id << " " << o.category << " bbox [" << o.bbox.x << ", " << o.bbox.y
        << ", " << o.bbox.w << ", " << o.bbox.h << "]\n";
  }
  out << "Answer each question with y, n or na.\n";
  int turn_no = 0;
  Answerer human = [&](const GameRecord&, const std::string& question,
                       const std::vector<int>&) -> std::optional<Answer> {
    ++turn_no;
    for (;;) {
      out << "Q" << turn_no << ": " << question << " [y/n/na] " << std::flush;
      std::string line;
      if (!std::getline(in, line)) {
        out << "\n";
        return std::nullopt;
      }
      if (auto a = ParseHumanAnswer(line)) return a;
      out << "Please answer y, n or na.\n";
    }
  };
  TurnObserver show = [&](int t, const Turn& turn) {
    out << "A" << t << ": " << AnswerString(turn.answer);
    if (turn.decision) out << "  (decision: " << DecisionString(*turn.decision) << ")";
    out << "\n";
  };
  PlayOutcome o = PlayGameWith(game, models, mode, seed, human, show);
  if (o.aborted) {
    out << "Session aborted after " << o.result.transcript.size() << " answered questions.\n";
    return o;
  }
  out << "Guess: object " << o.result.guess_id << "; target: object " << game.target_id << " ("
      << game.target().category << ")\n"
      << (o.result.success ? "Success" : "Failure") << " after " << o.result.n_questions
      << " questions" << (mode.gated && !o.result.decided ? " (undecided, forced guess)" : "")
      << ".\n";
  return o;
}

}  // namespace gwdm
