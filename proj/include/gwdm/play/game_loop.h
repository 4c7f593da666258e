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

#ifndef GWDM_PLAY_GAME_LOOP_H_
#define GWDM_PLAY_GAME_LOOP_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gwdm/data/features.h"
#include "gwdm/data/game.h"
#include "gwdm/data/vocab.h"
#include "gwdm/models/decider.h"
#include "gwdm/models/oracle.h"
#include "gwdm/models/questioner.h"

namespace gwdm {

// Baseline asks exactly `cap` questions; gated play consults the decision
// module after every QA pair and stops at the first Guess or at `cap`.
struct PlayMode {
  bool gated = false;
  DmVariant variant = DmVariant::kDm2;
  int cap = 5;

  static PlayMode Baseline(int n);
  static PlayMode Gated(DmVariant variant, int maxq);
  std::string Name() const;  // "baseline", "dm1", "dm2" or "hybrid"
};

struct Turn {
  std::string question;
  Answer answer = Answer::kYes;
  std::optional<Decision> decision;  // gated play only
  bool operator==(const Turn&) const = default;
};

struct GameResult {
  int64_t game_id = 0;
  std::string mode;
  int cap = 0;
  bool success = false;
  bool decided = false;
  int n_questions = 0;
  int64_t guess_id = 0;
  int64_t target_id = 0;
  std::vector<Turn> transcript;
  bool operator==(const GameResult&) const = default;
};

// Read-only model handles shared by all rollouts.
struct PlayModels {
  const Vocab* vocab = nullptr;
  const FeatureTable* features = nullptr;
  const OracleModel* oracle = nullptr;
  const QGenModel* qgen = nullptr;
  const GuesserModel* guesser = nullptr;
  const DmModel* dm = nullptr;  // required for gated play
  DecodeConfig decode;
};

// Supplies the answer to a generated question; nullopt aborts the game.
using Answerer = std::function<std::optional<Answer>(const GameRecord& game,
                                                     const std::string& question,
                                                     const std::vector<int>& tokens)>;
// Called after each completed turn.
using TurnObserver = std::function<void(int turn, const Turn&)>;

// Answers with the trained Oracle.
Answerer OracleAnswerer(const OracleModel& oracle);

struct PlayOutcome {
  GameResult result;
  bool aborted = false;  // the answerer gave up; no guess was made
};

// The game loop with an arbitrary answer source. Missing models raise
// ConfigError.
PlayOutcome PlayGameWith(const GameRecord& game, const PlayModels& models, const PlayMode& mode,
                         uint64_t seed, const Answerer& answerer,
                         const TurnObserver& observer = {});

GameResult PlayGame(const GameRecord& game, const PlayModels& models, const PlayMode& mode,
                    uint64_t seed);

struct PlaySummary {
  int64_t n_games = 0;   // games that completed
  int64_t n_failed = 0;  // games that raised an error
  double accuracy = 0;   // percent
  double mean_questions = 0;
  double pct_decided = 0;
};

// Accuracy, mean questions and decided rate over `results`.
PlaySummary Summarize(const std::vector<GameResult>& results);

struct GameFailure {
  int64_t game_id = 0;
  std::string message;
};

struct BatchOutcome {
  std::vector<GameResult> results;  // game order
  std::vector<GameFailure> failures;
  PlaySummary summary;
};

uint64_t GameSeed(uint64_t seed, int64_t game_id);

// Plays every game with seed GameSeed(seed, game_id), on up to `jobs`
// threads. Results keep the input order.
BatchOutcome PlayBatch(const std::vector<GameRecord>& games, const PlayModels& models,
                       const PlayMode& mode, uint64_t seed, int jobs = 1);

struct SweepRow {
  PlayMode mode;
  PlaySummary summary;
  std::vector<GameResult> results;
};

struct SweepModels {
  PlayModels base;  // dm ignored
  const DmModel* dm1 = nullptr;
  const DmModel* dm2 = nullptr;
};

// For each cap: baseline, then DM1 and DM2 when present. Each row is an
// independent run over the same per-game seeds.
std::vector<SweepRow> EvalSweep(const std::vector<GameRecord>& games, const SweepModels& models,
                                const std::vector<int>& caps, uint64_t seed, int jobs = 1);

// "mode,maxq,accuracy,mean_questions,pct_decided", four decimals.
std::string SweepCsv(const std::vector<SweepRow>& rows);

// One JSON record per turn: game_id, turn, question, answer, decision, guess,
// success, plus mode, maxq, decided and target.
std::string TranscriptJsonl(const std::vector<GameResult>& results);
std::vector<GameResult> ParseTranscriptJsonl(std::string_view text);
std::vector<GameResult> LoadTranscripts(const std::string& path);

// Terminal session: generated questions are shown on `out` and answered on
// `in` with y, n or na (re-prompting on anything else). EOF aborts cleanly.
PlayOutcome InteractivePlay(const GameRecord& game, const PlayModels& models,
                            const PlayMode& mode, uint64_t seed, std::istream& in,
                            std::ostream& out);

// Parses y/yes, n/no, na/n/a (case-insensitive).
std::optional<Answer> ParseHumanAnswer(std::string_view text);

}  // namespace gwdm

#endif  // GWDM_PLAY_GAME_LOOP_H_
