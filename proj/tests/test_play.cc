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

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "gwdm/data/toyworld.h"
#include "gwdm/play/game_loop.h"

namespace gwdm {
namespace {

struct World {
  ToyWorld world = GenerateToyWorld(5, 30, ToyConfig{});
  Vocab vocab = Vocab::Build(world.games, 1);
  OracleModel oracle = OracleModel::Random({vocab.size(), 8, 6, 11, 4, 10}, 1);
  GuesserModel guesser = GuesserModel::Random({vocab.size(), 8, 6, 11, 4, 7}, 2);
  QGenModel qgen = QGenModel::Random({vocab.size(), 8, 32, 5, 6}, 3);
  DmModel dm2 = DmModel::Random({32, 6, 5}, 4);
  DmModel dm1 = DmModel::Random({32, 6, 5}, 5);

  PlayModels Models(const DmModel* dm = nullptr) const {
    PlayModels m;
    m.vocab = &vocab;
    m.features = &world.features;
    m.oracle = &oracle;
    m.qgen = &qgen;
    m.guesser = &guesser;
    m.dm = dm;
    return m;
  }
};

// Output-layer bias large enough to fix the decision.
DmModel Rigged(Decision d) {
  DmModel m = DmModel::Zeros({32, 6, 5});
  m.mlp.layers.back().b(static_cast<int>(d), 0) = 5.0f;
  return m;
}

bool IsCandidate(const GameRecord& g, int64_t id) {
  return std::any_of(g.objects.begin(), g.objects.end(),
                     [&](const ObjectInfo& o) { return o.id == id; });
}

TEST_CASE("baseline asks exactly N questions and is decided by convention") {
  World w;
  for (int n : {1, 5, 7}) {
    const BatchOutcome b = PlayBatch(w.world.games, w.Models(), PlayMode::Baseline(n), 1);
    REQUIRE(b.failures.empty());
    for (const GameResult& r : b.results) {
      CHECK(r.n_questions == n);
      CHECK(r.transcript.size() == static_cast<size_t>(n));
      CHECK(r.decided);
      CHECK(r.mode == "baseline");
      CHECK(IsCandidate(w.world.games[0], w.world.games[0].target_id));
      for (const Turn& t : r.transcript) CHECK_FALSE(t.decision.has_value());
    }
    CHECK(b.summary.mean_questions == n);
    CHECK(b.summary.pct_decided == 100.0);
  }
}

TEST_CASE("gated play with a DM that always guesses stops after one question") {
  World w;
  const DmModel guess = Rigged(Decision::kGuess);
  for (const GameRecord& g : w.world.games) {
    const GameResult r = PlayGame(g, w.Models(&guess), PlayMode::Gated(DmVariant::kDm2, 10), 3);
    CHECK(r.n_questions == 1);
    CHECK(r.decided);
    CHECK(r.transcript.back().decision == Decision::kGuess);
    CHECK(IsCandidate(g, r.guess_id));
  }
}

TEST_CASE("gated play with a DM that always asks hits the cap and still guesses") {
  World w;
  const DmModel ask = Rigged(Decision::kAsk);
  for (const GameRecord& g : w.world.games) {
    const GameResult r = PlayGame(g, w.Models(&ask), PlayMode::Gated(DmVariant::kDm1, 10), 3);
    CHECK(r.n_questions == 10);
    CHECK_FALSE(r.decided);
    CHECK(IsCandidate(g, r.guess_id));
    CHECK(r.success == (r.guess_id == g.target_id));
    for (const Turn& t : r.transcript) CHECK(t.decision == Decision::kAsk);
  }
}

TEST_CASE("gated invariants: cap respected, decided iff the DM said guess") {
  World w;
  for (int cap = 1; cap <= 6; ++cap) {
    for (const DmModel* dm : {&w.dm1, &w.dm2}) {
      const DmVariant v = dm == &w.dm1 ? DmVariant::kDm1 : DmVariant::kDm2;
      const BatchOutcome b = PlayBatch(w.world.games, w.Models(dm), PlayMode::Gated(v, cap), 2);
      for (const GameResult& r : b.results) {
        REQUIRE(r.n_questions >= 1);
        REQUIRE(r.n_questions <= cap);
        REQUIRE(r.decided == (r.transcript.back().decision == Decision::kGuess));
        for (size_t i = 0; i + 1 < r.transcript.size(); ++i) {
          REQUIRE(r.transcript[i].decision == Decision::kAsk);
        }
      }
      CHECK(b.summary.mean_questions <= cap);
    }
  }
}

TEST_CASE("missing models are configuration errors") {
  World w;
  const GameRecord& g = w.world.games[0];
  CHECK_THROWS_AS(PlayGame(g, w.Models(), PlayMode::Gated(DmVariant::kDm2, 5), 1), ConfigError);
  PlayModels no_oracle = w.Models();
  no_oracle.oracle = nullptr;
  CHECK_THROWS_AS(PlayGame(g, no_oracle, PlayMode::Baseline(5), 1), ConfigError);
  PlayModels no_qgen = w.Models();
  no_qgen.qgen = nullptr;
  CHECK_THROWS_AS(PlayBatch({g}, no_qgen, PlayMode::Baseline(5), 1).results.size(), ConfigError);
  CHECK_THROWS_AS(PlayMode::Baseline(0), ArgumentError);
  CHECK_THROWS_AS(PlayMode::Gated(DmVariant::kDm2, 0), ArgumentError);
}

TEST_CASE("batches are deterministic and independent of the thread count") {
  World w;
  const PlayMode mode = PlayMode::Gated(DmVariant::kDm2, 6);
  const BatchOutcome a = PlayBatch(w.world.games, w.Models(&w.dm2), mode, 9, 1);
  const BatchOutcome b = PlayBatch(w.world.games, w.Models(&w.dm2), mode, 9, 1);
  const BatchOutcome c = PlayBatch(w.world.games, w.Models(&w.dm2), mode, 9, 4);
  CHECK(a.results == b.results);
  CHECK(a.results == c.results);
  CHECK(TranscriptJsonl(a.results) == TranscriptJsonl(c.results));
  for (size_t i = 0; i < a.results.size(); ++i) {
    CHECK(a.results[i].game_id == w.world.games[i].game_id);
  }
}

TEST_CASE("sampled decoding is reproducible from the derived game seed") {
  World w;
  PlayModels m = w.Models();
  m.decode.mode = DecodeMode::kSample;
  const PlayMode mode = PlayMode::Baseline(4);
  const BatchOutcome a = PlayBatch(w.world.games, m, mode, 5, 1);
  const BatchOutcome b = PlayBatch(w.world.games, m, mode, 5, 3);
  const BatchOutcome c = PlayBatch(w.world.games, m, mode, 6, 1);
  CHECK(a.results == b.results);
  CHECK(a.results != c.results);
  const GameRecord& g = w.world.games[3];
  CHECK(PlayGame(g, m, mode, GameSeed(5, g.game_id)) == a.results[3]);
  CHECK(GameSeed(5, 1) != GameSeed(5, 2));
  CHECK(GameSeed(5, 1) != GameSeed(6, 1));
}

TEST_CASE("candidate order does not change the outcome") {
  World w;
  for (const GameRecord& g : w.world.games) {
    GameRecord rev = g;
    std::reverse(rev.objects.begin(), rev.objects.end());
    const GameResult a = PlayGame(g, w.Models(&w.dm2), PlayMode::Gated(DmVariant::kDm2, 5), 1);
    const GameResult b =
        PlayGame(rev, w.Models(&w.dm2), PlayMode::Gated(DmVariant::kDm2, 5), 1);
    CHECK(a == b);
  }
}

GameResult Result(bool success, int n, bool decided) {
  GameResult r;
  r.success = success;
  r.n_questions = n;
  r.decided = decided;
  return r;
}

TEST_CASE("summary examples") {
  const PlaySummary a = Summarize({Result(true, 1, true), Result(false, 1, true),
                                   Result(true, 1, true), Result(false, 1, false)});
  CHECK(a.accuracy == 50.0);
  CHECK(a.pct_decided == 75.0);
  CHECK(a.n_games == 4);
  CHECK(Summarize({Result(true, 4, true), Result(true, 6, true)}).mean_questions == 5.0);
  const PlaySummary none = Summarize({Result(true, 3, false), Result(false, 3, false)});
  CHECK(none.pct_decided == 0.0);
  CHECK(Summarize({}).n_games == 0);
}

TEST_CASE("failed games are reported and excluded from the summary") {
  World w;
  std::vector<GameRecord> games(w.world.games.begin(), w.world.games.begin() + 4);
  games[2].image.id = 999999;
  const BatchOutcome b = PlayBatch(games, w.Models(), PlayMode::Baseline(2), 1);
  CHECK(b.results.size() == 3);
  REQUIRE(b.failures.size() == 1);
  CHECK(b.failures[0].game_id == games[2].game_id);
  CHECK(b.failures[0].message.find(std::to_string(games[2].game_id)) != std::string::npos);
  CHECK(b.summary.n_games == 3);
  CHECK(b.summary.n_failed == 1);
}

TEST_CASE("sweep rows and csv") {
  World w;
  SweepModels m{w.Models(), &w.dm1, &w.dm2};
  const std::vector<SweepRow> rows = EvalSweep(w.world.games, m, {5, 8, 10}, 1);
  REQUIRE(rows.size() == 9);
  std::vector<std::string> modes;
  for (const SweepRow& r : rows) {
    modes.push_back(r.mode.Name());
    if (r.mode.gated) {
      CHECK(r.summary.mean_questions <= r.mode.cap);
    } else {
      CHECK(r.summary.mean_questions == r.mode.cap);
    }
  }
  CHECK(modes[0] == "baseline");
  CHECK(modes[1] == "dm1");
  CHECK(modes[2] == "dm2");
  CHECK(rows[3].mode.cap == 8);

  const std::string csv = SweepCsv(rows);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "mode,maxq,accuracy,mean_questions,pct_decided");
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    CHECK(std::count(line.begin(), line.end(), ',') == 4);
    CHECK(line.find('.') != std::string::npos);
  }
  CHECK(n == 9);
  CHECK(csv.find("baseline,5,") != std::string::npos);
  CHECK(csv.find(",5.0000,100.0000\n") != std::string::npos);

  SweepRow fixed{PlayMode::Gated(DmVariant::kDm2, 10), {}, {}};
  fixed.summary.accuracy = 100.0 / 3;
  fixed.summary.mean_questions = 4.5;
  fixed.summary.pct_decided = 12.34567;
  CHECK(SweepCsv({fixed}) ==
        "mode,maxq,accuracy,mean_questions,pct_decided\ndm2,10,33.3333,4.5000,12.3457\n");
}

TEST_CASE("transcripts round trip through jsonl") {
  World w;
  const BatchOutcome b =
      PlayBatch(w.world.games, w.Models(&w.dm2), PlayMode::Gated(DmVariant::kDm2, 4), 1);
  const std::string text = TranscriptJsonl(b.results);
  CHECK(ParseTranscriptJsonl(text) == b.results);
  const std::string first = text.substr(0, text.find('\n'));
  for (const char* key : {"\"game_id\"", "\"turn\"", "\"question\"", "\"answer\"",
                          "\"decision\"", "\"guess\"", "\"success\""}) {
    CHECK(first.find(key) != std::string::npos);
  }
  const BatchOutcome base = PlayBatch(w.world.games, w.Models(), PlayMode::Baseline(2), 1);
  CHECK(ParseTranscriptJsonl(TranscriptJsonl(base.results)) == base.results);
  CHECK_THROWS_AS(ParseTranscriptJsonl("{not json}\n"), ParseError);
  CHECK_THROWS_AS(ParseTranscriptJsonl(
                      "{\"game_id\":1,\"turn\":2,\"question\":\"q\",\"answer\":\"Yes\","
                      "\"decision\":\"none\",\"guess\":1,\"success\":true,\"mode\":\"baseline\","
                      "\"maxq\":5,\"decided\":true,\"target\":1}\n"),
                  ParseError);
}

TEST_CASE("human answers") {
  CHECK(ParseHumanAnswer("y") == Answer::kYes);
  CHECK(ParseHumanAnswer(" YES ") == Answer::kYes);
  CHECK(ParseHumanAnswer("n") == Answer::kNo);
  CHECK(ParseHumanAnswer("No") == Answer::kNo);
  CHECK(ParseHumanAnswer("na") == Answer::kNa);
  CHECK(ParseHumanAnswer("N/A") == Answer::kNa);
  CHECK_FALSE(ParseHumanAnswer("maybe").has_value());
  CHECK_FALSE(ParseHumanAnswer("").has_value());
}

TEST_CASE("interactive session: reprompt, decisions and final reveal") {
  World w;
  const GameRecord& g = w.world.games[0];
  const DmModel ask = Rigged(Decision::kAsk);
  std::istringstream in("y\nwhat\nn\nna\n");
  std::ostringstream out;
  const PlayOutcome o =
      InteractivePlay(g, w.Models(&ask), PlayMode::Gated(DmVariant::kDm2, 3), 1, in, out);
  CHECK_FALSE(o.aborted);
  CHECK(o.result.n_questions == 3);
  REQUIRE(o.result.transcript.size() == 3);
  CHECK(o.result.transcript[0].answer == Answer::kYes);
  CHECK(o.result.transcript[1].answer == Answer::kNo);
  CHECK(o.result.transcript[2].answer == Answer::kNa);
  const std::string text = out.str();
  CHECK(text.find("Please answer y, n or na.") != std::string::npos);
  CHECK(text.find("Q3: ") != std::string::npos);
  CHECK(text.find("target: object " + std::to_string(g.target_id)) != std::string::npos);
  CHECK(text.find("undecided") != std::string::npos);
}

TEST_CASE("interactive session: immediate guess ends after one question") {
  World w;
  const DmModel guess = Rigged(Decision::kGuess);
  std::istringstream in("n\ny\ny\n");
  std::ostringstream out;
  const PlayOutcome o = InteractivePlay(w.world.games[1], w.Models(&guess),
                                        PlayMode::Gated(DmVariant::kDm2, 10), 1, in, out);
  CHECK(o.result.n_questions == 1);
  CHECK(o.result.decided);
  CHECK(out.str().find("Q2") == std::string::npos);
}

TEST_CASE("interactive session: EOF aborts with the partial transcript") {
  World w;
  std::istringstream in("y\nn\n");
  std::ostringstream out;
  const PlayOutcome o =
      InteractivePlay(w.world.games[2], w.Models(), PlayMode::Baseline(5), 1, in, out);
  CHECK(o.aborted);
  CHECK(o.result.transcript.size() == 2);
  CHECK(out.str().find("aborted after 2") != std::string::npos);
}

}  // namespace
}  // namespace gwdm
