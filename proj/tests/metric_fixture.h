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

// Twelve crafted transcripts with hand-counted metric values.

#ifndef GWDM_TESTS_METRIC_FIXTURE_H_
#define GWDM_TESTS_METRIC_FIXTURE_H_

#include <string>
#include <vector>

#include "gwdm/analysis/analysis.h"

namespace gwdm::fixture {

inline GameResult MakeResult(int64_t id, const std::string& mode, int cap,
                             const std::vector<std::string>& questions, bool success,
                             bool decided) {
  GameResult r;
  r.game_id = id;
  r.mode = mode;
  r.cap = cap;
  r.success = success;
  r.decided = decided;
  r.n_questions = static_cast<int>(questions.size());
  r.target_id = 100 * id;
  r.guess_id = success ? r.target_id : r.target_id + 1;
  for (size_t i = 0; i < questions.size(); ++i) {
    Turn t;
    t.question = questions[i];
    t.answer = Answer::kNo;
    if (mode != "baseline") {
      t.decision = decided && i + 1 == questions.size() ? Decision::kGuess : Decision::kAsk;
    }
    r.transcript.push_back(t);
  }
  return r;
}

// Gated results at cap 10.
inline std::vector<GameResult> DmResults() {
  const std::string a = "is it a dog ?", b = "is it on the left ?", c = "is it red ?";
  const std::string sign = "is it a sign ?", plant = "is it a plant ?";
  const std::string potted = "is it a potted plant ?", racket = "is it a tennis racket ?";
  auto dm = [](int64_t id, const std::vector<std::string>& q, bool s, bool d) {
    return MakeResult(id, "dm2", 10, q, s, d);
  };
  return {
      dm(1, {a, b, a, c, b}, true, true),
      dm(2, {a, a}, true, true),
      dm(3, {"Is it the stop sign?", "is it the   STOP sign ?"}, false, true),
      dm(4, {sign, sign, sign}, true, true),
      dm(5, {c}, false, true),
      dm(6, {a, b, c, "is it a person ?"}, true, true),
      dm(7, {potted, plant, potted, plant}, false, true),
      dm(8, {b, b, b, b, b, b, b, b, b, b}, false, false),
      dm(9, {"is it a Man?", "is it a man ?"}, true, true),
      dm(10, {c, b}, false, true),
      dm(11, {racket, c, racket, b, c}, true, true),
      dm(12, {"is it an animal ?", "is it an animal?", "is it a cat ?"}, true, true),
  };
}

// Fixed five-question baseline over the same games.
inline std::vector<GameResult> BaselineResults() {
  const bool success[12] = {false, true, true, false, false, true,
                            false, true, false, true,  true,  true};
  std::vector<GameResult> out;
  for (int i = 0; i < 12; ++i) {
    out.push_back(MakeResult(i + 1, "baseline", 5, {"q1", "q2", "q3", "q4", "q5"}, success[i],
                             true));
  }
  return out;
}

struct Expected {
  // Repetition, overall scope: games 1 2 3 4 7 8 9 11 12 repeat; per-game
  // rates 2/5 1/2 1/2 2/3 0 0 2/4 9/10 1/2 0 2/5 1/3.
  int64_t overall_games = 9;
  Rational overall_across = Rational(75);
  Rational overall_within = Rational(235, 6);
  // Objects scope: games 1 2 3 7 9 11 12; rates 1/5 1/2 1/2 0 0 0 1/4 0 1/2
  // 0 1/5 1/3.
  int64_t objects_games = 7;
  Rational objects_across = Rational(175, 3);
  Rational objects_within = Rational(745, 36);
  // Change table, all games (12) and decided games (11).
  ChangeCounts all_fewer{2, 2, 5}, all_equal{1, 0, 1}, all_more{0, 1, 0};
  ChangeCounts dec_fewer{2, 2, 5}, dec_equal{1, 0, 1}, dec_more{0, 0, 0};
  int64_t all_denominator = 12, decided_denominator = 11;
  Rational all_fewer_total_pct = Rational(75);
  Rational dec_fewer_total_pct = Rational(900, 11);
  Rational dec_fewer_plus_pct = Rational(200, 11);
  Rational decided_pct = Rational(275, 3);
};

}  // namespace gwdm::fixture

#endif  // GWDM_TESTS_METRIC_FIXTURE_H_
