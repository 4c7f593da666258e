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

#include "gwdm/models/oracle.h"

namespace gwdm {

Vec<float> OracleForward(const OracleModel& m, const std::vector<int>& tokens,
                         int category_id, const SpatialVec& spatial) {
  OracleExample ex{tokens, category_id, spatial, Answer::kYes};
  Graph<float> g;
  const Var logits = OracleLogits<float>(g, m, nullptr, {&ex});
  return g.Value(g.Softmax(logits)).col(0);
}

Answer ArgmaxAnswer(const Vec<float>& probs) {
  if (probs.size() != kNumAnswers) {
    throw DimensionError("answer distribution needs 3 entries, got " +
                         std::to_string(probs.size()));
  }
  return static_cast<Answer>(ArgmaxFirst(probs));
}

Answer OracleAnswer(const OracleModel& m, const std::vector<int>& tokens,
                    int category_id, const SpatialVec& spatial) {
  return ArgmaxAnswer(OracleForward(m, tokens, category_id, spatial));
}

std::vector<OracleExample> OracleExamples(const std::vector<GameRecord>& games,
                                          const Vocab& vocab) {
  std::vector<OracleExample> out;
  for (const GameRecord& game : games) {
    const ObjectInfo& target = game.target();
    const SpatialVec spatial =
        EncodeSpatial(target.bbox, game.image.width, game.image.height);
    for (const QaPair& qa : game.qas) {
      std::vector<int> tokens = vocab.Encode(qa.question);
      if (tokens.empty()) continue;
      out.push_back({std::move(tokens), target.category_id, spatial, qa.answer});
    }
  }
  return out;
}

}  // namespace gwdm
