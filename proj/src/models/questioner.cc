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

#include "gwdm/models/questioner.h"

#include <cmath>
#include <limits>

namespace gwdm {

std::vector<int> HistoryTokens(const std::vector<QaPair>& qas, const Vocab& vocab) {
  std::vector<int> out;
  for (const QaPair& qa : qas) {
    for (int id : vocab.Encode(qa.question)) out.push_back(id);
    out.push_back(AnswerTokenId(qa.answer));
  }
  return out;
}

QGenExample MakeQGenExample(const std::vector<std::vector<int>>& questions,
                            const std::vector<Answer>& answers,
                            const std::vector<float>* features) {
  if (questions.size() != answers.size()) {
    throw DimensionError("one answer per question required");
  }
  QGenExample ex;
  ex.features = features;
  ex.inputs.push_back(kSosId);
  ex.targets.push_back(-1);
  for (size_t q = 0; q < questions.size(); ++q) {
    const std::vector<int>& tokens = questions[q];
    if (!tokens.empty()) ex.targets.back() = tokens.front();
    for (size_t i = 0; i < tokens.size(); ++i) {
      ex.inputs.push_back(tokens[i]);
      ex.targets.push_back(i + 1 < tokens.size() ? tokens[i + 1] : kEosId);
    }
    ex.inputs.push_back(AnswerTokenId(answers[q]));
    ex.targets.push_back(-1);
  }
  return ex;
}

GuesserExample MakeGuesserExample(const GameRecord& game, const Vocab& vocab) {
  GuesserExample ex;
  ex.inputs.push_back(kSosId);
  for (int id : HistoryTokens(game.qas, vocab)) ex.inputs.push_back(id);
  for (const ObjectInfo& o : game.objects) {
    ex.categories.push_back(o.category_id);
    ex.spatial.push_back(EncodeSpatial(o.bbox, game.image.width, game.image.height));
  }
  ex.target = game.target_index();
  return ex;
}

Vec<float> QGenProjection(const QGenModel& m, const std::vector<float>& features) {
  if (static_cast<int>(features.size()) != m.projection.cols()) {
    throw DimensionError("image features have " + std::to_string(features.size()) +
                         " entries, expected " + std::to_string(m.projection.cols()));
  }
  Graph<float> g;
  const Var proj = QGenProjectBatch(g, g.Param(m.projection, nullptr), {&features},
                                    static_cast<int>(features.size()));
  return g.Value(proj).col(0);
}

LstmState ZeroState(int hidden) {
  return {Mat<float>::Zero(hidden, 1), Mat<float>::Zero(hidden, 1)};
}

LstmState QGenAdvance(const QGenModel& m, const Vec<float>& projection, LstmState state,
                      const std::vector<int>& tokens) {
  for (int id : tokens) {
    Graph<float> g;
    const Var words = m.words.Bind(g, nullptr);
    const auto lstm = m.lstm.Bind(g, nullptr);
    const Var x = g.ConcatRows({g.Lookup(words, {id}), g.Constant(projection)});
    const LstmVarsState next =
        ApplyLstm(g, lstm, x, {g.Constant(std::move(state.h)), g.Constant(std::move(state.c))});
    state = {g.Value(next.h), g.Value(next.c)};
  }
  return state;
}

LstmState GuesserAdvance(const GuesserModel& m, LstmState state,
                         const std::vector<int>& tokens) {
  for (int id : tokens) {
    Graph<float> g;
    const Var words = m.words.Bind(g, nullptr);
    const auto lstm = m.lstm.Bind(g, nullptr);
    const LstmVarsState next =
        ApplyLstm(g, lstm, g.Lookup(words, {id}),
                  {g.Constant(std::move(state.h)), g.Constant(std::move(state.c))});
    state = {g.Value(next.h), g.Value(next.c)};
  }
  return state;
}

LstmState QGenEncode(const QGenModel& m, const std::vector<int>& history,
                     const std::vector<float>& features) {
  const Vec<float> proj = QGenProjection(m, features);
  LstmState s = QGenAdvance(m, proj, ZeroState(m.lstm.hidden()), {kSosId});
  return QGenAdvance(m, proj, std::move(s), history);
}

LstmState GuesserEncode(const GuesserModel& m, const std::vector<int>& history) {
  LstmState s = GuesserAdvance(m, ZeroState(m.lstm.hidden()), {kSosId});
  return GuesserAdvance(m, std::move(s), history);
}

Vec<float> QGenNextLogits(const QGenModel& m, const LstmState& state) {
  Vec<float> logits = m.out.w * state.h.col(0) + m.out.b.col(0);
  const float masked = -std::numeric_limits<float>::infinity();
  for (int id : {kPadId, kSosId, kYesId, kNoId, kNaId}) {
    if (id < logits.size()) logits(id) = masked;
  }
  return logits;
}

namespace {

int SampleToken(const Vec<float>& logits, double temperature, Rng& rng) {
  if (!(temperature > 0)) throw ArgumentError("sampling temperature must be positive");
  const float mx = logits.maxCoeff();
  std::vector<double> w(logits.size());
  double total = 0;
  for (int i = 0; i < logits.size(); ++i) {
    w[i] = std::isfinite(logits(i)) ? std::exp((logits(i) - mx) / temperature) : 0.0;
    total += w[i];
  }
  double u = rng.Uniform() * total;
  int last = 0;
  for (int i = 0; i < logits.size(); ++i) {
    if (w[i] <= 0) continue;
    last = i;
    if (u < w[i]) return i;
    u -= w[i];
  }
  return last;
}

}  // namespace

Generated QGenGenerate(const QGenModel& m, const Vec<float>& projection,
                       const LstmState& state, const DecodeConfig& config, Rng* rng) {
  if (config.mode == DecodeMode::kSample && rng == nullptr) {
    throw ArgumentError("sample decoding needs a random generator");
  }
  Generated out{{}, state};
  for (int step = 0; step < config.max_len; ++step) {
    const Vec<float> logits = QGenNextLogits(m, out.state);
    const int id = config.mode == DecodeMode::kGreedy
                       ? ArgmaxFirst(logits)
                       : SampleToken(logits, config.temperature, *rng);
    if (id == kEosId) break;
    out.tokens.push_back(id);
    out.state = QGenAdvance(m, projection, std::move(out.state), {id});
  }
  if (out.tokens.empty()) {
    out.tokens.push_back(config.fallback_id);
    out.state = QGenAdvance(m, projection, std::move(out.state), out.tokens);
  }
  return out;
}

Vec<float> GuesserScoreFromEmbeddings(const Vec<float>& gh, const Mat<float>& embeddings) {
  if (embeddings.cols() == 0) throw ArgumentError("guesser needs at least one candidate");
  if (embeddings.rows() != gh.size()) {
    throw DimensionError("object embeddings have " + std::to_string(embeddings.rows()) +
                         " rows, dialogue state has " + std::to_string(gh.size()));
  }
  const Vec<float> scores = embeddings.transpose() * gh;
  return Graph<float>::SoftmaxColumn(scores);
}

Vec<float> GuesserScore(const GuesserModel& m, const Vec<float>& gh,
                        const std::vector<ObjectInfo>& objects, const ImageInfo& image) {
  if (objects.empty()) throw ArgumentError("guesser needs at least one candidate");
  if (static_cast<int>(objects.size()) > kMaxObjects) {
    throw ArgumentError("guesser accepts at most 20 candidates");
  }
  Graph<float> g;
  std::vector<int> cat_ids;
  std::vector<SpatialVec> spatial;
  for (const ObjectInfo& o : objects) {
    cat_ids.push_back(o.category_id);
    spatial.push_back(EncodeSpatial(o.bbox, image.width, image.height));
  }
  std::vector<const SpatialVec*> ptrs;
  for (const SpatialVec& s : spatial) ptrs.push_back(&s);
  const Var objs = GuesserObjects(g, m.categories.Bind(g, nullptr), m.objects.Bind(g, nullptr),
                                  cat_ids, ptrs);
  return GuesserScoreFromEmbeddings(gh, g.Value(objs));
}

int64_t PickObject(const Vec<float>& probs, const std::vector<ObjectInfo>& objects) {
  if (objects.empty() || probs.size() != static_cast<Eigen::Index>(objects.size())) {
    throw ArgumentError("one probability per candidate required");
  }
  int best = 0;
  for (int k = 1; k < probs.size(); ++k) {
    if (probs(k) > probs(best) || (probs(k) == probs(best) && objects[k].id < objects[best].id)) {
      best = k;
    }
  }
  return objects[best].id;
}

int64_t GuesserPick(const GuesserModel& m, const Vec<float>& gh,
                    const std::vector<ObjectInfo>& objects, const ImageInfo& image) {
  return PickObject(GuesserScore(m, gh, objects, image), objects);
}

DialogueState::DialogueState(const QGenModel& qgen, const GuesserModel& guesser,
                             const std::vector<float>& features)
    : qgen_(&qgen),
      guesser_(&guesser),
      projection_(QGenProjection(qgen, features)),
      qgen_state_(QGenAdvance(qgen, projection_, ZeroState(qgen.lstm.hidden()), {kSosId})),
      guesser_state_(GuesserAdvance(guesser, ZeroState(guesser.lstm.hidden()), {kSosId})) {}

void DialogueState::AppendQa(const std::vector<int>& question, Answer answer,
                             const LstmState* qgen_after_question) {
  const int answer_id = AnswerTokenId(answer);
  if (qgen_after_question != nullptr) {
    qgen_state_ = QGenAdvance(*qgen_, projection_, *qgen_after_question, {answer_id});
  } else {
    std::vector<int> pair = question;
    pair.push_back(answer_id);
    qgen_state_ = QGenAdvance(*qgen_, projection_, std::move(qgen_state_), pair);
  }
  std::vector<int> pair = question;
  pair.push_back(answer_id);
  guesser_state_ = GuesserAdvance(*guesser_, std::move(guesser_state_), pair);
  tokens_.insert(tokens_.end(), pair.begin(), pair.end());
  ++num_pairs_;
}

}  // namespace gwdm
