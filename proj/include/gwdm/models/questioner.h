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

#ifndef GWDM_MODELS_QUESTIONER_H_
#define GWDM_MODELS_QUESTIONER_H_

// The two halves of the questioner.
//
// QGen is a conditional language model over the dialogue. Its input at every
// step is [word embedding ; P * image features], and its hidden state after
// the history is the QGen dialogue representation.
//
// The Guesser encodes the same history with its own LSTM (no image) and
// scores each candidate by the dot product of its hidden state with an MLP
// embedding of [category embedding ; spatial vector].
//
// Dialogue histories are flat token lists: <sos>, then for each QA pair the
// question tokens followed by one answer token.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gwdm/core/graph.h"
#include "gwdm/core/layers.h"
#include "gwdm/core/random.h"
#include "gwdm/data/game.h"
#include "gwdm/data/spatial.h"
#include "gwdm/data/vocab.h"
#include "gwdm/models/dims.h"
#include "gwdm/models/sequence.h"

namespace gwdm {

template <typename T>
struct QGenModelT {
  QGenDims dims;
  Embedding<T> words;
  Mat<T> projection;  // [P x F], no bias
  Lstm<T> lstm;
  Dense<T> out;

  static QGenModelT Zeros(const QGenDims& d) {
    QGenModelT m;
    m.dims = d;
    m.words = Embedding<T>::Zeros(d.vocab_size, d.word_emb);
    m.projection = Mat<T>::Zero(d.projection, d.feature_dim);
    m.lstm = Lstm<T>::Zeros(d.word_emb + d.projection, d.hidden);
    m.out = Dense<T>::Zeros(d.hidden, d.vocab_size, Activation::kIdentity);
    return m;
  }

  static QGenModelT Random(const QGenDims& d, uint64_t seed) {
    QGenModelT m = Zeros(d);
    Rng rng(seed);
    m.words.Init(rng);
    GlorotFill(m.projection, rng);
    m.lstm.Init(rng);
    m.out.Init(rng);
    return m;
  }

  template <typename F>
  void VisitParams(const std::string& prefix, F&& fn) {
    words.VisitParams(prefix + ".words", fn);
    fn(prefix + ".projection", projection);
    lstm.VisitParams(prefix + ".lstm", fn);
    out.VisitParams(prefix + ".out", fn);
  }
};

template <typename T>
struct GuesserModelT {
  GuesserDims dims;
  Embedding<T> words;
  Lstm<T> lstm;
  Embedding<T> categories;
  Mlp<T> objects;  // [E_c + 8] -> mlp_hidden -> hidden

  static GuesserModelT Zeros(const GuesserDims& d) {
    GuesserModelT m;
    m.dims = d;
    m.words = Embedding<T>::Zeros(d.vocab_size, d.word_emb);
    m.lstm = Lstm<T>::Zeros(d.word_emb, d.hidden);
    m.categories = Embedding<T>::Zeros(d.n_categories, d.category_emb);
    m.objects = Mlp<T>::Zeros({d.category_emb + kSpatialDim, d.mlp_hidden, d.hidden},
                              Activation::kRelu);
    return m;
  }

  static GuesserModelT Random(const GuesserDims& d, uint64_t seed) {
    GuesserModelT m = Zeros(d);
    Rng rng(seed);
    m.words.Init(rng);
    m.lstm.Init(rng);
    m.categories.Init(rng);
    m.objects.Init(rng);
    return m;
  }

  template <typename F>
  void VisitParams(const std::string& prefix, F&& fn) {
    words.VisitParams(prefix + ".words", fn);
    lstm.VisitParams(prefix + ".lstm", fn);
    categories.VisitParams(prefix + ".categories", fn);
    objects.VisitParams(prefix + ".objects", fn);
  }
};

using QGenModel = QGenModelT<float>;
using GuesserModel = GuesserModelT<float>;

// Flattens QA pairs into history tokens (without the leading <sos>).
std::vector<int> HistoryTokens(const std::vector<QaPair>& qas, const Vocab& vocab);

// ---------------------------------------------------------------------------
// Training examples and batch losses.

struct QGenExample {
  std::vector<int> inputs;   // <sos> + history
  std::vector<int> targets;  // next-token target per input position, -1 = none
  const std::vector<float>* features = nullptr;
};

// Targets: inside a question the next question token, then <eos> after its
// last token; after <sos> or an answer token, the first token of the next
// question; nothing after the final answer.
QGenExample MakeQGenExample(const std::vector<std::vector<int>>& questions,
                            const std::vector<Answer>& answers,
                            const std::vector<float>* features);

template <typename T>
Var QGenProjectBatch(Graph<T>& g, Var projection,
                     const std::vector<const std::vector<float>*>& features, int feature_dim) {
  Mat<T> f(feature_dim, static_cast<Eigen::Index>(features.size()));
  for (size_t j = 0; j < features.size(); ++j) {
    if (static_cast<int>(features[j]->size()) != feature_dim) {
      throw DimensionError("image features have " + std::to_string(features[j]->size()) +
                           " entries, expected " + std::to_string(feature_dim));
    }
    for (int i = 0; i < feature_dim; ++i) f(i, j) = static_cast<T>((*features[j])[i]);
  }
  return g.MatMul(projection, g.Constant(std::move(f)));
}

template <typename T>
BatchLoss QGenBatchLoss(const QGenModelT<T>& m, QGenModelT<T>* grad,
                        const std::vector<const QGenExample*>& batch) {
  Graph<T> g;
  const Var words = m.words.Bind(g, grad ? &grad->words : nullptr);
  const Var proj_w = g.Param(m.projection, grad ? &grad->projection : nullptr);
  const auto lstm = m.lstm.Bind(g, grad ? &grad->lstm : nullptr);
  const auto out = m.out.Bind(g, grad ? &grad->out : nullptr);
  const int n = static_cast<int>(batch.size());
  std::vector<const std::vector<int>*> seqs;
  std::vector<const std::vector<float>*> feats;
  size_t max_len = 0;
  for (const QGenExample* ex : batch) {
    seqs.push_back(&ex->inputs);
    feats.push_back(ex->features);
    max_len = std::max(max_len, ex->inputs.size());
  }
  const Var proj = QGenProjectBatch(g, proj_w, feats, m.dims.feature_dim);
  const int h = m.lstm.hidden();
  const SequenceEncoding enc =
      EncodeTokens(g, lstm, words, seqs, proj, {g.Zeros(h, n), g.Zeros(h, n)}, true);
  BatchLoss result;
  Var total;
  for (size_t t = 0; t < max_len; ++t) {
    std::vector<int> targets(n, -1);
    int live = 0;
    for (int j = 0; j < n; ++j) {
      if (t < batch[j]->targets.size() && batch[j]->targets[t] >= 0) {
        targets[j] = batch[j]->targets[t];
        ++live;
      }
    }
    if (live == 0) continue;
    const Var logits = ApplyDense(g, out, enc.steps[t].h);
    const Var step = g.SoftmaxCrossEntropy(logits, targets, std::vector<T>(n, T(1)));
    total = total.valid() ? g.Add(total, step) : step;
    result.count += live;
  }
  if (!total.valid()) return result;
  result.sum = static_cast<double>(g.Value(total)(0, 0));
  if (grad != nullptr) g.Backward(g.Scale(total, T(1) / static_cast<T>(result.count)));
  return result;
}

struct GuesserExample {
  std::vector<int> inputs;  // <sos> + history
  std::vector<int> categories;
  std::vector<SpatialVec> spatial;
  int target = 0;  // index into the candidate list
};

GuesserExample MakeGuesserExample(const GameRecord& game, const Vocab& vocab);

// [H x K] candidate embeddings for K objects.
template <typename T>
Var GuesserObjects(Graph<T>& g, Var categories, const std::vector<typename Dense<T>::Vars>& mlp,
                   const std::vector<int>& category_ids,
                   const std::vector<const SpatialVec*>& spatial) {
  const Var cat = g.Lookup(categories, category_ids);
  const Var x = g.ConcatRows({cat, g.Constant(SpatialMatrix<T>(spatial))});
  return ApplyMlp(g, mlp, x);
}

template <typename T>
BatchLoss GuesserBatchLoss(const GuesserModelT<T>& m, GuesserModelT<T>* grad,
                           const std::vector<const GuesserExample*>& batch) {
  Graph<T> g;
  const Var words = m.words.Bind(g, grad ? &grad->words : nullptr);
  const auto lstm = m.lstm.Bind(g, grad ? &grad->lstm : nullptr);
  const Var cats = m.categories.Bind(g, grad ? &grad->categories : nullptr);
  const auto mlp = m.objects.Bind(g, grad ? &grad->objects : nullptr);
  const int n = static_cast<int>(batch.size());
  std::vector<const std::vector<int>*> seqs;
  std::vector<int> cat_ids, owner, offsets{0}, targets;
  std::vector<const SpatialVec*> spatial;
  for (int j = 0; j < n; ++j) {
    const GuesserExample* ex = batch[j];
    if (ex->categories.empty()) throw ArgumentError("guesser example has no candidates");
    seqs.push_back(&ex->inputs);
    for (size_t k = 0; k < ex->categories.size(); ++k) {
      cat_ids.push_back(ex->categories[k]);
      spatial.push_back(&ex->spatial[k]);
      owner.push_back(j);
    }
    offsets.push_back(static_cast<int>(owner.size()));
    targets.push_back(ex->target);
  }
  const int h = m.lstm.hidden();
  const SequenceEncoding enc =
      EncodeTokens(g, lstm, words, seqs, Var{}, {g.Zeros(h, n), g.Zeros(h, n)}, false);
  const Var objs = GuesserObjects(g, cats, mlp, cat_ids, spatial);
  const Var scores = g.ColumnDot(objs, enc.final.h, owner);
  const Var loss = g.SegmentCrossEntropy(scores, offsets, targets, std::vector<T>(n, T(1)));
  BatchLoss result{static_cast<double>(g.Value(loss)(0, 0)), n};
  if (grad != nullptr) g.Backward(g.Scale(loss, T(1) / static_cast<T>(n)));
  return result;
}

// ---------------------------------------------------------------------------
// Inference. All encoders step one token at a time through the same code path,
// so a cached state extended by new tokens equals a from-scratch encoding.

// P * features as a column.
Vec<float> QGenProjection(const QGenModel& m, const std::vector<float>& features);

LstmState ZeroState(int hidden);

// Feeds `tokens` into QGen starting from `state`.
LstmState QGenAdvance(const QGenModel& m, const Vec<float>& projection, LstmState state,
                      const std::vector<int>& tokens);
LstmState GuesserAdvance(const GuesserModel& m, LstmState state,
                         const std::vector<int>& tokens);

// State after <sos> + history.
LstmState QGenEncode(const QGenModel& m, const std::vector<int>& history,
                     const std::vector<float>& features);
LstmState GuesserEncode(const GuesserModel& m, const std::vector<int>& history);

enum class DecodeMode { kGreedy, kSample };

struct DecodeConfig {
  DecodeMode mode = DecodeMode::kGreedy;
  double temperature = 1.0;
  int max_len = 12;
  int fallback_id = kUnkId;  // emitted alone when decoding yields nothing
};

struct Generated {
  std::vector<int> tokens;  // without <eos>
  LstmState state;          // after consuming `tokens`
};

// Next-token distribution logits from a state, with forbidden tokens masked.
Vec<float> QGenNextLogits(const QGenModel& m, const LstmState& state);

// `rng` is required in sample mode.
Generated QGenGenerate(const QGenModel& m, const Vec<float>& projection,
                       const LstmState& state, const DecodeConfig& config, Rng* rng);

// Candidate probabilities from a Guesser hidden vector.
Vec<float> GuesserScore(const GuesserModel& m, const Vec<float>& gh,
                        const std::vector<ObjectInfo>& objects, const ImageInfo& image);

// Softmax over dot(gh, embeddings.col(k)).
Vec<float> GuesserScoreFromEmbeddings(const Vec<float>& gh, const Mat<float>& embeddings);

// Argmax of `probs`; exact ties go to the lowest object id.
int64_t PickObject(const Vec<float>& probs, const std::vector<ObjectInfo>& objects);

int64_t GuesserPick(const GuesserModel& m, const Vec<float>& gh,
                    const std::vector<ObjectInfo>& objects, const ImageInfo& image);

// Running dialogue with cached encoder states.
class DialogueState {
 public:
  DialogueState(const QGenModel& qgen, const GuesserModel& guesser,
                const std::vector<float>& features);

  // `qgen_after_question`, when given, is the QGen state after the question
  // tokens (as returned by QGenGenerate), which saves re-feeding them.
  void AppendQa(const std::vector<int>& question, Answer answer,
                const LstmState* qgen_after_question = nullptr);

  const std::vector<int>& tokens() const { return tokens_; }  // history, no <sos>
  int num_pairs() const { return num_pairs_; }
  const LstmState& qgen_state() const { return qgen_state_; }
  const LstmState& guesser_state() const { return guesser_state_; }
  const Vec<float>& projection() const { return projection_; }

 private:
  const QGenModel* qgen_;
  const GuesserModel* guesser_;
  Vec<float> projection_;
  std::vector<int> tokens_;
  int num_pairs_ = 0;
  LstmState qgen_state_;
  LstmState guesser_state_;
};

}  // namespace gwdm

#endif  // GWDM_MODELS_QUESTIONER_H_
