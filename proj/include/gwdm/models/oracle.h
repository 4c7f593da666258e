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

#ifndef GWDM_MODELS_ORACLE_H_
#define GWDM_MODELS_ORACLE_H_

// The answerer. Encodes the question with an LSTM and classifies
// [question encoding ; target category embedding ; target spatial vector]
// into Yes / No / N/A with an MLP. It never sees the other candidates or the
// image.

#include <cstdint>
#include <string>
#include <vector>

#include "gwdm/core/graph.h"
#include "gwdm/core/layers.h"
#include "gwdm/data/game.h"
#include "gwdm/data/spatial.h"
#include "gwdm/data/vocab.h"
#include "gwdm/models/dims.h"
#include "gwdm/models/sequence.h"

namespace gwdm {

template <typename T>
struct OracleModelT {
  OracleDims dims;
  Embedding<T> words;
  Lstm<T> lstm;
  Embedding<T> categories;
  Mlp<T> head;

  static OracleModelT Zeros(const OracleDims& d) {
    OracleModelT m;
    m.dims = d;
    m.words = Embedding<T>::Zeros(d.vocab_size, d.word_emb);
    m.lstm = Lstm<T>::Zeros(d.word_emb, d.hidden);
    m.categories = Embedding<T>::Zeros(d.n_categories, d.category_emb);
    m.head = Mlp<T>::Zeros({d.hidden + d.category_emb + kSpatialDim, d.mlp_hidden, kNumAnswers},
                           Activation::kRelu);
    return m;
  }

  static OracleModelT Random(const OracleDims& d, uint64_t seed) {
    OracleModelT m = Zeros(d);
    Rng rng(seed);
    m.words.Init(rng);
    m.lstm.Init(rng);
    m.categories.Init(rng);
    m.head.Init(rng);
    return m;
  }

  template <typename F>
  void VisitParams(const std::string& prefix, F&& fn) {
    words.VisitParams(prefix + ".words", fn);
    lstm.VisitParams(prefix + ".lstm", fn);
    categories.VisitParams(prefix + ".categories", fn);
    head.VisitParams(prefix + ".head", fn);
  }
};

using OracleModel = OracleModelT<float>;

struct OracleExample {
  std::vector<int> tokens;
  int category_id = 0;
  SpatialVec spatial{};
  Answer answer = Answer::kYes;
};

// Logits [3 x n] for a batch of examples.
template <typename T>
Var OracleLogits(Graph<T>& g, const OracleModelT<T>& m, OracleModelT<T>* grad,
                 const std::vector<const OracleExample*>& batch) {
  const auto words = m.words.Bind(g, grad ? &grad->words : nullptr);
  const auto lstm = m.lstm.Bind(g, grad ? &grad->lstm : nullptr);
  const auto cats = m.categories.Bind(g, grad ? &grad->categories : nullptr);
  const auto head = m.head.Bind(g, grad ? &grad->head : nullptr);
  const int n = static_cast<int>(batch.size());
  std::vector<const std::vector<int>*> seqs;
  std::vector<int> cat_ids;
  std::vector<const SpatialVec*> spatial;
  for (const OracleExample* ex : batch) {
    if (ex->tokens.empty()) throw ArgumentError("oracle question has no tokens");
    seqs.push_back(&ex->tokens);
    cat_ids.push_back(ex->category_id);
    spatial.push_back(&ex->spatial);
  }
  const int h = m.lstm.hidden();
  const SequenceEncoding enc =
      EncodeTokens(g, lstm, words, seqs, Var{}, {g.Zeros(h, n), g.Zeros(h, n)}, false);
  const Var cat = g.Lookup(cats, cat_ids);
  const Var x = g.ConcatRows({enc.final.h, cat, g.Constant(SpatialMatrix<T>(spatial))});
  return ApplyMlp(g, head, x);
}

template <typename T>
BatchLoss OracleBatchLoss(const OracleModelT<T>& m, OracleModelT<T>* grad,
                          const std::vector<const OracleExample*>& batch) {
  Graph<T> g;
  const Var logits = OracleLogits(g, m, grad, batch);
  std::vector<int> targets;
  for (const OracleExample* ex : batch) targets.push_back(static_cast<int>(ex->answer));
  const Var loss =
      g.SoftmaxCrossEntropy(logits, targets, std::vector<T>(batch.size(), T(1)));
  BatchLoss out{static_cast<double>(g.Value(loss)(0, 0)), static_cast<int>(batch.size())};
  if (grad != nullptr) g.Backward(g.Scale(loss, T(1) / static_cast<T>(batch.size())));
  return out;
}

// Probabilities over (Yes, No, N/A).
Vec<float> OracleForward(const OracleModel& m, const std::vector<int>& tokens,
                         int category_id, const SpatialVec& spatial);

// Argmax with ties resolved in the order Yes, No, N/A.
Answer ArgmaxAnswer(const Vec<float>& probs);

Answer OracleAnswer(const OracleModel& m, const std::vector<int>& tokens,
                    int category_id, const SpatialVec& spatial);

// One example per QA pair, asked about the game's target.
std::vector<OracleExample> OracleExamples(const std::vector<GameRecord>& games,
                                          const Vocab& vocab);

}  // namespace gwdm

#endif  // GWDM_MODELS_ORACLE_H_
