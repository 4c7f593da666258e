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

#ifndef GWDM_MODELS_DECIDER_H_
#define GWDM_MODELS_DECIDER_H_

// The ask-or-guess decision module: a two-class MLP over
// [image features ; encoder hidden state], consulted after every QA pair.
// DM1 reads the QGen state, DM2 the Guesser state.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gwdm/core/graph.h"
#include "gwdm/core/layers.h"
#include "gwdm/data/features.h"
#include "gwdm/data/game.h"
#include "gwdm/data/vocab.h"
#include "gwdm/models/dims.h"
#include "gwdm/models/questioner.h"
#include "gwdm/models/sequence.h"
#include "gwdm/train/loop.h"

namespace gwdm {

// kHybrid reads both states; it is available only when explicitly enabled.
enum class DmVariant { kDm1, kDm2, kHybrid };

std::string DmVariantName(DmVariant v);  // "dm1" / "dm2" / "hybrid"
DmVariant ParseDmVariant(const std::string& name);

enum class Decision { kAsk = 0, kGuess = 1 };
std::string DecisionString(Decision d);  // "ask" / "guess"

enum class LabelScheme { kGt, kGuess };
std::string LabelSchemeName(LabelScheme s);  // "gt" / "guess"
LabelScheme ParseLabelScheme(const std::string& name);

enum class ClassWeighting { kUniform, kInverseFrequency };
ClassWeighting ParseClassWeighting(const std::string& name);
std::string ClassWeightingName(ClassWeighting w);

template <typename T>
struct DmModelT {
  DmDims dims;
  Mlp<T> mlp;

  static DmModelT Zeros(const DmDims& d) {
    return {d, Mlp<T>::Zeros({d.feature_dim + d.state_dim, d.hidden, 2}, Activation::kRelu)};
  }

  static DmModelT Random(const DmDims& d, uint64_t seed) {
    DmModelT m = Zeros(d);
    Rng rng(seed);
    m.mlp.Init(rng);
    return m;
  }

  template <typename F>
  void VisitParams(const std::string& prefix, F&& fn) {
    mlp.VisitParams(prefix + ".mlp", fn);
  }
};

using DmModel = DmModelT<float>;

// (p_ask, p_guess).
Vec<float> DmForward(const DmModel& m, const std::vector<float>& features,
                     const Vec<float>& hidden);

// Argmax; an exact tie asks.
Decision DmDecide(float p_ask, float p_guess);

// Per-prefix labels; index t-1 holds the label after t QA pairs.
using LabelSeq = std::vector<Decision>;

// Games eligible for labelling: not incomplete, at least one QA pair.
bool LabelEligible(const GameRecord& game);

// Ask wherever a follow-up pair exists, Guess at the last pair.
LabelSeq MakeGtLabels(const GameRecord& game);

// Guess wherever `pick(t)` (the object picked after t pairs) is the target.
LabelSeq MakeGuessLabelsWith(const GameRecord& game,
                             const std::function<int64_t(int t)>& pick);

LabelSeq MakeGuessLabels(const GameRecord& game, const GuesserModel& guesser,
                         const Vocab& vocab);

struct LabelRow {
  int64_t game_id = 0;
  int t = 0;
  Decision label = Decision::kAsk;
};

// "game_id,t,label" with a header line.
std::string LabelsCsv(const std::vector<LabelRow>& rows);

struct DmExample {
  std::vector<float> input;  // [features ; hidden]
  int label = 0;
  float weight = 1;
};

template <typename T>
BatchLoss DmBatchLoss(const DmModelT<T>& m, DmModelT<T>* grad,
                      const std::vector<const DmExample*>& batch) {
  Graph<T> g;
  const int width = m.dims.feature_dim + m.dims.state_dim;
  Mat<T> x(width, static_cast<Eigen::Index>(batch.size()));
  std::vector<int> targets;
  std::vector<T> weights;
  for (size_t j = 0; j < batch.size(); ++j) {
    if (static_cast<int>(batch[j]->input.size()) != width) {
      throw DimensionError("decision input has " + std::to_string(batch[j]->input.size()) +
                           " entries, expected " + std::to_string(width));
    }
    for (int i = 0; i < width; ++i) x(i, j) = static_cast<T>(batch[j]->input[i]);
    targets.push_back(batch[j]->label);
    weights.push_back(static_cast<T>(batch[j]->weight));
  }
  const Var logits = ApplyMlp(g, m.mlp.Bind(g, grad ? &grad->mlp : nullptr), g.Constant(x));
  const Var loss = g.SoftmaxCrossEntropy(logits, targets, weights);
  const int n = static_cast<int>(batch.size());
  BatchLoss out{static_cast<double>(g.Value(loss)(0, 0)), n};
  if (grad != nullptr) g.Backward(g.Scale(loss, T(1) / static_cast<T>(n)));
  return out;
}

// Sets example weights: 1 for uniform, n / (2 n_c) for inverse frequency.
// Throws ArgumentError if the set holds a single class.
void ApplyClassWeights(std::vector<DmExample>* examples, ClassWeighting weighting);

// Trains on labelled states. Refuses single-class training sets.
LoopResult<DmModel> DmTrain(const DmModel& init, std::vector<DmExample> train,
                            std::vector<DmExample> val, ClassWeighting weighting,
                            const LoopConfig& config,
                            const std::function<void(const EpochLog&)>& on_epoch = {});

struct DmSources {
  const QGenModel* qgen = nullptr;
  const GuesserModel* guesser = nullptr;
  const FeatureTable* features = nullptr;
  const Vocab* vocab = nullptr;
};

// Encoder state width consumed by a variant.
int DmStateDim(DmVariant variant, const DmSources& src);

// The decision input for a dialogue state.
std::vector<float> DmInput(DmVariant variant, const std::vector<float>& features,
                           const Vec<float>& qgen_h, const Vec<float>& guesser_h);

// One example per prefix of every eligible game, with states from the frozen
// encoders and labels from `scheme`. DM1 combined with guess labels is a
// ConfigError. `rows`, when given, receives the labels for audit.
std::vector<DmExample> BuildDmExamples(const std::vector<GameRecord>& games, DmVariant variant,
                                       LabelScheme scheme, const DmSources& src,
                                       std::vector<LabelRow>* rows = nullptr,
                                       int64_t* skipped = nullptr);

}  // namespace gwdm

#endif  // GWDM_MODELS_DECIDER_H_
