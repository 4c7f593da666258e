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

#include "gwdm/models/decider.h"

#include <array>
#include <sstream>

namespace gwdm {

std::string DmVariantName(DmVariant v) {
  switch (v) {
    case DmVariant::kDm1: return "dm1";
    case DmVariant::kDm2: return "dm2";
    case DmVariant::kHybrid: return "hybrid";
  }
  return "?";
}

DmVariant ParseDmVariant(const std::string& name) {
  if (name == "dm1") return DmVariant::kDm1;
  if (name == "dm2") return DmVariant::kDm2;
  if (name == "hybrid") return DmVariant::kHybrid;
  throw ArgumentError("unknown decision variant '" + name + "'");
}

std::string DecisionString(Decision d) { return d == Decision::kAsk ? "ask" : "guess"; }

std::string LabelSchemeName(LabelScheme s) { return s == LabelScheme::kGt ? "gt" : "guess"; }

LabelScheme ParseLabelScheme(const std::string& name) {
  if (name == "gt") return LabelScheme::kGt;
  if (name == "guess") return LabelScheme::kGuess;
  throw ConfigError("unknown label scheme '" + name + "' (expected gt or guess)");
}

ClassWeighting ParseClassWeighting(const std::string& name) {
  if (name == "uniform") return ClassWeighting::kUniform;
  if (name == "inverse") return ClassWeighting::kInverseFrequency;
  throw ConfigError("unknown class weighting '" + name + "' (expected uniform or inverse)");
}

std::string ClassWeightingName(ClassWeighting w) {
  return w == ClassWeighting::kUniform ? "uniform" : "inverse";
}

Vec<float> DmForward(const DmModel& m, const std::vector<float>& features,
                     const Vec<float>& hidden) {
  const int want_f = m.dims.feature_dim;
  const int want_h = m.dims.state_dim;
  if (static_cast<int>(features.size()) != want_f || hidden.size() != want_h) {
    throw DimensionError("decision module expects features " + std::to_string(want_f) +
                         " and state " + std::to_string(want_h) + ", got " +
                         std::to_string(features.size()) + " and " +
                         std::to_string(hidden.size()));
  }
  Vec<float> x(want_f + want_h);
  for (int i = 0; i < want_f; ++i) x(i) = features[i];
  x.tail(want_h) = hidden;
  Graph<float> g;
  const Var logits = ApplyMlp(g, m.mlp.Bind(g, nullptr), g.Constant(x));
  return g.Value(g.Softmax(logits)).col(0);
}

Decision DmDecide(float p_ask, float p_guess) {
  return p_guess > p_ask ? Decision::kGuess : Decision::kAsk;
}

bool LabelEligible(const GameRecord& game) {
  return game.status != GameStatus::kIncomplete && !game.qas.empty();
}

LabelSeq MakeGtLabels(const GameRecord& game) {
  LabelSeq out(game.qas.size(), Decision::kAsk);
  if (!out.empty()) out.back() = Decision::kGuess;
  return out;
}

LabelSeq MakeGuessLabelsWith(const GameRecord& game,
                             const std::function<int64_t(int t)>& pick) {
  LabelSeq out;
  for (size_t t = 1; t <= game.qas.size(); ++t) {
    out.push_back(pick(static_cast<int>(t)) == game.target_id ? Decision::kGuess
                                                               : Decision::kAsk);
  }
  return out;
}

namespace {

// Guesser states after each of the game's QA pairs.
std::vector<LstmState> GuesserPrefixStates(const GuesserModel& guesser, const GameRecord& game,
                                           const Vocab& vocab) {
  std::vector<LstmState> out;
  LstmState s = GuesserAdvance(guesser, ZeroState(guesser.lstm.hidden()), {kSosId});
  for (const QaPair& qa : game.qas) {
    s = GuesserAdvance(guesser, std::move(s), HistoryTokens({qa}, vocab));
    out.push_back(s);
  }
  return out;
}

std::vector<LstmState> QGenPrefixStates(const QGenModel& qgen, const GameRecord& game,
                                        const std::vector<float>& features, const Vocab& vocab) {
  std::vector<LstmState> out;
  const Vec<float> proj = QGenProjection(qgen, features);
  LstmState s = QGenAdvance(qgen, proj, ZeroState(qgen.lstm.hidden()), {kSosId});
  for (const QaPair& qa : game.qas) {
    s = QGenAdvance(qgen, proj, std::move(s), HistoryTokens({qa}, vocab));
    out.push_back(s);
  }
  return out;
}

}  // namespace

LabelSeq MakeGuessLabels(const GameRecord& game, const GuesserModel& guesser,
                         const Vocab& vocab) {
  const std::vector<LstmState> states = GuesserPrefixStates(guesser, game, vocab);
  return MakeGuessLabelsWith(game, [&](int t) {
    return GuesserPick(guesser, states[t - 1].h.col(0), game.objects, game.image);
  });
}

std::string LabelsCsv(const std::vector<LabelRow>& rows) {
  std::ostringstream out;
  out << "game_id,t,label\n";
  for (const LabelRow& r : rows) {
    out << r.game_id << ',' << r.t << ',' << DecisionString(r.label) << '\n';
  }
  return out.str();
}

void ApplyClassWeights(std::vector<DmExample>* examples, ClassWeighting weighting) {
  std::array<int64_t, 2> counts{};
  for (const DmExample& ex : *examples) ++counts.at(ex.label);
  if (counts[0] == 0 || counts[1] == 0) {
    throw ArgumentError("decision training set holds a single class (ask=" +
                        std::to_string(counts[0]) + ", guess=" + std::to_string(counts[1]) +
                        ")");
  }
  const double n = static_cast<double>(examples->size());
  for (DmExample& ex : *examples) {
    ex.weight = weighting == ClassWeighting::kUniform
                    ? 1.0f
                    : static_cast<float>(n / (2.0 * counts[ex.label]));
  }
}

LoopResult<DmModel> DmTrain(const DmModel& init, std::vector<DmExample> train,
                            std::vector<DmExample> val, ClassWeighting weighting,
                            const LoopConfig& config,
                            const std::function<void(const EpochLog&)>& on_epoch) {
  ApplyClassWeights(&train, weighting);
  // Unweighted validation.
  for (DmExample& ex : val) ex.weight = 1.0f;
  return TrainLoop<float>(
      init, train, val,
      [](const DmModel& m, DmModel* g, const std::vector<const DmExample*>& b) {
        return DmBatchLoss(m, g, b);
      },
      config, on_epoch);
}

int DmStateDim(DmVariant variant, const DmSources& src) {
  switch (variant) {
    case DmVariant::kDm1:
      if (src.qgen == nullptr) throw DependencyError("dm1 needs a trained qgen");
      return src.qgen->lstm.hidden();
    case DmVariant::kDm2:
      if (src.guesser == nullptr) throw DependencyError("dm2 needs a trained guesser");
      return src.guesser->lstm.hidden();
    case DmVariant::kHybrid:
      if (src.qgen == nullptr || src.guesser == nullptr) {
        throw DependencyError("hybrid decision module needs qgen and guesser");
      }
      return src.qgen->lstm.hidden() + src.guesser->lstm.hidden();
  }
  return 0;
}

std::vector<float> DmInput(DmVariant variant, const std::vector<float>& features,
                           const Vec<float>& qgen_h, const Vec<float>& guesser_h) {
  std::vector<float> x = features;
  auto append = [&](const Vec<float>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) x.push_back(v(i));
  };
  if (variant != DmVariant::kDm2) append(qgen_h);
  if (variant != DmVariant::kDm1) append(guesser_h);
  return x;
}

std::vector<DmExample> BuildDmExamples(const std::vector<GameRecord>& games, DmVariant variant,
                                       LabelScheme scheme, const DmSources& src,
                                       std::vector<LabelRow>* rows, int64_t* skipped) {
  if (variant == DmVariant::kDm1 && scheme == LabelScheme::kGuess) {
    throw ConfigError("dm1 can only be trained with gt labels");
  }
  if (src.features == nullptr || src.vocab == nullptr) {
    throw DependencyError("decision examples need features and a vocabulary");
  }
  const bool need_qgen = variant != DmVariant::kDm2;
  const bool need_guesser = variant != DmVariant::kDm1 || scheme == LabelScheme::kGuess;
  if (need_qgen && src.qgen == nullptr) throw DependencyError("missing trained qgen");
  if (need_guesser && src.guesser == nullptr) throw DependencyError("missing trained guesser");

  std::vector<DmExample> out;
  int64_t n_skipped = 0;
  const Vec<float> empty;
  for (const GameRecord& game : games) {
    if (!LabelEligible(game)) {
      ++n_skipped;
      continue;
    }
    const std::vector<float>& features = src.features->Lookup(game.image.id);
    std::vector<LstmState> q_states, g_states;
    if (need_qgen) q_states = QGenPrefixStates(*src.qgen, game, features, *src.vocab);
    if (need_guesser) g_states = GuesserPrefixStates(*src.guesser, game, *src.vocab);
    LabelSeq labels;
    if (scheme == LabelScheme::kGt) {
      labels = MakeGtLabels(game);
    } else {
      labels = MakeGuessLabelsWith(game, [&](int t) {
        return GuesserPick(*src.guesser, g_states[t - 1].h.col(0), game.objects, game.image);
      });
    }
    for (size_t t = 0; t < labels.size(); ++t) {
      DmExample ex;
      ex.input = DmInput(variant, features, need_qgen ? Vec<float>(q_states[t].h.col(0)) : empty,
                         need_guesser ? Vec<float>(g_states[t].h.col(0)) : empty);
      ex.label = static_cast<int>(labels[t]);
      out.push_back(std::move(ex));
      if (rows != nullptr) rows->push_back({game.game_id, static_cast<int>(t + 1), labels[t]});
    }
  }
  if (skipped != nullptr) *skipped = n_skipped;
  return out;
}

}  // namespace gwdm
