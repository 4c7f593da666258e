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

#include "gwdm/train/trainer.h"

#include <algorithm>
#include <cstdio>

#include "gwdm/core/random.h"
#include "gwdm/data/line_reader.h"

namespace gwdm {
namespace {

bool Usable(const GameRecord& g) { return g.status != GameStatus::kIncomplete; }
bool Succeeded(const GameRecord& g) { return g.status == GameStatus::kSuccess; }

std::vector<GameRecord> Select(const std::vector<GameRecord>& games,
                               bool (*keep)(const GameRecord&)) {
  std::vector<GameRecord> out;
  for (const GameRecord& g : games) {
    if (keep(g)) out.push_back(g);
  }
  return out;
}

std::vector<QGenExample> QGenExamples(const std::vector<GameRecord>& games, const Vocab& vocab,
                                      const FeatureTable& features) {
  std::vector<QGenExample> out;
  for (const GameRecord& g : games) {
    std::vector<std::vector<int>> questions;
    std::vector<Answer> answers;
    for (const QaPair& qa : g.qas) {
      questions.push_back(vocab.Encode(qa.question));
      answers.push_back(qa.answer);
    }
    out.push_back(MakeQGenExample(questions, answers, &features.Lookup(g.image.id)));
  }
  return out;
}

std::vector<GuesserExample> GuesserExamples(const std::vector<GameRecord>& games,
                                            const Vocab& vocab) {
  std::vector<GuesserExample> out;
  for (const GameRecord& g : games) out.push_back(MakeGuesserExample(g, vocab));
  return out;
}

uint64_t ModuleSeed(uint64_t seed, ModuleId id, uint64_t purpose) {
  return DeriveSeed(seed, 16 * (static_cast<uint64_t>(id) + 1) + purpose);
}

template <typename M>
void Fill(TrainOutcome* out, const LoopResult<M>& r) {
  out->log = r.log;
  out->best_epoch = r.best_epoch;
  out->best_val = r.best_val;
}

DmVariant VariantOf(ModuleId id) {
  switch (id) {
    case ModuleId::kDm1: return DmVariant::kDm1;
    case ModuleId::kDm2: return DmVariant::kDm2;
    case ModuleId::kHybrid: return DmVariant::kHybrid;
    default: throw ArgumentError(ModuleName(id) + " is not a decision module");
  }
}

}  // namespace

std::string ModuleName(ModuleId id) {
  switch (id) {
    case ModuleId::kOracle: return "oracle";
    case ModuleId::kGuesser: return "guesser";
    case ModuleId::kQGen: return "qgen";
    case ModuleId::kDm1: return "dm1";
    case ModuleId::kDm2: return "dm2";
    case ModuleId::kHybrid: return "hybrid";
  }
  return "";
}

ModuleId ParseModule(const std::string& name) {
  for (ModuleId id : {ModuleId::kOracle, ModuleId::kGuesser, ModuleId::kQGen, ModuleId::kDm1,
                      ModuleId::kDm2, ModuleId::kHybrid}) {
    if (ModuleName(id) == name) return id;
  }
  throw ArgumentError("unknown module '" + name + "'");
}

std::vector<ModuleId> TrainOrder(bool include_hybrid) {
  std::vector<ModuleId> order = {ModuleId::kOracle, ModuleId::kGuesser, ModuleId::kQGen,
                                 ModuleId::kDm1, ModuleId::kDm2};
  if (include_hybrid) order.push_back(ModuleId::kHybrid);
  return order;
}

DataSplits SplitGames(const std::vector<GameRecord>& games) {
  const size_t held = games.size() / 12;
  const size_t n_train = games.size() - 2 * held;
  DataSplits s;
  s.train.assign(games.begin(), games.begin() + n_train);
  s.val.assign(games.begin() + n_train, games.begin() + n_train + held);
  s.test.assign(games.begin() + n_train + held, games.end());
  return s;
}

int CategoryTableSize(const std::vector<GameRecord>& games) {
  int max_id = 0;
  for (const GameRecord& g : games) {
    for (const ObjectInfo& o : g.objects) max_id = std::max(max_id, o.category_id);
  }
  return max_id + 1;
}

TrainData PrepareTrainData(const std::vector<GameRecord>& games, FeatureTable features,
                           int min_word_freq) {
  TrainData d;
  d.splits = SplitGames(games);
  d.features = std::move(features);
  d.vocab = Vocab::Build(Select(d.splits.train, Usable), min_word_freq);
  d.n_categories = CategoryTableSize(games);
  return d;
}

OracleDims OracleDimsFor(const RunConfig& cfg, int vocab_size, int n_categories) {
  return {vocab_size,
          cfg.Int("oracle_word_emb"),
          cfg.Int("oracle_hidden"),
          n_categories,
          cfg.Int("oracle_category_emb"),
          cfg.Int("oracle_mlp_hidden")};
}

GuesserDims GuesserDimsFor(const RunConfig& cfg, int vocab_size, int n_categories) {
  return {vocab_size,
          cfg.Int("guesser_word_emb"),
          cfg.Int("guesser_hidden"),
          n_categories,
          cfg.Int("guesser_category_emb"),
          cfg.Int("guesser_mlp_hidden")};
}

QGenDims QGenDimsFor(const RunConfig& cfg, int vocab_size, int feature_dim) {
  return {vocab_size, cfg.Int("qgen_word_emb"), feature_dim, cfg.Int("qgen_projection"),
          cfg.Int("qgen_hidden")};
}

const DmModel* ModelSet::Dm(DmVariant v) const {
  const std::optional<DmModel>& slot =
      v == DmVariant::kDm1 ? dm1 : (v == DmVariant::kDm2 ? dm2 : hybrid);
  return slot ? &*slot : nullptr;
}

TrainOutcome TrainModule(ModuleId id, const TrainData& data, const ModelSet& upstream,
                         const RunConfig& cfg,
                         const std::function<void(const EpochLog&)>& on_epoch) {
  const uint64_t seed = cfg.Seed();
  const LoopConfig loop = cfg.Loop(ModuleSeed(seed, id, 1));
  const uint64_t init_seed = ModuleSeed(seed, id, 0);
  const std::string profile = cfg.Str("profile");
  const std::string vocab_hash = data.vocab.HashHex();
  const int vocab_size = data.vocab.size();
  const std::string name = ModuleName(id);
  TrainOutcome out;

  switch (id) {
    case ModuleId::kOracle: {
      const auto train = OracleExamples(Select(data.splits.train, Usable), data.vocab);
      const auto val = OracleExamples(Select(data.splits.val, Usable), data.vocab);
      const OracleDims dims = OracleDimsFor(cfg, vocab_size, data.n_categories);
      auto r = TrainLoop<float>(
          OracleModel::Random(dims, init_seed), train, val,
          [](const OracleModel& m, OracleModel* g, const std::vector<const OracleExample*>& b) {
            return OracleBatchLoss(m, g, b);
          },
          loop, on_epoch);
      Fill(&out, r);
      out.n_train = static_cast<int64_t>(train.size());
      out.n_val = static_cast<int64_t>(val.size());
      out.checkpoint = MakeCheckpoint(name, profile, vocab_hash, dims.ToMap(), r.best);
      break;
    }
    case ModuleId::kGuesser: {
      const auto train = GuesserExamples(Select(data.splits.train, Succeeded), data.vocab);
      const auto val = GuesserExamples(Select(data.splits.val, Succeeded), data.vocab);
      const GuesserDims dims = GuesserDimsFor(cfg, vocab_size, data.n_categories);
      auto r = TrainLoop<float>(
          GuesserModel::Random(dims, init_seed), train, val,
          [](const GuesserModel& m, GuesserModel* g,
             const std::vector<const GuesserExample*>& b) { return GuesserBatchLoss(m, g, b); },
          loop, on_epoch);
      Fill(&out, r);
      out.n_train = static_cast<int64_t>(train.size());
      out.n_val = static_cast<int64_t>(val.size());
      out.checkpoint = MakeCheckpoint(name, profile, vocab_hash, dims.ToMap(), r.best);
      break;
    }
    case ModuleId::kQGen: {
      const auto train =
          QGenExamples(Select(data.splits.train, Succeeded), data.vocab, data.features);
      const auto val =
          QGenExamples(Select(data.splits.val, Succeeded), data.vocab, data.features);
      const QGenDims dims = QGenDimsFor(cfg, vocab_size, data.features.dim());
      auto r = TrainLoop<float>(
          QGenModel::Random(dims, init_seed), train, val,
          [](const QGenModel& m, QGenModel* g, const std::vector<const QGenExample*>& b) {
            return QGenBatchLoss(m, g, b);
          },
          loop, on_epoch);
      Fill(&out, r);
      out.n_train = static_cast<int64_t>(train.size());
      out.n_val = static_cast<int64_t>(val.size());
      out.checkpoint = MakeCheckpoint(name, profile, vocab_hash, dims.ToMap(), r.best);
      break;
    }
    case ModuleId::kDm1:
    case ModuleId::kDm2:
    case ModuleId::kHybrid: {
      const DmVariant variant = VariantOf(id);
      const LabelScheme scheme =
          id == ModuleId::kDm1 ? LabelScheme::kGt : ParseLabelScheme(cfg.Str("dm2_label"));
      DmSources src{upstream.qgen ? &*upstream.qgen : nullptr,
                    upstream.guesser ? &*upstream.guesser : nullptr, &data.features,
                    &data.vocab};
      const DmDims dims{data.features.dim(), DmStateDim(variant, src), cfg.Int("dm_hidden")};
      auto train = BuildDmExamples(data.splits.train, variant, scheme, src, &out.labels);
      auto val = BuildDmExamples(data.splits.val, variant, scheme, src);
      out.n_train = static_cast<int64_t>(train.size());
      out.n_val = static_cast<int64_t>(val.size());
      auto r = DmTrain(DmModel::Random(dims, init_seed), std::move(train), std::move(val),
                       ParseClassWeighting(cfg.Str("dm_class_weighting")), loop, on_epoch);
      Fill(&out, r);
      DimMap dm = dims.ToMap();
      dm["label_scheme"] = static_cast<int>(scheme);
      out.checkpoint = MakeCheckpoint(name, profile, vocab_hash, dm, r.best);
      break;
    }
  }
  return out;
}

void InstallModule(ModuleId id, const Checkpoint& ckpt, ModelSet* models) {
  switch (id) {
    case ModuleId::kOracle: {
      OracleModel m = OracleModel::Zeros(OracleDims::FromMap(ckpt.dims));
      FillParams(ckpt, m);
      models->oracle = std::move(m);
      break;
    }
    case ModuleId::kGuesser: {
      GuesserModel m = GuesserModel::Zeros(GuesserDims::FromMap(ckpt.dims));
      FillParams(ckpt, m);
      models->guesser = std::move(m);
      break;
    }
    case ModuleId::kQGen: {
      QGenModel m = QGenModel::Zeros(QGenDims::FromMap(ckpt.dims));
      FillParams(ckpt, m);
      models->qgen = std::move(m);
      break;
    }
    case ModuleId::kDm1:
    case ModuleId::kDm2:
    case ModuleId::kHybrid: {
      DmModel m = DmModel::Zeros(DmDims::FromMap(ckpt.dims));
      FillParams(ckpt, m);
      (id == ModuleId::kDm1 ? models->dm1 : id == ModuleId::kDm2 ? models->dm2 : models->hybrid) =
          std::move(m);
      break;
    }
  }
}

std::string TrainingLogCsv(const std::vector<EpochLog>& log) {
  std::string out = "epoch,train_loss,val_loss,improved\n";
  char buf[128];
  for (const EpochLog& e : log) {
    std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%d\n", e.epoch, e.train_loss, e.val_loss,
                  e.improved ? 1 : 0);
    out += buf;
  }
  return out;
}

ModelSet LoadModels(const CheckpointDir& dir, const std::vector<ModuleId>& modules,
                    const std::string& profile, const Vocab& vocab) {
  ModelSet set;
  const std::string hash = vocab.HashHex();
  for (ModuleId id : modules) {
    const std::string path = dir.ModulePath(id);
    if (!FileExists(path)) {
      throw DependencyError("missing " + ModuleName(id) + " checkpoint " + path +
                            " (train it first)");
    }
    const Checkpoint c = LoadCheckpoint(path);
    ExpectCompatible(c, ModuleName(id), profile, hash);
    InstallModule(id, c, &set);
  }
  return set;
}

}  // namespace gwdm
