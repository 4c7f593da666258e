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

#ifndef GWDM_TRAIN_TRAINER_H_
#define GWDM_TRAIN_TRAINER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gwdm/data/features.h"
#include "gwdm/data/game.h"
#include "gwdm/data/vocab.h"
#include "gwdm/models/decider.h"
#include "gwdm/models/oracle.h"
#include "gwdm/models/questioner.h"
#include "gwdm/train/checkpoint.h"
#include "gwdm/train/config.h"
#include "gwdm/train/loop.h"

namespace gwdm {

enum class ModuleId { kOracle, kGuesser, kQGen, kDm1, kDm2, kHybrid };

std::string ModuleName(ModuleId id);  // "oracle", "guesser", "qgen", "dm1", "dm2", "hybrid"
ModuleId ParseModule(const std::string& name);

// oracle, guesser, qgen, dm1, dm2 and, when enabled, hybrid.
std::vector<ModuleId> TrainOrder(bool include_hybrid);

struct DataSplits {
  std::vector<GameRecord> train;
  std::vector<GameRecord> val;
  std::vector<GameRecord> test;
};

// In file order: the last 2 * floor(n / 12) games form validation then test,
// floor(n / 12) each.
DataSplits SplitGames(const std::vector<GameRecord>& games);

// Rows of the category table: one more than the largest category id.
int CategoryTableSize(const std::vector<GameRecord>& games);

struct TrainData {
  DataSplits splits;
  FeatureTable features;
  Vocab vocab;  // built from the training split
  int n_categories = 0;
};

TrainData PrepareTrainData(const std::vector<GameRecord>& games, FeatureTable features,
                           int min_word_freq);

OracleDims OracleDimsFor(const RunConfig& cfg, int vocab_size, int n_categories);
GuesserDims GuesserDimsFor(const RunConfig& cfg, int vocab_size, int n_categories);
QGenDims QGenDimsFor(const RunConfig& cfg, int vocab_size, int feature_dim);

// Frozen trained modules.
struct ModelSet {
  std::optional<OracleModel> oracle;
  std::optional<GuesserModel> guesser;
  std::optional<QGenModel> qgen;
  std::optional<DmModel> dm1;
  std::optional<DmModel> dm2;
  std::optional<DmModel> hybrid;

  const DmModel* Dm(DmVariant v) const;
};

struct TrainOutcome {
  Checkpoint checkpoint;
  std::vector<EpochLog> log;
  int best_epoch = 0;
  double best_val = 0;
  int64_t n_train = 0;
  int64_t n_val = 0;
  std::vector<LabelRow> labels;  // decision modules only
};

// Trains one module on its own objective. Decision modules read frozen
// encoders from `upstream` and throw DependencyError when they are missing.
TrainOutcome TrainModule(ModuleId id, const TrainData& data, const ModelSet& upstream,
                         const RunConfig& cfg,
                         const std::function<void(const EpochLog&)>& on_epoch = {});

// Installs a trained module into a model set.
void InstallModule(ModuleId id, const Checkpoint& ckpt, ModelSet* models);

// "epoch,train_loss,val_loss,improved"
std::string TrainingLogCsv(const std::vector<EpochLog>& log);

// Files of a checkpoint directory.
struct CheckpointDir {
  std::string dir;

  std::string VocabPath() const { return dir + "/vocab.txt"; }
  std::string ModulePath(ModuleId id) const { return dir + "/" + ModuleName(id) + ".ckpt"; }
  std::string LogPath(ModuleId id) const { return dir + "/" + ModuleName(id) + ".log.csv"; }
  std::string LabelsPath(ModuleId id) const {
    return dir + "/" + ModuleName(id) + ".labels.csv";
  }
};

// Loads and validates the listed modules. Missing files raise DependencyError;
// profile or vocabulary mismatches raise CompatibilityError.
ModelSet LoadModels(const CheckpointDir& dir, const std::vector<ModuleId>& modules,
                    const std::string& profile, const Vocab& vocab);

}  // namespace gwdm

#endif  // GWDM_TRAIN_TRAINER_H_
