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

#ifndef GWDM_TRAIN_LOOP_H_
#define GWDM_TRAIN_LOOP_H_

// Minibatch training with Adam, global-norm clipping and early stopping on
// validation loss.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "gwdm/core/adam.h"
#include "gwdm/core/errors.h"
#include "gwdm/core/layers.h"
#include "gwdm/core/random.h"
#include "gwdm/models/sequence.h"

namespace gwdm {

struct LoopConfig {
  int batch_size = 32;
  int max_epochs = 20;
  int patience = 5;
  double clip_norm = 5.0;
  AdamConfig adam;
  uint64_t seed = 1;
};

struct EpochLog {
  int epoch = 0;  // 1-based
  double train_loss = 0;
  double val_loss = 0;
  bool improved = false;
};

// Tracks the best validation loss. An epoch improves only if its loss is
// strictly lower than every earlier one.
class EarlyStopper {
 public:
  explicit EarlyStopper(int patience) : patience_(patience) {
    if (patience < 1) throw ConfigError("patience must be at least 1");
  }

  bool Update(int epoch, double val_loss) {
    if (val_loss < best_) {
      best_ = val_loss;
      best_epoch_ = epoch;
      stale_ = 0;
      return true;
    }
    ++stale_;
    return false;
  }

  bool ShouldStop() const { return stale_ >= patience_; }
  int best_epoch() const { return best_epoch_; }
  double best() const { return best_; }

 private:
  int patience_;
  double best_ = std::numeric_limits<double>::infinity();
  int best_epoch_ = 0;
  int stale_ = 0;
};

template <typename P>
struct LoopResult {
  P best;
  int best_epoch = 0;
  double best_val = 0;
  std::vector<EpochLog> log;
};

// Mean loss over `data` without gradients, in data order.
template <typename P, typename Ex, typename LossFn>
double EvaluateLoss(const P& params, const std::vector<Ex>& data, int batch_size,
                    LossFn&& loss) {
  BatchLoss total;
  for (size_t lo = 0; lo < data.size(); lo += batch_size) {
    std::vector<const Ex*> batch;
    for (size_t i = lo; i < std::min(data.size(), lo + batch_size); ++i) {
      batch.push_back(&data[i]);
    }
    const BatchLoss b = loss(params, static_cast<P*>(nullptr), batch);
    total.sum += b.sum;
    total.count += b.count;
  }
  return total.count > 0 ? total.sum / total.count : 0.0;
}

// `loss(params, grad_or_null, batch)` returns a BatchLoss and, when given a
// gradient bundle, accumulates the gradient of the batch mean into it.
// Returns the weights of the epoch with the lowest validation loss.
template <typename T, typename P, typename Ex, typename LossFn>
LoopResult<P> TrainLoop(P params, const std::vector<Ex>& train, const std::vector<Ex>& val,
                        LossFn&& loss, const LoopConfig& config,
                        const std::function<void(const EpochLog&)>& on_epoch = {}) {
  if (train.empty()) throw ArgumentError("training split is empty");
  if (val.empty()) throw ArgumentError("validation split is empty");
  if (config.batch_size < 1) throw ConfigError("batch_size must be positive");
  if (config.max_epochs < 1) throw ConfigError("max_epochs must be positive");
  if (!(config.adam.lr > 0)) throw ConfigError("learning rate must be positive");

  EarlyStopper stopper(config.patience);
  AdamOptimizer<T, P> adam(params, config.adam);
  P grads = ZerosLike(params);
  LoopResult<P> result{params, 0, 0, {}};
  Rng rng(config.seed);
  std::vector<size_t> order(train.size());

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), size_t{0});
    rng.Shuffle(order);
    BatchLoss epoch_loss;
    int batch_no = 0;
    for (size_t lo = 0; lo < order.size(); lo += config.batch_size, ++batch_no) {
      std::vector<const Ex*> batch;
      for (size_t i = lo; i < std::min(order.size(), lo + config.batch_size); ++i) {
        batch.push_back(&train[order[i]]);
      }
      grads.VisitParams("", [](const std::string&, Mat<T>& m) { m.setZero(); });
      const BatchLoss b = loss(static_cast<const P&>(params), &grads, batch);
      if (!std::isfinite(b.sum)) {
        throw NumericError("non-finite training loss at epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(batch_no + 1));
      }
      if (b.count == 0) continue;
      ClipGlobalNorm<T>(grads, config.clip_norm);
      adam.Step(params, grads);
      epoch_loss.sum += b.sum;
      epoch_loss.count += b.count;
    }
    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = epoch_loss.count > 0 ? epoch_loss.sum / epoch_loss.count : 0.0;
    entry.val_loss = EvaluateLoss(static_cast<const P&>(params), val, config.batch_size, loss);
    if (!std::isfinite(entry.val_loss)) {
      throw NumericError("non-finite validation loss at epoch " + std::to_string(epoch));
    }
    entry.improved = stopper.Update(epoch, entry.val_loss);
    if (entry.improved) {
      result.best = params;
      result.best_epoch = epoch;
      result.best_val = entry.val_loss;
    }
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
    if (stopper.ShouldStop()) break;
  }
  return result;
}

}  // namespace gwdm

#endif  // GWDM_TRAIN_LOOP_H_
