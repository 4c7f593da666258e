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

#ifndef GWDM_CORE_OPS_H_
#define GWDM_CORE_OPS_H_

// Single-example entry points over the layer set. These evaluate through the
// same Graph code paths the models use.

#include <cmath>
#include <string>

#include "gwdm/core/graph.h"
#include "gwdm/core/layers.h"

namespace gwdm {

template <typename T>
Vec<T> MlpApply(const Vec<T>& x, const Mlp<T>& mlp) {
  Graph<T> g;
  const Var in = g.Constant(x);
  const Var out = ApplyMlp(g, mlp.Bind(g, nullptr), in);
  return g.Value(out).col(0);
}

template <typename T>
LstmStateT<T> LstmStep(const Vec<T>& x, const LstmStateT<T>& state,
                       const Lstm<T>& lstm) {
  Graph<T> g;
  const LstmVarsState next =
      ApplyLstm(g, lstm.Bind(g, nullptr), g.Constant(x),
                {g.Constant(state.h), g.Constant(state.c)});
  return {g.Value(next.h), g.Value(next.c)};
}

template <typename T>
Vec<T> EmbeddingLookup(const Embedding<T>& table, int id) {
  Graph<T> g;
  return g.Value(g.Lookup(table.Bind(g, nullptr), {id})).col(0);
}

template <typename T>
Vec<T> Softmax(const Vec<T>& logits) {
  if (logits.size() == 0) throw ArgumentError("softmax of an empty vector");
  return Graph<T>::SoftmaxColumn(logits);
}

// -w[target] * ln(probs[target]); uniform weights when `class_weights` is null.
template <typename T>
T CrossEntropy(const Vec<T>& probs, int target,
               const Vec<T>* class_weights = nullptr) {
  if (target < 0 || target >= probs.size()) {
    throw IndexError("cross entropy target " + std::to_string(target) +
                     " outside " + std::to_string(probs.size()) + " classes");
  }
  const T w = class_weights != nullptr ? (*class_weights)(target) : T(1);
  return -w * std::log(probs(target));
}

}  // namespace gwdm

#endif  // GWDM_CORE_OPS_H_
