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

#ifndef GWDM_MODELS_SEQUENCE_H_
#define GWDM_MODELS_SEQUENCE_H_

#include <algorithm>
#include <vector>

#include "gwdm/core/graph.h"
#include "gwdm/core/layers.h"
#include "gwdm/data/spatial.h"
#include "gwdm/data/vocab.h"

namespace gwdm {

// Summed loss over a batch and the number of terms in the sum. When a model's
// batch-loss function receives a gradient bundle, it back-propagates the mean.
struct BatchLoss {
  double sum = 0;
  int count = 0;
};

struct SequenceEncoding {
  LstmVarsState final;
  std::vector<LstmVarsState> steps;  // state after each position, if requested
};

// Runs an LSTM over a batch of token sequences of unequal length (one column
// per sequence). Columns whose sequence has ended keep their last state.
// `extra`, when valid, is concatenated to every step's word embedding.
template <typename T>
SequenceEncoding EncodeTokens(Graph<T>& g, const typename Lstm<T>::Vars& lstm,
                              Var embedding, const std::vector<const std::vector<int>*>& seqs,
                              Var extra, LstmVarsState state, bool keep_steps) {
  const int n = static_cast<int>(seqs.size());
  size_t max_len = 0;
  for (const auto* s : seqs) max_len = std::max(max_len, s->size());
  SequenceEncoding out;
  std::vector<int> ids(n);
  std::vector<T> keep(n);
  for (size_t t = 0; t < max_len; ++t) {
    bool all = true;
    for (int j = 0; j < n; ++j) {
      const bool live = t < seqs[j]->size();
      ids[j] = live ? (*seqs[j])[t] : kPadId;
      keep[j] = live ? T(1) : T(0);
      all = all && live;
    }
    Var x = g.Lookup(embedding, ids);
    if (extra.valid()) x = g.ConcatRows({x, extra});
    const LstmVarsState next = ApplyLstm(g, lstm, x, state);
    if (all) {
      state = next;
    } else {
      state = {g.Blend(next.h, state.h, keep), g.Blend(next.c, state.c, keep)};
    }
    if (keep_steps) out.steps.push_back(state);
  }
  out.final = state;
  return out;
}

inline Mat<float> SpatialColumn(const SpatialVec& s) {
  Mat<float> m(kSpatialDim, 1);
  for (int i = 0; i < kSpatialDim; ++i) m(i, 0) = s[i];
  return m;
}

template <typename T>
Mat<T> SpatialMatrix(const std::vector<const SpatialVec*>& rows) {
  Mat<T> m(kSpatialDim, static_cast<Eigen::Index>(rows.size()));
  for (size_t j = 0; j < rows.size(); ++j) {
    for (int i = 0; i < kSpatialDim; ++i) m(i, j) = static_cast<T>((*rows[j])[i]);
  }
  return m;
}

// Index of the largest entry; ties go to the lowest index.
template <typename Derived>
int ArgmaxFirst(const Eigen::MatrixBase<Derived>& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i) {
    if (v(i) > v(best)) best = i;
  }
  return best;
}

}  // namespace gwdm

#endif  // GWDM_MODELS_SEQUENCE_H_
