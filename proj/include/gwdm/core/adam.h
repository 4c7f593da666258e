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

#ifndef GWDM_CORE_ADAM_H_
#define GWDM_CORE_ADAM_H_

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gwdm/core/errors.h"
#include "gwdm/core/layers.h"
#include "gwdm/core/tensor.h"

namespace gwdm {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <typename T>
struct AdamState {
  Mat<T> m;
  Mat<T> v;
  int64_t t = 0;
  AdamConfig config;

  static AdamState For(const Mat<T>& param, AdamConfig config) {
    return AdamState{Mat<T>::Zero(param.rows(), param.cols()),
                     Mat<T>::Zero(param.rows(), param.cols()), 0, config};
  }
};

// One bias-corrected Adam update of `param` in place.
template <typename T>
void AdamStep(Mat<T>& param, const Mat<T>& grad, AdamState<T>& state) {
  if (param.rows() != grad.rows() || param.cols() != grad.cols() ||
      state.m.rows() != param.rows() || state.m.cols() != param.cols()) {
    throw DimensionError("adam: param " + ShapeString(param.rows(), param.cols()) +
                         " grad " + ShapeString(grad.rows(), grad.cols()));
  }
  const AdamConfig& c = state.config;
  ++state.t;
  const T b1 = static_cast<T>(c.beta1);
  const T b2 = static_cast<T>(c.beta2);
  state.m = b1 * state.m + (T(1) - b1) * grad;
  state.v = b2 * state.v + (T(1) - b2) * grad.cwiseProduct(grad);
  const T m_corr = static_cast<T>(1.0 - std::pow(c.beta1, state.t));
  const T v_corr = static_cast<T>(1.0 - std::pow(c.beta2, state.t));
  const T lr = static_cast<T>(c.lr);
  const T eps = static_cast<T>(c.eps);
  param.array() -= lr * (state.m.array() / m_corr) /
                   ((state.v.array() / v_corr).sqrt() + eps);
}

// Adam over every matrix of a parameter bundle, visited in a fixed order.
template <typename T, typename P>
class AdamOptimizer {
 public:
  AdamOptimizer(P& params, AdamConfig config) {
    for (auto& [name, m] : CollectParams<T>(params)) {
      states_.push_back(AdamState<T>::For(*m, config));
    }
  }

  void Step(P& params, P& grads) {
    auto ps = CollectParams<T>(params);
    auto gs = CollectParams<T>(grads);
    for (size_t i = 0; i < ps.size(); ++i) {
      AdamStep(*ps[i].second, *gs[i].second, states_[i]);
    }
  }

 private:
  std::vector<AdamState<T>> states_;
};

// Rescales all gradients so their joint L2 norm is at most `max_norm`.
// Returns the norm before clipping.
template <typename T, typename P>
double ClipGlobalNorm(P& grads, double max_norm) {
  double sq = 0;
  for (auto& [name, m] : CollectParams<T>(grads)) {
    sq += m->template cast<double>().squaredNorm();
  }
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0) {
    const T scale = static_cast<T>(max_norm / norm);
    for (auto& [name, m] : CollectParams<T>(grads)) *m *= scale;
  }
  return norm;
}

}  // namespace gwdm

#endif  // GWDM_CORE_ADAM_H_
