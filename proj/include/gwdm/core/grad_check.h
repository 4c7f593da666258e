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

#ifndef GWDM_CORE_GRAD_CHECK_H_
#define GWDM_CORE_GRAD_CHECK_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gwdm/core/errors.h"
#include "gwdm/core/layers.h"
#include "gwdm/core/random.h"
#include "gwdm/core/tensor.h"

namespace gwdm {

struct GradCheckReport {
  double max_rel_error = 0;
  std::string worst_param;
  Eigen::Index worst_index = -1;
  int coordinates = 0;
};

struct GradCheckOptions {
  uint64_t seed = 7;
  // Coordinates sampled per parameter matrix; smaller matrices are checked
  // exhaustively.
  int samples_per_param = 24;
  double step = 1e-5;
};

// Compares analytic gradients against central differences in 64-bit.
// `loss_and_grad(params, grads)` must evaluate the loss and, when `grads` is
// non-null, accumulate d loss / d params into it. The relative error of a
// coordinate is |a - n| / max(1, |a|, |n|).
template <typename P>
GradCheckReport GradCheck(
    P& params, const std::function<double(P&, P*)>& loss_and_grad,
    const GradCheckOptions& options = {}) {
  P grads = ZerosLike(params);
  const double base = loss_and_grad(params, &grads);
  if (!std::isfinite(base)) throw NumericError("grad check: non-finite loss");

  auto values = CollectParams<double>(params);
  auto analytic = CollectParams<double>(grads);
  Rng rng(options.seed);
  GradCheckReport report;
  for (size_t p = 0; p < values.size(); ++p) {
    Mat<double>& m = *values[p].second;
    const Mat<double>& a = *analytic[p].second;
    std::vector<Eigen::Index> coords;
    if (m.size() <= options.samples_per_param) {
      for (Eigen::Index i = 0; i < m.size(); ++i) coords.push_back(i);
    } else {
      for (int s = 0; s < options.samples_per_param; ++s) {
        coords.push_back(static_cast<Eigen::Index>(rng.Below(m.size())));
      }
    }
    for (Eigen::Index idx : coords) {
      double& slot = m.data()[idx];
      const double saved = slot;
      slot = saved + options.step;
      const double up = loss_and_grad(params, nullptr);
      slot = saved - options.step;
      const double down = loss_and_grad(params, nullptr);
      slot = saved;
      if (!std::isfinite(up) || !std::isfinite(down)) {
        throw NumericError("grad check: non-finite loss at " + values[p].first +
                           "[" + std::to_string(idx) + "]");
      }
      const double numeric = (up - down) / (2 * options.step);
      const double an = a.data()[idx];
      const double rel = std::abs(an - numeric) /
                         std::max({1.0, std::abs(an), std::abs(numeric)});
      ++report.coordinates;
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_param = values[p].first;
        report.worst_index = idx;
      }
    }
  }
  return report;
}

}  // namespace gwdm

#endif  // GWDM_CORE_GRAD_CHECK_H_
