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

#ifndef GWDM_CORE_TENSOR_H_
#define GWDM_CORE_TENSOR_H_

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gwdm/core/errors.h"

namespace gwdm {

// Compute-side dense matrix. Activations are laid out one example per column.
template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <typename T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

// Storage-side tensor: explicit shape and flat row-major float data. This is
// the on-disk representation of every parameter.
struct Tensor {
  std::vector<int> shape;
  std::vector<float> data;

  size_t size() const { return data.size(); }

  static Tensor FromMatrix(const Mat<float>& m) {
    Tensor t;
    t.shape = {static_cast<int>(m.rows()), static_cast<int>(m.cols())};
    t.data.resize(m.size());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        t.data[r * m.cols() + c] = m(r, c);
      }
    }
    return t;
  }

  Mat<float> ToMatrix() const {
    if (shape.size() != 2) throw DimensionError("tensor is not 2-D");
    if (static_cast<size_t>(shape[0]) * shape[1] != data.size()) {
      throw DimensionError("tensor shape does not match data length");
    }
    Mat<float> m(shape[0], shape[1]);
    for (int r = 0; r < shape[0]; ++r) {
      for (int c = 0; c < shape[1]; ++c) m(r, c) = data[r * shape[1] + c];
    }
    return m;
  }
};

template <typename T>
bool AllFinite(const Mat<T>& m) {
  return m.allFinite();
}

inline std::string ShapeString(Eigen::Index rows, Eigen::Index cols) {
  return "[" + std::to_string(rows) + "x" + std::to_string(cols) + "]";
}

}  // namespace gwdm

#endif  // GWDM_CORE_TENSOR_H_
