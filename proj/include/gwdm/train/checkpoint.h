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

#ifndef GWDM_TRAIN_CHECKPOINT_H_
#define GWDM_TRAIN_CHECKPOINT_H_

// Checkpoint file layout:
//
//   GWDM-CHECKPOINT 1
//   module <name>
//   profile <toy|paper>
//   vocab_hash <hex>
//   dim <key> <value>          (one line per dimension)
//   tensor <name> <rows> <cols> (one line per tensor, in blob order)
//   end
//   <little-endian float32 blob, row-major per tensor>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gwdm/core/errors.h"
#include "gwdm/core/layers.h"
#include "gwdm/core/tensor.h"
#include "gwdm/models/dims.h"

namespace gwdm {

struct Checkpoint {
  std::string module;
  std::string profile;
  std::string vocab_hash;
  DimMap dims;
  std::vector<std::pair<std::string, Tensor>> tensors;
};

std::string EncodeCheckpoint(const Checkpoint& ckpt);
// Throws FormatError on a malformed header or a blob of the wrong length.
Checkpoint DecodeCheckpoint(std::string_view bytes);

void SaveCheckpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint LoadCheckpoint(const std::string& path);

// Throws CompatibilityError when the checkpoint was written for a different
// module, dimension profile or vocabulary.
void ExpectCompatible(const Checkpoint& ckpt, const std::string& module,
                      const std::string& profile, const std::string& vocab_hash);

// FNV-1a 64 of a byte string as 16 hex digits.
std::string HashBytes(std::string_view bytes);

template <typename P>
Checkpoint MakeCheckpoint(const std::string& module, const std::string& profile,
                          const std::string& vocab_hash, const DimMap& dims, P params) {
  Checkpoint c{module, profile, vocab_hash, dims, {}};
  for (auto& [name, m] : CollectParams<float>(params)) {
    c.tensors.emplace_back(name, Tensor::FromMatrix(*m));
  }
  return c;
}

// Copies checkpoint tensors into `params`, which must already have the
// checkpoint's structure.
template <typename P>
void FillParams(const Checkpoint& c, P& params) {
  auto dst = CollectParams<float>(params);
  if (dst.size() != c.tensors.size()) {
    throw CompatibilityError("checkpoint holds " + std::to_string(c.tensors.size()) +
                             " tensors, model expects " + std::to_string(dst.size()));
  }
  for (size_t i = 0; i < dst.size(); ++i) {
    const auto& [name, t] = c.tensors[i];
    Mat<float>& m = *dst[i].second;
    if (name != dst[i].first || t.shape.size() != 2 || t.shape[0] != m.rows() ||
        t.shape[1] != m.cols()) {
      throw CompatibilityError("checkpoint tensor " + name + " does not match model tensor " +
                               dst[i].first + " " + ShapeString(m.rows(), m.cols()));
    }
    m = t.ToMatrix();
  }
}

}  // namespace gwdm

#endif  // GWDM_TRAIN_CHECKPOINT_H_
