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

#ifndef GWDM_MODELS_DIMS_H_
#define GWDM_MODELS_DIMS_H_

#include <map>
#include <string>

#include "gwdm/core/errors.h"

namespace gwdm {

using DimMap = std::map<std::string, int>;

inline int DimAt(const DimMap& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) throw FormatError("missing dimension '" + key + "'");
  return it->second;
}

struct OracleDims {
  int vocab_size = 0;
  int word_emb = 64;
  int hidden = 64;
  int n_categories = 0;  // rows of the category table (max category id + 1)
  int category_emb = 16;
  int mlp_hidden = 128;

  DimMap ToMap() const {
    return {{"vocab_size", vocab_size}, {"word_emb", word_emb},
            {"hidden", hidden},         {"n_categories", n_categories},
            {"category_emb", category_emb}, {"mlp_hidden", mlp_hidden}};
  }
  static OracleDims FromMap(const DimMap& m) {
    return {DimAt(m, "vocab_size"),   DimAt(m, "word_emb"),     DimAt(m, "hidden"),
            DimAt(m, "n_categories"), DimAt(m, "category_emb"), DimAt(m, "mlp_hidden")};
  }
  bool operator==(const OracleDims&) const = default;
};

struct GuesserDims {
  int vocab_size = 0;
  int word_emb = 64;
  int hidden = 64;
  int n_categories = 0;
  int category_emb = 16;
  int mlp_hidden = 64;

  DimMap ToMap() const {
    return {{"vocab_size", vocab_size}, {"word_emb", word_emb},
            {"hidden", hidden},         {"n_categories", n_categories},
            {"category_emb", category_emb}, {"mlp_hidden", mlp_hidden}};
  }
  static GuesserDims FromMap(const DimMap& m) {
    return {DimAt(m, "vocab_size"),   DimAt(m, "word_emb"),     DimAt(m, "hidden"),
            DimAt(m, "n_categories"), DimAt(m, "category_emb"), DimAt(m, "mlp_hidden")};
  }
  bool operator==(const GuesserDims&) const = default;
};

struct QGenDims {
  int vocab_size = 0;
  int word_emb = 64;
  int feature_dim = 0;
  int projection = 32;
  int hidden = 128;

  DimMap ToMap() const {
    return {{"vocab_size", vocab_size},
            {"word_emb", word_emb},
            {"feature_dim", feature_dim},
            {"projection", projection},
            {"hidden", hidden}};
  }
  static QGenDims FromMap(const DimMap& m) {
    return {DimAt(m, "vocab_size"), DimAt(m, "word_emb"), DimAt(m, "feature_dim"),
            DimAt(m, "projection"), DimAt(m, "hidden")};
  }
  bool operator==(const QGenDims&) const = default;
};

struct DmDims {
  int feature_dim = 0;
  int state_dim = 0;  // hidden width of the consumed encoder state
  int hidden = 128;

  DimMap ToMap() const {
    return {{"feature_dim", feature_dim}, {"state_dim", state_dim}, {"hidden", hidden}};
  }
  static DmDims FromMap(const DimMap& m) {
    return {DimAt(m, "feature_dim"), DimAt(m, "state_dim"), DimAt(m, "hidden")};
  }
  bool operator==(const DmDims&) const = default;
};

}  // namespace gwdm

#endif  // GWDM_MODELS_DIMS_H_
