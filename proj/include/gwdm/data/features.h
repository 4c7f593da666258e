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

#ifndef GWDM_DATA_FEATURES_H_
#define GWDM_DATA_FEATURES_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace gwdm {

// Precomputed whole-image feature vectors keyed by image id.
//
// Text format: a `dim=<N>` header line followed by one row per image,
// `<image_id>\t<f1>,<f2>,...,<fN>`.
class FeatureTable {
 public:
  FeatureTable() = default;
  explicit FeatureTable(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  size_t size() const { return rows_.size(); }
  bool Contains(int64_t image_id) const { return rows_.count(image_id) > 0; }

  // Throws AbsentKeyError for unknown ids.
  const std::vector<float>& Lookup(int64_t image_id) const;

  // Replaces any existing row; returns true if a row was overwritten.
  bool Set(int64_t image_id, std::vector<float> values);

  const std::vector<std::string>& warnings() const { return warnings_; }

  std::string Serialize() const;
  static FeatureTable Parse(std::string_view text);
  static FeatureTable Load(const std::string& path);
  void Save(const std::string& path) const;

 private:
  int dim_ = 0;
  std::map<int64_t, std::vector<float>> rows_;
  std::vector<std::string> warnings_;
};

}  // namespace gwdm

#endif  // GWDM_DATA_FEATURES_H_
